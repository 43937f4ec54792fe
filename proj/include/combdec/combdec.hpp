// Copyright 2026 The combdec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "combdec/analysis.hpp"
#include "combdec/cic_filter.hpp"
#include "combdec/filter_params.hpp"
#include "combdec/fixed.hpp"
#include "combdec/mcla.hpp"
#include "combdec/nonrec_filter.hpp"
#include "combdec/oracle.hpp"
#include "combdec/pipeline.hpp"
#include "combdec/sample_io.hpp"
