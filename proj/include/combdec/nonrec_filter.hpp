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

// Non-recursive comb decimator. R = 2^S is split into S identical stages;
// each stage is N cascaded two-tap sections (1 + z^-1) followed by a
// decimate-by-2 that keeps even-indexed samples. Stage k runs at fs / 2^k and
// grows the word by N bits, so no stage ever needs wraparound headroom.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "combdec/filter_params.hpp"
#include "combdec/fixed.hpp"
#include "combdec/mcla.hpp"

namespace combdec {

/// x + x[n-1] at `width` bits; `delay_reg` takes x.
inline std::int64_t twotap_step(std::int64_t& delay_reg, std::int64_t x, int width,
                                ArithMode mode = ArithMode::fast) {
  const std::int64_t y = add_at(x, delay_reg, width, mode);
  delay_reg = x;
  return y;
}

struct NonRecStage {
  std::vector<std::int64_t> delays;  // one register per two-tap section
  int input_width = 1;
  bool odd_phase = false;            // next sample is discarded by the 2:1 decimator

  NonRecStage() = default;
  NonRecStage(int sections, int in_width)
      : delays(static_cast<std::size_t>(sections), 0), input_width(in_width) {}

  int sections() const { return static_cast<int>(delays.size()); }
  int output_width() const { return input_width + sections(); }

  void clear() {
    std::fill(delays.begin(), delays.end(), 0);
    odd_phase = false;
  }

  /// Full-rate (1+z^-1)^N output for one sample, section widths growing by one bit each.
  std::int64_t filter(std::int64_t x, ArithMode mode, std::uint64_t* overflow_events = nullptr) {
    std::int64_t v = x;
    for (int s = 0; s < sections(); ++s) {
      const int w = input_width + s + 1;
      auto& reg = delays[static_cast<std::size_t>(s)];
      if (overflow_events && w < 64 && !fits(v + reg, w)) ++*overflow_events;
      v = twotap_step(reg, v, w, mode);
    }
    return v;
  }

  /// Filters one sample and applies the 2:1 decimator.
  std::optional<std::int64_t> push(std::int64_t x, ArithMode mode,
                                   std::uint64_t* overflow_events = nullptr) {
    const std::int64_t y = filter(x, mode, overflow_events);
    const bool keep = !odd_phase;
    odd_phase = !odd_phase;
    return keep ? std::optional<std::int64_t>(y) : std::nullopt;
  }
};

/// One stage over a whole sequence: ceil(len/2) outputs at input width + n.
inline FixedSequence stage_process(NonRecStage& stage, const FixedSequence& input,
                                   ArithMode mode = ArithMode::fast) {
  if (input.width != stage.input_width)
    throw WidthMismatch("stage expects " + std::to_string(stage.input_width) +
                        "-bit input, got " + std::to_string(input.width));
  FixedSequence out;
  out.width = stage.output_width();
  out.samples.reserve(input.size() / 2 + 1);
  for (auto x : input.samples)
    if (auto y = stage.push(x, mode)) out.samples.push_back(*y);
  return out;
}

inline FixedSequence stage_process(const FixedSequence& input, int n,
                                   ArithMode mode = ArithMode::fast) {
  NonRecStage stage(n, input.width);
  return stage_process(stage, input, mode);
}

struct NonRecState {
  std::vector<NonRecStage> stages;
};

class NonRecFilter {
 public:
  explicit NonRecFilter(const FilterConfig& config, ArithMode mode = ArithMode::fast)
      : config_(config), mode_(mode) {
    config_.arch = Architecture::nonrec;
    config_.validate();
    schedule_ = nonrec_width_schedule(config_);
    for (int w : schedule_) check_width(w);
    reset();
  }

  const FilterConfig& config() const { return config_; }
  const NonRecState& state() const { return state_; }
  const std::vector<int>& width_schedule() const { return schedule_; }
  int output_width() const { return schedule_.back(); }

  /// Two-tap sums that did not fit their section width (should stay zero).
  std::uint64_t overflow_events() const { return overflow_events_; }

  void reset() {
    state_.stages.clear();
    for (int k = 0; k < config_.nonrec_stages(); ++k)
      state_.stages.emplace_back(config_.order_n, schedule_[static_cast<std::size_t>(k)]);
    overflow_events_ = 0;
  }

  std::optional<std::int64_t> push(std::int64_t x) {
    std::optional<std::int64_t> v = x;
    for (auto& stage : state_.stages) {
      v = stage.push(*v, mode_, &overflow_events_);
      if (!v) return std::nullopt;
    }
    return v;
  }

  FixedSequence process(const FixedSequence& input) {
    if (input.width != config_.input_width)
      throw WidthMismatch("input width " + std::to_string(input.width) +
                          " does not match configured bin=" + std::to_string(config_.input_width));
    input.validate();
    FixedSequence out;
    out.width = output_width();
    for (auto x : input.samples)
      if (auto y = push(x)) out.samples.push_back(*y);
    return out;
  }

 private:
  FilterConfig config_;
  ArithMode mode_;
  std::vector<int> schedule_;
  NonRecState state_;
  std::uint64_t overflow_events_ = 0;
};

inline FixedSequence nonrec_process(const FilterConfig& config, const FixedSequence& input,
                                    ArithMode mode = ArithMode::fast) {
  NonRecFilter f(config, mode);
  return f.process(input);
}

}  // namespace combdec
