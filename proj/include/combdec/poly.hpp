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

#include <vector>

#include "combdec/fixed.hpp"

// Exact polynomials in z^-1, lowest power first.
namespace combdec::poly {

using Poly = std::vector<BigInt>;

inline Poly convolve(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, BigInt{0});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline Poly power(const Poly& p, int exponent) {
  Poly out{BigInt{1}};
  for (int i = 0; i < exponent; ++i) out = convolve(out, p);
  return out;
}

/// 1 + z^-1 + ... + z^-(len-1)
inline Poly boxcar(int len) { return Poly(static_cast<std::size_t>(len), BigInt{1}); }

/// 1 - z^-delay
inline Poly differencer(int delay) {
  Poly p(static_cast<std::size_t>(delay) + 1, BigInt{0});
  p.front() = 1;
  p.back() = -1;
  return p;
}

inline BigInt abs_sum(const Poly& p) {
  BigInt s = 0;
  for (const auto& c : p) s += abs(c);
  return s;
}

inline BigInt sum(const Poly& p) {
  BigInt s = 0;
  for (const auto& c : p) s += c;
  return s;
}

}  // namespace combdec::poly
