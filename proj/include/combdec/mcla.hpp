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

// Gate-level model of the modified carry look-ahead adder: 4-bit look-ahead
// modules, each module's carry-out feeding the next module's carry-in.

#pragma once

#include <cstdint>
#include <string>

#include "combdec/fixed.hpp"

namespace combdec {

enum class AdderKind { mcla, ripple };

struct AddResult {
  std::uint64_t sum = 0;
  bool carry_out = false;

  friend bool operator==(const AddResult&, const AddResult&) = default;
};

/// One 4-bit look-ahead module. Carries are the flattened sum-of-products
/// form, so no carry depends on a lower carry inside the module.
inline AddResult lookahead4(unsigned a, unsigned b, bool cin) {
  bool g[4], p[4];
  for (int i = 0; i < 4; ++i) {
    const bool ai = (a >> i) & 1u, bi = (b >> i) & 1u;
    g[i] = ai && bi;
    p[i] = ai != bi;
  }
  const bool c0 = cin;
  const bool c1 = g[0] || (p[0] && c0);
  const bool c2 = g[1] || (p[1] && g[0]) || (p[1] && p[0] && c0);
  const bool c3 = g[2] || (p[2] && g[1]) || (p[2] && p[1] && g[0]) || (p[2] && p[1] && p[0] && c0);
  const bool c4 = g[3] || (p[3] && g[2]) || (p[3] && p[2] && g[1]) ||
                  (p[3] && p[2] && p[1] && g[0]) || (p[3] && p[2] && p[1] && p[0] && c0);
  const bool c[4] = {c0, c1, c2, c3};
  unsigned s = 0;
  for (int i = 0; i < 4; ++i) s |= static_cast<unsigned>(p[i] != c[i]) << i;
  return {s, c4};
}

class Mcla {
 public:
  explicit Mcla(int width) : width_(width) {
    if (width < 4 || width > kMaxWidth || width % 4 != 0)
      throw ConfigError("MCLA width must be a multiple of 4 in [4, 64], got " +
                        std::to_string(width));
  }

  int width() const { return width_; }
  int module_count() const { return width_ / 4; }

  /// a + b + cin modulo 2^width; operands are taken modulo 2^width.
  AddResult add(std::uint64_t a, std::uint64_t b, bool cin = false) const {
    std::uint64_t sum = 0;
    bool carry = cin;
    for (int m = 0; m < module_count(); ++m) {
      const int shift = 4 * m;
      const auto r = lookahead4(static_cast<unsigned>((a >> shift) & 0xFu),
                                static_cast<unsigned>((b >> shift) & 0xFu), carry);
      sum |= r.sum << shift;
      carry = r.carry_out;
    }
    return {sum, carry};
  }

 private:
  int width_;
};

inline AddResult mcla_add(int width, std::uint64_t a, std::uint64_t b, bool cin = false) {
  return Mcla(width).add(a, b, cin);
}

inline int mcla_width_for(int width) { return (width + 3) / 4 * 4; }

/// Unit-gate depth model. Ripple: one gate to form p/g plus two per carry
/// stage. MCLA: 4 for the first module's look-ahead, 2 per further module
/// carry hop, 3 for the final sum.
inline int critical_path_gates(int width, AdderKind kind) {
  if (kind == AdderKind::ripple) {
    if (width < 1) throw ConfigError("ripple adder width must be >= 1");
    return 2 * width + 1;
  }
  if (width < 4 || width % 4 != 0)
    throw ConfigError("MCLA width must be a positive multiple of 4, got " + std::to_string(width));
  return 4 + 2 * (width / 4 - 1) + 3;
}

/// Signed add/subtract at an arbitrary register width, routed through the MCLA
/// sized up to the next multiple of 4 and then reduced to `width`.
inline std::int64_t gate_add(std::int64_t a, std::int64_t b, int width) {
  const int w4 = mcla_width_for(width);
  const auto mask = width_mask(w4);
  const auto r = mcla_add(w4, static_cast<std::uint64_t>(a) & mask, static_cast<std::uint64_t>(b) & mask);
  return wrap_bits(r.sum, width);
}

inline std::int64_t gate_sub(std::int64_t a, std::int64_t b, int width) {
  const int w4 = mcla_width_for(width);
  const auto mask = width_mask(w4);
  const auto r = mcla_add(w4, static_cast<std::uint64_t>(a) & mask, ~static_cast<std::uint64_t>(b) & mask, true);
  return wrap_bits(r.sum, width);
}

/// Selects how filters perform their additions.
enum class ArithMode { fast, gate_model };

inline std::int64_t add_at(std::int64_t a, std::int64_t b, int width, ArithMode mode) {
  return mode == ArithMode::fast ? wrap_add(a, b, width) : gate_add(a, b, width);
}

inline std::int64_t sub_at(std::int64_t a, std::int64_t b, int width, ArithMode mode) {
  return mode == ArithMode::fast ? wrap_sub(a, b, width) : gate_sub(a, b, width);
}

}  // namespace combdec
