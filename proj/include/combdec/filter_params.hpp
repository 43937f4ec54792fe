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

// Design tuple, register growth and word-length planning for comb decimators.
//
// Width convention: a filter with N stages, differential delay M and
// decimation R grows the input by ceil(N * log2(R*M)) bits. Every planner
// computation runs on arbitrary-precision integers.

#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "combdec/fixed.hpp"
#include "combdec/poly.hpp"

namespace combdec {

enum class Architecture { cic, nonrec };

inline std::string_view to_string(Architecture a) {
  return a == Architecture::cic ? "cic" : "nonrec";
}

inline Architecture parse_architecture(std::string_view s) {
  if (s == "cic") return Architecture::cic;
  if (s == "nonrec") return Architecture::nonrec;
  throw ConfigError("unknown architecture '" + std::string(s) + "' (expected cic|nonrec)");
}

inline bool is_power_of_two(std::int64_t v) {
  return v > 0 && std::has_single_bit(static_cast<std::uint64_t>(v));
}

struct FilterConfig {
  int order_n = 1;       // cascaded stages
  int diff_delay_m = 1;  // comb differential delay
  int decim_r = 1;       // decimation factor
  int input_width = 1;   // bits of the two's-complement input
  Architecture arch = Architecture::cic;

  /// log2(decim_r) for the non-recursive form.
  int nonrec_stages() const { return std::countr_zero(static_cast<unsigned>(decim_r)); }

  void validate() const {
    if (order_n < 1) throw ConfigError("n must be >= 1");
    if (diff_delay_m < 1) throw ConfigError("m must be >= 1");
    if (decim_r < 1) throw ConfigError("r must be >= 1");
    if (input_width < 1) throw ConfigError("bin must be >= 1");
    if (arch == Architecture::nonrec) {
      if (decim_r < 2 || !is_power_of_two(decim_r))
        throw ConfigError("non-recursive architecture needs r = 2^s with s >= 1, got r=" +
                          std::to_string(decim_r));
      if (diff_delay_m != 1)
        throw ConfigError("non-recursive architecture needs m = 1, got m=" +
                          std::to_string(diff_delay_m));
    }
  }

  friend bool operator==(const FilterConfig&, const FilterConfig&) = default;
};

/// Flat `key=value` text: `n=5 m=1 r=16 bin=5 arch=cic`.
inline std::string to_kv(const FilterConfig& c) {
  std::ostringstream os;
  os << "n=" << c.order_n << " m=" << c.diff_delay_m << " r=" << c.decim_r
     << " bin=" << c.input_width << " arch=" << to_string(c.arch);
  return os.str();
}

/// Parses whitespace-separated `key=value` pairs into a map; `#` starts a comment.
inline std::map<std::string, std::string> parse_kv(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0)
        throw ConfigError("malformed key=value token '" + tok + "'");
      out[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
  }
  return out;
}

namespace detail {
inline int parse_positive(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  int x = 0;
  try {
    x = std::stoi(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw ConfigError("bad integer for '" + key + "': " + v);
  return x;
}
}  // namespace detail

/// Overlays parsed key/value pairs onto `base`. Unknown keys are rejected.
inline FilterConfig apply_kv(FilterConfig base, const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) {
    if (k == "n") base.order_n = detail::parse_positive(k, v);
    else if (k == "m") base.diff_delay_m = detail::parse_positive(k, v);
    else if (k == "r") base.decim_r = detail::parse_positive(k, v);
    else if (k == "bin") base.input_width = detail::parse_positive(k, v);
    else if (k == "arch") base.arch = parse_architecture(v);
    else throw ConfigError("unknown config key '" + k + "'");
  }
  return base;
}

inline FilterConfig config_from_kv(std::string_view text) {
  return apply_kv(FilterConfig{}, parse_kv(text));
}

/// (R*M)^N, exactly.
inline BigInt max_register_growth(const FilterConfig& c) {
  c.validate();
  BigInt g = 1;
  const BigInt base = BigInt{c.decim_r} * c.diff_delay_m;
  for (int i = 0; i < c.order_n; ++i) g *= base;
  return g;
}

/// ceil(log2(v)) for v >= 1.
inline int ceil_log2(const BigInt& v) {
  if (v <= 1) return 0;
  return static_cast<int>(boost::multiprecision::msb(BigInt{v - 1})) + 1;
}

/// Output width for lossless operation: B_in + ceil(N * log2(R*M)).
inline int total_width(const FilterConfig& c) {
  return c.input_width + ceil_log2(max_register_growth(c));
}

struct WordLengthPlan {
  std::vector<int> stage_widths;     // processing order
  std::vector<int> truncation_bits;  // LSBs dropped at each stage's output

  std::size_t size() const { return stage_widths.size(); }
  int output_width() const { return stage_widths.back(); }
  int total_truncation() const {
    int s = 0;
    for (int t : truncation_bits) s += t;
    return s;
  }

  friend bool operator==(const WordLengthPlan&, const WordLengthPlan&) = default;
};

/// Builds the integrator truncation plan for a CIC: stage i drops
/// widths[i] - widths[i+1] LSBs before feeding stage i+1.
inline WordLengthPlan cic_truncation_plan(const FilterConfig& c, const std::vector<int>& widths) {
  c.validate();
  if (static_cast<int>(widths.size()) != c.order_n)
    throw ConfigError("truncation plan needs " + std::to_string(c.order_n) + " widths, got " +
                      std::to_string(widths.size()));
  const int need = total_width(c);
  if (widths.front() < need)
    throw ConfigError("first integrator width " + std::to_string(widths.front()) +
                      " is below the lossless output width " + std::to_string(need));
  WordLengthPlan plan;
  plan.stage_widths = widths;
  plan.truncation_bits.assign(widths.size(), 0);
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (widths[i] < 1) throw ConfigError("stage widths must be positive");
    if (i + 1 < widths.size()) {
      if (widths[i + 1] > widths[i])
        throw ConfigError("stage widths must be non-increasing (stage " + std::to_string(i + 1) +
                          " grows from " + std::to_string(widths[i]) + " to " +
                          std::to_string(widths[i + 1]) + ")");
      plan.truncation_bits[i] = widths[i] - widths[i + 1];
    }
  }
  return plan;
}

inline WordLengthPlan full_precision_plan(const FilterConfig& c) {
  return cic_truncation_plan(c, std::vector<int>(static_cast<std::size_t>(c.order_n), total_width(c)));
}

/// Register widths of the non-recursive cascade: entry k is the input width of
/// stage k, the last entry is the output width. Each (1+z^-1)^N stage adds N bits.
inline std::vector<int> nonrec_width_schedule(const FilterConfig& c) {
  if (c.decim_r < 2 || !is_power_of_two(c.decim_r))
    throw ConfigError("r must be a power of 2 (>= 2), got " + std::to_string(c.decim_r));
  FilterConfig nc = c;
  nc.arch = Architecture::nonrec;
  nc.validate();
  std::vector<int> w;
  for (int k = 0; k <= nc.nonrec_stages(); ++k) w.push_back(c.input_width + k * c.order_n);
  return w;
}

/// Worst-case output-LSB gain seen by an error injected at the output of
/// integrator `stage`: L1 norm of (1+...+z^-(RM-1))^(N-1-stage) * (1-z^-RM)^(stage+1).
inline BigInt integrator_noise_gain(const FilterConfig& c, int stage) {
  const int rm = c.decim_r * c.diff_delay_m;
  return poly::abs_sum(poly::convolve(poly::power(poly::boxcar(rm), c.order_n - 1 - stage),
                                      poly::power(poly::differencer(rm), stage + 1)));
}

/// Bound on |truncated - full precision rescaled| in output LSBs:
/// sum over stages of (2^T_i - 1) * G_i.
inline BigInt truncation_error_bound(const FilterConfig& c, const WordLengthPlan& plan) {
  BigInt bound = 0;
  for (int i = 0; i < static_cast<int>(plan.truncation_bits.size()); ++i) {
    const int t = plan.truncation_bits[static_cast<std::size_t>(i)];
    if (t == 0) continue;
    bound += ((BigInt{1} << t) - 1) * integrator_noise_gain(c, i);
  }
  return bound;
}

}  // namespace combdec
