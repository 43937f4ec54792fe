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

#include "combdec/filter_params.hpp"

#include <gtest/gtest.h>

#include "combdec/oracle.hpp"
#include "test_support.hpp"

namespace combdec {
namespace {

FilterConfig cfg(int n, int m, int r, int bin, Architecture a = Architecture::cic) {
  return {n, m, r, bin, a};
}

TEST(MaxRegisterGrowth, Examples) {
  EXPECT_EQ(max_register_growth(cfg(5, 1, 16, 5)), 1048576);
  EXPECT_EQ(max_register_growth(cfg(3, 1, 1, 5)), 1);
  EXPECT_EQ(max_register_growth(cfg(2, 2, 8, 5)), 256);
}

TEST(MaxRegisterGrowth, DoesNotOverflowForHugeDesigns) {
  // 1024^40 = 2^400
  EXPECT_EQ(max_register_growth(cfg(40, 4, 256, 8)), BigInt{1} << 400);
  EXPECT_EQ(total_width(cfg(40, 4, 256, 8)), 408);
}

TEST(MaxRegisterGrowth, EqualsOracleTapSum) {
  for (int rm = 1; rm <= 32; ++rm)
    for (int n = 1; n <= 5; ++n) {
      const auto c = cfg(n, 1, rm, 4);
      const auto taps = oracle::fir_coefficients(c);
      BigInt abs_sum = 0;
      for (const auto& t : taps.taps) abs_sum += abs(t);
      EXPECT_EQ(max_register_growth(c), abs_sum) << to_kv(c);
    }
}

TEST(TotalWidth, Examples) {
  EXPECT_EQ(total_width(cfg(5, 1, 16, 5)), 25);
  EXPECT_EQ(total_width(cfg(5, 1, 8, 5)), 20);
  EXPECT_EQ(total_width(cfg(4, 1, 1, 7)), 7);
  EXPECT_EQ(total_width(cfg(2, 1, 3, 4)), 8);  // growth 9 needs 4 extra bits
}

// Brute force: the narrowest W that holds the steady-state response to both
// full-scale constants, computed from the reference decimator.
int brute_force_width(const FilterConfig& c) {
  const auto coeffs = oracle::fir_coefficients(c);
  const std::size_t len = coeffs.size() + static_cast<std::size_t>(c.decim_r);
  BigInt lo = 0, hi = 0;
  for (auto v : {min_value(c.input_width), max_value(c.input_width)}) {
    for (const auto& y : oracle::fir_decimate(coeffs, c.decim_r, testing::constant_input(v, c.input_width, len))) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  }
  for (int w = 1;; ++w)
    if (lo >= -(BigInt{1} << (w - 1)) && hi < (BigInt{1} << (w - 1))) return w;
}

TEST(TotalWidth, IsSmallestLosslessWidth) {
  for (int r = 1; r <= 9; ++r)
    for (int m = 1; m <= 2; ++m)
      for (int n = 1; n <= 4; ++n)
        for (int bin : {1, 3, 4}) {
          const auto c = cfg(n, m, r, bin);
          EXPECT_EQ(total_width(c), brute_force_width(c)) << to_kv(c);
        }
}

TEST(CicTruncationPlan, ReferenceWidthList) {
  const auto plan = cic_truncation_plan(cfg(5, 1, 16, 5), {25, 22, 20, 18, 16});
  EXPECT_EQ(plan.truncation_bits, (std::vector<int>{3, 2, 2, 2, 0}));
  EXPECT_EQ(plan.output_width(), 16);
  EXPECT_EQ(plan.total_truncation(), 9);
}

TEST(CicTruncationPlan, FullPrecision) {
  const auto plan = cic_truncation_plan(cfg(2, 1, 4, 4), {8, 8});
  EXPECT_EQ(plan.truncation_bits, (std::vector<int>{0, 0}));
  for (const auto& c : testing::recursive_sweep()) {
    const auto p = full_precision_plan(c);
    EXPECT_EQ(p.total_truncation(), 0);
    for (int w : p.stage_widths) EXPECT_GE(w, total_width(c));
  }
}

TEST(CicTruncationPlan, Rejections) {
  const auto c = cfg(5, 1, 16, 5);
  EXPECT_THROW(cic_truncation_plan(c, {25, 22, 23, 18, 16}), ConfigError);  // increases
  EXPECT_THROW(cic_truncation_plan(c, {24, 22, 20, 18, 16}), ConfigError);  // below 25
  EXPECT_THROW(cic_truncation_plan(c, {25, 22, 20, 18}), ConfigError);      // wrong count
  EXPECT_THROW(cic_truncation_plan(c, {25, 22, 20, 18, 0}), ConfigError);
}

TEST(CicTruncationPlan, DifferencesReconstructWidths) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const auto c = cfg(1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 2),
                       1 + static_cast<int>(rng() % 16), 1 + static_cast<int>(rng() % 8));
    std::vector<int> widths{total_width(c) + static_cast<int>(rng() % 3)};
    while (static_cast<int>(widths.size()) < c.order_n)
      widths.push_back(std::max(1, widths.back() - static_cast<int>(rng() % 4)));
    const auto plan = cic_truncation_plan(c, widths);
    std::vector<int> rebuilt{widths.front()};
    for (std::size_t i = 0; i + 1 < widths.size(); ++i)
      rebuilt.push_back(rebuilt.back() - plan.truncation_bits[i]);
    EXPECT_EQ(rebuilt, widths);
    EXPECT_EQ(plan.truncation_bits.back(), 0);
    EXPECT_EQ(plan.stage_widths.size(), plan.truncation_bits.size());
  }
}

TEST(NonrecWidthSchedule, Examples) {
  EXPECT_EQ(nonrec_width_schedule(cfg(5, 1, 8, 5, Architecture::nonrec)),
            (std::vector<int>{5, 10, 15, 20}));
  EXPECT_EQ(nonrec_width_schedule(cfg(1, 1, 2, 1, Architecture::nonrec)), (std::vector<int>{1, 2}));
  EXPECT_EQ(nonrec_width_schedule(cfg(3, 1, 4, 8, Architecture::nonrec)), (std::vector<int>{8, 11, 14}));
}

TEST(NonrecWidthSchedule, MatchesBruteForceStageWidths) {
  // Stage k of the cascade is the comb filter with R = 2^k.
  for (int n = 1; n <= 4; ++n)
    for (int bin : {2, 5, 8}) {
      const auto schedule = nonrec_width_schedule(cfg(n, 1, 16, bin, Architecture::nonrec));
      for (int k = 1; k <= 4; ++k)
        EXPECT_EQ(schedule[static_cast<std::size_t>(k)], brute_force_width(cfg(n, 1, 1 << k, bin)));
    }
}

TEST(NonrecWidthSchedule, RejectsNonPowerOfTwo) {
  EXPECT_THROW(nonrec_width_schedule(cfg(5, 1, 12, 5)), ConfigError);
  EXPECT_THROW(nonrec_width_schedule(cfg(5, 1, 1, 5)), ConfigError);
  EXPECT_THROW(cfg(5, 2, 8, 5, Architecture::nonrec).validate(), ConfigError);
}

TEST(FilterConfig, Validation) {
  EXPECT_THROW(cfg(0, 1, 16, 5).validate(), ConfigError);
  EXPECT_THROW(cfg(5, 0, 16, 5).validate(), ConfigError);
  EXPECT_THROW(cfg(5, 1, 0, 5).validate(), ConfigError);
  EXPECT_THROW(cfg(5, 1, 16, 0).validate(), ConfigError);
  EXPECT_NO_THROW(cfg(5, 3, 12, 5).validate());
}

TEST(FilterConfig, KeyValueRoundTrip) {
  const auto c = cfg(5, 1, 16, 5, Architecture::nonrec);
  EXPECT_EQ(to_kv(c), "n=5 m=1 r=16 bin=5 arch=nonrec");
  EXPECT_EQ(config_from_kv(to_kv(c)), c);
  EXPECT_EQ(config_from_kv("n=3\n# comment\nr=4 bin=2  arch=cic\n"), cfg(3, 1, 4, 2));
  EXPECT_THROW(config_from_kv("n=3 q=1"), ConfigError);
  EXPECT_THROW(config_from_kv("n=x"), ConfigError);
  EXPECT_THROW(config_from_kv("arch=fir"), ConfigError);
  EXPECT_THROW(config_from_kv("n"), ConfigError);
}

TEST(TruncationErrorBound, NoiseGainsMatchOracleComposition) {
  // Gain after integrator i: remaining integrators and all combs, rebuilt from
  // the reference taps of an (N-1-i)-stage filter times the comb numerators.
  const auto c = cfg(5, 1, 16, 5);
  for (int i = 0; i < c.order_n; ++i) {
    poly::Poly rest{BigInt{1}};
    if (c.order_n - 1 - i > 0) rest = oracle::fir_coefficients(cfg(c.order_n - 1 - i, 1, 16, 5)).taps;
    for (int k = 0; k <= i; ++k) {
      poly::Poly comb(17, BigInt{0});
      comb[0] = 1;
      comb[16] = -1;
      rest = poly::convolve(rest, comb);
    }
    EXPECT_EQ(integrator_noise_gain(c, i), poly::abs_sum(rest)) << "stage " << i;
  }
  EXPECT_EQ(truncation_error_bound(c, full_precision_plan(c)), 0);
}

}  // namespace
}  // namespace combdec
