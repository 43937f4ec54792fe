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

// Reference comb decimator: the expanded FIR, convolved directly in
// arbitrary precision. Deliberately naive; every streaming filter is
// checked against it.

#pragma once

#include <vector>

#include "combdec/analysis.hpp"
#include "combdec/filter_params.hpp"
#include "combdec/fixed.hpp"
#include "combdec/poly.hpp"

namespace combdec::oracle {

struct FirCoefficients {
  std::vector<BigInt> taps;

  std::size_t size() const { return taps.size(); }
  BigInt tap_sum() const { return poly::sum(taps); }
};

/// [1 x (R*M)] convolved with itself N times.
inline FirCoefficients fir_coefficients(const FilterConfig& c) {
  FilterConfig cc = c;
  cc.arch = Architecture::cic;  // coefficient set is architecture independent
  cc.validate();
  return {poly::power(poly::boxcar(c.decim_r * c.diff_delay_m), c.order_n)};
}

/// out[j] = sum_k taps[k] * in[j*R - k], zero history, one output per R
/// inputs (indices 0, R, 2R, ... < len).
inline ExactSequence fir_decimate(const FirCoefficients& coeffs, int decim_r,
                                  const FixedSequence& input) {
  if (decim_r < 1) throw ConfigError("decimation factor must be >= 1");
  const auto r = static_cast<std::size_t>(decim_r);
  ExactSequence out;
  out.reserve((input.size() + r - 1) / r);
  for (std::size_t n = 0; n < input.size(); n += r) {
    BigInt acc = 0;
    for (std::size_t k = 0; k < coeffs.taps.size() && k <= n; ++k)
      acc += coeffs.taps[k] * input.samples[n - k];
    out.push_back(std::move(acc));
  }
  return out;
}

/// The reference output reduced modulo 2^width, for comparison with a
/// fixed-width filter.
inline FixedSequence fir_decimate_wrapped(const FilterConfig& c, const FixedSequence& input,
                                          int width) {
  return reduce_to_width(fir_decimate(fir_coefficients(c), c.decim_r, input), width);
}

/// |DFT| of the taps on the grid f_i = i / (2 (n_points - 1)), i < n_points,
/// i.e. the same frequencies response_sweep() evaluates.
inline std::vector<double> tap_spectrum(const FirCoefficients& coeffs, int n_points) {
  if (n_points < 2) throw ConfigError("tap spectrum needs at least 2 points");
  const auto fft_size = 2 * static_cast<std::size_t>(n_points - 1);
  std::vector<double> taps;
  taps.reserve(coeffs.size());
  for (const auto& t : coeffs.taps) taps.push_back(t.convert_to<double>());
  // Fold taps longer than the transform; aliasing in time is exact for the DFT.
  std::vector<double> folded(std::min(fft_size, taps.size()), 0.0);
  for (std::size_t k = 0; k < taps.size(); ++k) folded[k % fft_size] += taps[k];
  const auto X = real_dft(folded, fft_size);
  std::vector<double> mag(static_cast<std::size_t>(n_points));
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(X[i]);
  return mag;
}

}  // namespace combdec::oracle
