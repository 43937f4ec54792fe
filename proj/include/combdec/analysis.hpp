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

// Frequency response of the comb decimator, spectrum-based SNR measurement
// and a 1-bit sigma-delta test source.

#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "combdec/cic_filter.hpp"
#include "combdec/filter_params.hpp"
#include "combdec/fixed.hpp"

namespace combdec {

namespace detail {
// Guards sin(pi f) near its zero at f = 0.
inline constexpr double kSinGuard = 1e-12;
// Floor for dB conversion so exact zeros stay finite.
inline constexpr double kMinRatio = 1e-300;
}  // namespace detail

/// |H(e^{j 2 pi f})| = |sin(pi f R M) / sin(pi f)|^N, f as a fraction of the
/// input rate in [0, 0.5].
inline double magnitude_response(const FilterConfig& c, double f) {
  if (!(f >= 0.0 && f <= 0.5)) throw ConfigError("normalized frequency must lie in [0, 0.5]");
  FilterConfig cc = c;
  cc.arch = Architecture::cic;
  cc.validate();
  const int rm = cc.decim_r * cc.diff_delay_m;
  double ratio;
  if (is_power_of_two(rm)) {
    // sin(2^S x) / sin(x) = 2^S prod_{i<S} cos(2^i x); no singularity.
    ratio = rm;
    for (int k = 1; k < rm; k *= 2) ratio *= std::abs(std::cos(std::numbers::pi * f * k));
  } else {
    const double s = std::sin(std::numbers::pi * f);
    ratio = std::abs(s) < detail::kSinGuard ? rm : std::abs(std::sin(std::numbers::pi * f * rm) / s);
  }
  return std::pow(ratio, cc.order_n);
}

inline double dc_gain(const FilterConfig& c) { return magnitude_response(c, 0.0); }

struct ResponsePoint {
  double freq_hz = 0;
  double magnitude = 0;
  double magnitude_db = 0;
};

inline double to_db(double magnitude, double reference) {
  return 20.0 * std::log10(std::max(magnitude / reference, detail::kMinRatio));
}

/// n_points uniformly spaced over [0, fs/2]; dB relative to DC.
inline std::vector<ResponsePoint> response_sweep(const FilterConfig& c, double fs_hz, int n_points) {
  if (n_points < 2) throw ConfigError("response sweep needs at least 2 points");
  if (!(fs_hz > 0)) throw ConfigError("sampling rate must be positive");
  const double dc = dc_gain(c);
  std::vector<ResponsePoint> pts(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double f = 0.5 * i / (n_points - 1);
    const double m = magnitude_response(c, f);
    pts[static_cast<std::size_t>(i)] = {f * fs_hz, m, to_db(m, dc)};
  }
  return pts;
}

// ---------------------------------------------------------------------------
// FFT helpers (FFTW, real input)

namespace detail {
struct FftwPlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
}  // namespace detail

/// One-sided DFT of a real sequence zero-padded to `fft_size`; returns bins
/// 0 .. fft_size/2.
inline std::vector<std::complex<double>> real_dft(const std::vector<double>& x, std::size_t fft_size) {
  if (fft_size < x.size()) throw ConfigError("FFT size smaller than the sequence");
  const std::size_t bins = fft_size / 2 + 1;
  std::unique_ptr<double, detail::FftwFree> in(
      static_cast<double*>(fftw_malloc(sizeof(double) * fft_size)));
  std::unique_ptr<fftw_complex, detail::FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
  std::unique_ptr<fftw_plan_s, detail::FftwPlanDeleter> plan(
      fftw_plan_dft_r2c_1d(static_cast<int>(fft_size), in.get(), out.get(), FFTW_ESTIMATE));
  std::fill(in.get(), in.get() + fft_size, 0.0);
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute(plan.get());
  std::vector<std::complex<double>> X(bins);
  for (std::size_t k = 0; k < bins; ++k) X[k] = {out.get()[k][0], out.get()[k][1]};
  return X;
}

// ---------------------------------------------------------------------------
// SNR

struct SnrReport {
  double signal_power_db = 0;
  double noise_power_db = 0;
  double snr_db = 0;
  double band_hz = 0;
};

/// Bins on either side of the tone bin counted as signal (Hann main lobe).
inline constexpr int kToneHalfWidth = 2;
/// Bins 0 .. kDcBins-1 hold DC and its window leakage; they are not noise.
inline constexpr int kDcBins = 3;
inline constexpr std::size_t kMinSnrLength = 1024;

/// Hann-windowed spectrum SNR. Signal: tone bin +/- 2. Noise: every other bin
/// from just above DC up to band_hz.
inline SnrReport measure_snr(const std::vector<double>& x, double fs_hz, double tone_hz, double band_hz) {
  const std::size_t n = x.size();
  if (n < kMinSnrLength)
    throw ConfigError("SNR measurement needs at least " + std::to_string(kMinSnrLength) +
                      " samples, got " + std::to_string(n));
  if (!(fs_hz > 0) || !(tone_hz > 0) || !(tone_hz < band_hz) || !(band_hz <= fs_hz / 2))
    throw ConfigError("SNR measurement needs 0 < tone < band <= fs/2");
  const double bin_hz = fs_hz / static_cast<double>(n);
  const auto tone_bin = static_cast<long>(std::lround(tone_hz / bin_hz));
  const auto band_bin =
      std::min(static_cast<long>(std::floor(band_hz / bin_hz)), static_cast<long>(n / 2) - 1);
  if (tone_bin - kToneHalfWidth < kDcBins || tone_bin + kToneHalfWidth > band_bin)
    throw ConfigError("signal too short to resolve the tone inside the band (" +
                      std::to_string(n) + " samples, " + std::to_string(bin_hz) + " Hz bins)");

  std::vector<double> xw(n);
  double window_energy = 0, time_energy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    xw[i] = x[i] * w;
    window_energy += w * w;
    time_energy += xw[i] * xw[i];
  }
  const auto X = real_dft(xw, n);

  // Parseval on the windowed sequence: sum |X_k|^2 = n * sum xw^2.
  double spec_energy = 0;
  for (std::size_t k = 0; k < X.size(); ++k) {
    const bool self_conjugate = k == 0 || (n % 2 == 0 && k == n / 2);
    spec_energy += (self_conjugate ? 1.0 : 2.0) * std::norm(X[k]);
  }
  spec_energy /= static_cast<double>(n);
  if (std::abs(spec_energy - time_energy) > 1e-6 * std::max(time_energy, 1e-300))
    throw InvariantError("Parseval check failed in SNR measurement");

  // One-sided power, scaled so a sine of amplitude A reports A^2/2.
  const double scale = 2.0 / (static_cast<double>(n) * window_energy);
  double signal = 0, noise = 0;
  for (long k = kDcBins; k <= band_bin; ++k) {
    const double p = std::norm(X[static_cast<std::size_t>(k)]) * scale;
    if (std::abs(k - tone_bin) <= kToneHalfWidth) signal += p;
    else noise += p;
  }
  noise = std::max(noise, 1e-300);
  signal = std::max(signal, 1e-300);
  SnrReport r;
  r.signal_power_db = 10.0 * std::log10(signal);
  r.noise_power_db = 10.0 * std::log10(noise);
  r.snr_db = r.signal_power_db - r.noise_power_db;
  r.band_hz = band_hz;
  return r;
}

inline SnrReport measure_snr(const FixedSequence& s, double fs_hz, double tone_hz, double band_hz) {
  std::vector<double> x(s.samples.begin(), s.samples.end());
  return measure_snr(x, fs_hz, tone_hz, band_hz);
}

// ---------------------------------------------------------------------------
// Sigma-delta source

/// Width of the bitstream samples: +1 and -1 need two two's-complement bits.
inline constexpr int kBitstreamWidth = 2;

/// Second-order single-bit modulator (two cascaded accumulators, noise
/// transfer (1 - z^-1)^2) driven by amplitude * sin(2 pi tone n / fs).
/// Output samples are +1 / -1.
inline FixedSequence sigma_delta_source(double tone_hz, double amplitude, double fs_hz,
                                        std::size_t n_samples) {
  if (!(amplitude >= 0.0 && amplitude < 1.0))
    throw ConfigError("sigma-delta amplitude must lie in [0, 1)");
  if (!(fs_hz > 0) || !(tone_hz >= 0) || !(tone_hz < fs_hz / 2))
    throw ConfigError("sigma-delta tone must lie below fs/2");
  FixedSequence out;
  out.width = kBitstreamWidth;
  out.samples.reserve(n_samples);
  double acc1 = 0, acc2 = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double u =
        amplitude * std::sin(2.0 * std::numbers::pi * tone_hz * static_cast<double>(i) / fs_hz);
    const std::int64_t y = acc2 >= 0 ? 1 : -1;
    acc1 += u - static_cast<double>(y);
    acc2 += acc1 - static_cast<double>(y);
    out.samples.push_back(y);
  }
  return out;
}

struct DecimationSnr {
  SnrReport comb;   // CIC-filtered then decimated
  SnrReport naive;  // every R-th bitstream sample
  double improvement_db() const { return comb.snr_db - naive.snr_db; }
};

struct SigmaDeltaExperiment {
  double fs_hz = 6.144e6;
  int decim_r = 16;
  int order_n = 5;
  double amplitude = 0.5;
  double band_hz = 20e3;
  std::size_t output_samples = 8192;
  std::size_t warmup_outputs = 64;  // discarded filter start-up
  int tone_bin = 43;                // tone frequency in output-FFT bins

  double output_rate() const { return fs_hz / decim_r; }
  double tone_hz() const { return tone_bin * output_rate() / static_cast<double>(output_samples); }
};

/// Runs a sigma-delta bitstream through the comb decimator and through plain
/// sample dropping, and measures both at the output rate.
inline DecimationSnr sigma_delta_decimation_snr(const SigmaDeltaExperiment& e) {
  const auto r = static_cast<std::size_t>(e.decim_r);
  const std::size_t total_out = e.output_samples + e.warmup_outputs;
  const auto bits = sigma_delta_source(e.tone_hz(), e.amplitude, e.fs_hz, total_out * r);

  const FilterConfig c{e.order_n, 1, e.decim_r, kBitstreamWidth, Architecture::cic};
  const auto filtered = cic_process(c, bits);

  std::vector<double> comb, naive;
  for (std::size_t j = e.warmup_outputs; j < total_out; ++j) {
    comb.push_back(static_cast<double>(filtered.samples[j]));
    naive.push_back(static_cast<double>(bits.samples[j * r]));
  }
  return {measure_snr(comb, e.output_rate(), e.tone_hz(), e.band_hz),
          measure_snr(naive, e.output_rate(), e.tone_hz(), e.band_hz)};
}

}  // namespace combdec
