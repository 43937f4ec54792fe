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

// Register-level model of the pipelined comb decimators and a unit-gate
// clock estimator.
//
// CIC: a pipelined boundary after integrator i means the next consumer reads
// integrator i's accumulator register (last cycle's value) instead of the
// adder output. The carry path is cut without adding storage; the chain
// output is delayed by one input-rate cycle per registered boundary. The comb
// section is never pipelined.
//
// Non-recursive: a register after a two-tap section's adder delays that
// section's output by one cycle at the stage's own rate.
//
// Every 2:1 or R:1 decimator strobe is re-phased by the delay accumulated in
// its clock domain; whole output periods of delay surface as leading zero
// outputs. The observable contract: the pipelined output equals the base
// output shifted by latency_cycles() output samples.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "combdec/cic_filter.hpp"
#include "combdec/filter_params.hpp"
#include "combdec/fixed.hpp"
#include "combdec/mcla.hpp"
#include "combdec/nonrec_filter.hpp"

namespace combdec {

/// Output latency of the unpipelined architectures relative to the reference
/// decimator. Both sample the full-rate response on indices 0, R, 2R, ...
inline constexpr int base_latency(Architecture) { return 0; }

class PipelinedFilter {
 public:
  /// CIC with one flag per integrator output (N flags).
  static PipelinedFilter cic(const FilterConfig& config, WordLengthPlan plan,
                             std::vector<bool> integrator_registers) {
    FilterConfig c = config;
    c.arch = Architecture::cic;
    c.validate();
    if (static_cast<int>(integrator_registers.size()) != c.order_n)
      throw ConfigError("CIC register map needs one flag per integrator");
    PipelinedFilter pf;
    pf.config_ = c;
    pf.plan_ = std::move(plan);
    pf.integrator_registers_ = std::move(integrator_registers);
    CicFilter probe(pf.config_, pf.plan_);  // validates the plan
    return pf;
  }

  /// Non-recursive with one flag per two-tap section of every stage (S x N).
  static PipelinedFilter nonrec(const FilterConfig& config,
                                std::vector<std::vector<bool>> section_registers) {
    FilterConfig c = config;
    c.arch = Architecture::nonrec;
    c.validate();
    if (static_cast<int>(section_registers.size()) != c.nonrec_stages())
      throw ConfigError("non-recursive register map needs one row per stage");
    for (const auto& row : section_registers)
      if (static_cast<int>(row.size()) != c.order_n)
        throw ConfigError("non-recursive register map needs one flag per two-tap section");
    PipelinedFilter pf;
    pf.config_ = c;
    pf.section_registers_ = std::move(section_registers);
    return pf;
  }

  /// Every boundary the architecture allows carries a register.
  static PipelinedFilter fully_pipelined(const FilterConfig& config) {
    if (config.arch == Architecture::cic)
      return cic(config, full_precision_plan(config),
                 std::vector<bool>(static_cast<std::size_t>(config.order_n), true));
    return nonrec(config, std::vector<std::vector<bool>>(
                              static_cast<std::size_t>(config.nonrec_stages()),
                              std::vector<bool>(static_cast<std::size_t>(config.order_n), true)));
  }

  Architecture arch() const { return config_.arch; }
  const FilterConfig& config() const { return config_; }
  const WordLengthPlan& plan() const { return plan_; }
  const std::vector<bool>& integrator_registers() const { return integrator_registers_; }
  const std::vector<std::vector<bool>>& section_registers() const { return section_registers_; }

  /// Pipeline registers the comb section carries; always zero, the combs run R times slower.
  int comb_registers() const { return 0; }

  /// Pipeline registers on the input-to-output path, each in its own clock domain.
  int pipeline_depth() const {
    int d = static_cast<int>(std::count(integrator_registers_.begin(), integrator_registers_.end(), true));
    for (const auto& row : section_registers_)
      d += static_cast<int>(std::count(row.begin(), row.end(), true));
    return d;
  }

  /// Delay, in output samples, of the pipelined output relative to the base filter.
  int latency_cycles() const { return timing().latency; }

  /// Storage elements in words: accumulators, comb delays, two-tap delays and
  /// any pipeline registers that are not reused accumulators.
  int storage_registers() const {
    if (config_.arch == Architecture::cic)
      return config_.order_n + config_.order_n * config_.diff_delay_m + comb_registers();
    return config_.nonrec_stages() * config_.order_n + pipeline_depth();
  }

  struct Timing {
    std::vector<int> strobe_phase;  // per decimator, in its input domain
    int latency = 0;                // output samples
  };

  Timing timing() const {
    Timing t;
    if (config_.arch == Architecture::cic) {
      const int d = pipeline_depth();
      t.strobe_phase.push_back(d % config_.decim_r);
      t.latency = d / config_.decim_r;
      return t;
    }
    int carry = 0;
    for (const auto& row : section_registers_) {
      const int total = carry + static_cast<int>(std::count(row.begin(), row.end(), true));
      t.strobe_phase.push_back(total % 2);
      carry = total / 2;
    }
    t.latency = carry;
    return t;
  }

 private:
  PipelinedFilter() = default;

  FilterConfig config_;
  WordLengthPlan plan_;
  std::vector<bool> integrator_registers_;
  std::vector<std::vector<bool>> section_registers_;
};

inline PipelinedFilter without_registers(const PipelinedFilter& pf) {
  if (pf.arch() == Architecture::cic)
    return PipelinedFilter::cic(pf.config(), pf.plan(),
                                std::vector<bool>(pf.integrator_registers().size(), false));
  auto rows = pf.section_registers();
  for (auto& row : rows) std::fill(row.begin(), row.end(), false);
  return PipelinedFilter::nonrec(pf.config(), rows);
}

namespace detail {

inline FixedSequence run_pipelined_cic(const PipelinedFilter& pf, const std::vector<std::int64_t>& x,
                                       std::size_t wanted, ArithMode mode) {
  const auto& c = pf.config();
  const auto& plan = pf.plan();
  const auto& regs = pf.integrator_registers();
  const auto n = static_cast<std::size_t>(c.order_n);
  const int phase = pf.timing().strobe_phase.front();

  std::vector<std::int64_t> acc(n, 0), prev(n, 0);
  std::vector<DelayLine> combs(n, DelayLine(c.diff_delay_m));
  const int w_out = plan.output_width();

  FixedSequence out;
  out.width = w_out;
  for (std::size_t t = 0; t < x.size() && out.size() < wanted; ++t) {
    prev = acc;
    std::int64_t v = x[t];
    for (std::size_t i = 0; i < n; ++i) {
      acc[i] = integrator_step(acc[i], v, plan.stage_widths[i], mode);
      v = drop_lsbs(regs[i] ? prev[i] : acc[i], plan.truncation_bits[i]);
    }
    const auto ti = static_cast<std::int64_t>(t);
    if (ti >= phase && (ti - phase) % c.decim_r == 0) {
      for (auto& d : combs) v = comb_step(d, v, w_out, mode);
      out.samples.push_back(v);
    }
  }
  return out;
}

inline FixedSequence run_pipelined_nonrec(const PipelinedFilter& pf, std::vector<std::int64_t> x,
                                          std::size_t wanted, ArithMode mode) {
  const auto& c = pf.config();
  const auto schedule = nonrec_width_schedule(c);
  const auto timing = pf.timing();
  for (std::size_t k = 0; k < pf.section_registers().size(); ++k) {
    const auto& row = pf.section_registers()[k];
    const int in_w = schedule[k];
    std::vector<std::int64_t> delay(row.size(), 0), pipe(row.size(), 0);
    std::vector<std::int64_t> y;
    y.reserve(x.size() / 2 + 1);
    for (std::size_t t = 0; t < x.size(); ++t) {
      std::int64_t v = x[t];
      for (std::size_t s = 0; s < row.size(); ++s) {
        const int w = in_w + static_cast<int>(s) + 1;
        const std::int64_t sum = twotap_step(delay[s], v, w, mode);
        if (row[s]) {
          v = pipe[s];
          pipe[s] = sum;
        } else {
          v = sum;
        }
      }
      if (t >= static_cast<std::size_t>(timing.strobe_phase[k]) &&
          (t - static_cast<std::size_t>(timing.strobe_phase[k])) % 2 == 0)
        y.push_back(v);
    }
    x = std::move(y);
  }
  if (x.size() > wanted) x.resize(wanted);
  return {std::move(x), schedule.back()};
}

}  // namespace detail

/// Cycle-accurate run of the pipelined filter. The input is followed by enough
/// zero cycles to flush the pipeline, and the result has the same length as the
/// base filter's output: latency_cycles() leading zeros, then the base output.
inline FixedSequence pipelined_process(const PipelinedFilter& pf, const FixedSequence& input,
                                       ArithMode mode = ArithMode::fast) {
  check_input(pf.config(), input);
  const auto r = static_cast<std::size_t>(pf.config().decim_r);
  const std::size_t wanted = (input.size() + r - 1) / r;
  std::vector<std::int64_t> x = input.samples;
  const auto flush = static_cast<std::size_t>(pf.pipeline_depth()) * r + 2 * r;
  x.resize(x.size() + flush, 0);
  FixedSequence out = pf.arch() == Architecture::cic
                          ? detail::run_pipelined_cic(pf, x, wanted, mode)
                          : detail::run_pipelined_nonrec(pf, std::move(x), wanted, mode);
  if (out.size() != wanted)
    throw InvariantError("pipeline flush produced " + std::to_string(out.size()) +
                         " outputs, expected " + std::to_string(wanted));
  return out;
}

/// Unpipelined output of the filter underlying `pf`.
inline FixedSequence base_process(const PipelinedFilter& pf, const FixedSequence& input,
                                  ArithMode mode = ArithMode::fast) {
  if (pf.arch() == Architecture::cic) return cic_process(pf.config(), pf.plan(), input, mode);
  return nonrec_process(pf.config(), input, mode);
}

// ---------------------------------------------------------------------------
// Clock estimation

struct TimingModel {
  double gate_delay = 100e-12;  // seconds per unit gate
  double calibration = 1.0;

  void validate() const {
    if (!(gate_delay > 0)) throw ConfigError("gate delay must be positive");
    if (!(calibration > 0)) throw ConfigError("calibration must be positive");
  }
};

/// Widest register clocked at the input rate.
inline int input_rate_width(const FilterConfig& c, Architecture arch) {
  return arch == Architecture::cic ? total_width(c) : c.input_width + c.order_n;
}

/// Critical path in unit gates. Pipelined: one MCLA at the widest input-rate
/// register. Unpipelined: the adders clocked at the input rate are chained
/// combinationally, so their depths add.
inline int critical_path_depth(const FilterConfig& c, Architecture arch, bool pipelined) {
  FilterConfig cc = c;
  cc.arch = arch;
  cc.validate();
  if (pipelined)
    return critical_path_gates(mcla_width_for(input_rate_width(cc, arch)), AdderKind::mcla);
  int depth = 0;
  for (int s = 0; s < cc.order_n; ++s) {
    const int w = arch == Architecture::cic ? total_width(cc) : cc.input_width + s + 1;
    depth += critical_path_gates(mcla_width_for(w), AdderKind::mcla);
  }
  return depth;
}

inline double estimate_max_clock(const FilterConfig& c, Architecture arch, bool pipelined,
                                 const TimingModel& tm) {
  tm.validate();
  return tm.calibration / (tm.gate_delay * critical_path_depth(c, arch, pipelined));
}

/// Returns `tm` with its calibration set so the shallowest depth in `depths`
/// runs at exactly `peak_hz`.
inline TimingModel calibrate(TimingModel tm, const std::vector<int>& depths, double peak_hz) {
  if (depths.empty()) throw ConfigError("cannot calibrate on an empty sweep");
  tm.validate();
  const int shallowest = *std::min_element(depths.begin(), depths.end());
  tm.calibration = peak_hz * (tm.gate_delay * shallowest);
  return tm;
}

struct ClockRow {
  Architecture arch;
  int decim_r;
  int order_n;
  int width;
  int depth;
  double est_hz;
};

/// Clock estimates for both architectures over an R sweep, calibrated so the
/// fastest row equals `peak_hz`.
inline std::vector<ClockRow> clock_sweep(const std::vector<int>& rs, int order_n, int input_width,
                                         bool pipelined, double peak_hz = 90e6,
                                         TimingModel tm = {}) {
  std::vector<ClockRow> rows;
  for (auto arch : {Architecture::cic, Architecture::nonrec}) {
    for (int r : rs) {
      FilterConfig c{order_n, 1, r, input_width, arch};
      rows.push_back({arch, r, order_n, input_rate_width(c, arch),
                      critical_path_depth(c, arch, pipelined), 0.0});
    }
  }
  std::vector<int> depths;
  for (const auto& row : rows) depths.push_back(row.depth);
  tm = calibrate(tm, depths, peak_hz);
  for (auto& row : rows) {
    FilterConfig c{order_n, 1, row.decim_r, input_width, row.arch};
    row.est_hz = estimate_max_clock(c, row.arch, pipelined, tm);
  }
  return rows;
}

}  // namespace combdec
