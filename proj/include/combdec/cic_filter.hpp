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

// Recursive comb (CIC) decimator: N integrators at the input rate, keep one
// sample in R, N combs with differential delay M at the output rate.
//
// All arithmetic is two's complement at the planned widths with wraparound.
// Truncation between integrators is an arithmetic right shift (floor).
// The decimator samples the integrator chain on input indices 0, R, 2R, ...

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "combdec/filter_params.hpp"
#include "combdec/fixed.hpp"
#include "combdec/mcla.hpp"

namespace combdec {

/// Fixed-length FIFO of past samples, zero-initialised.
class DelayLine {
 public:
  explicit DelayLine(int length = 1) : buf_(static_cast<std::size_t>(length), 0) {
    if (length < 1) throw ConfigError("delay line length must be >= 1");
  }

  std::size_t length() const { return buf_.size(); }
  std::int64_t oldest() const { return buf_[head_]; }

  void push(std::int64_t x) {
    buf_[head_] = x;
    head_ = (head_ + 1) % buf_.size();
  }

  void clear() {
    std::fill(buf_.begin(), buf_.end(), 0);
    head_ = 0;
  }

 private:
  std::vector<std::int64_t> buf_;
  std::size_t head_ = 0;
};

inline std::int64_t integrator_step(std::int64_t acc, std::int64_t x, int width,
                                    ArithMode mode = ArithMode::fast) {
  return add_at(acc, x, width, mode);
}

/// x - x[n-M], wrapped; pushes x.
inline std::int64_t comb_step(DelayLine& delay, std::int64_t x, int width,
                              ArithMode mode = ArithMode::fast) {
  const std::int64_t y = sub_at(x, delay.oldest(), width, mode);
  delay.push(x);
  return y;
}

struct CicState {
  std::vector<std::int64_t> integrator_accs;
  std::vector<DelayLine> comb_delays;
  int sample_phase = 0;
};

inline void check_input(const FilterConfig& c, const FixedSequence& input) {
  if (input.width != c.input_width)
    throw WidthMismatch("input width " + std::to_string(input.width) +
                        " does not match configured bin=" + std::to_string(c.input_width));
  input.validate();
}

class CicFilter {
 public:
  CicFilter(const FilterConfig& config, WordLengthPlan plan, ArithMode mode = ArithMode::fast)
      : config_(config), plan_(std::move(plan)), mode_(mode) {
    config_.arch = Architecture::cic;
    config_.validate();
    // Re-derive to reject plans that were not built for this config.
    if (cic_truncation_plan(config_, plan_.stage_widths) != plan_)
      throw ConfigError("word-length plan is inconsistent with its stage widths");
    for (int w : plan_.stage_widths) check_width(w);
    reset();
  }

  const FilterConfig& config() const { return config_; }
  const WordLengthPlan& plan() const { return plan_; }
  const CicState& state() const { return state_; }
  int output_width() const { return plan_.output_width(); }

  void reset() {
    state_.integrator_accs.assign(static_cast<std::size_t>(config_.order_n), 0);
    state_.comb_delays.assign(static_cast<std::size_t>(config_.order_n),
                              DelayLine(config_.diff_delay_m));
    state_.sample_phase = 0;
  }

  /// Clocks one input sample; returns an output on decimation phase 0.
  std::optional<std::int64_t> push(std::int64_t x) {
    const auto n = static_cast<std::size_t>(config_.order_n);
    std::int64_t v = x;
    for (std::size_t i = 0; i < n; ++i) {
      auto& acc = state_.integrator_accs[i];
      acc = integrator_step(acc, v, plan_.stage_widths[i], mode_);
      v = drop_lsbs(acc, plan_.truncation_bits[i]);
    }
    const bool emit = state_.sample_phase == 0;
    state_.sample_phase = (state_.sample_phase + 1) % config_.decim_r;
    if (!emit) return std::nullopt;
    return comb_chain(v);
  }

  FixedSequence process(const FixedSequence& input) {
    check_input(config_, input);
    FixedSequence out;
    out.width = output_width();
    out.samples.reserve(input.size() / static_cast<std::size_t>(config_.decim_r) + 1);
    for (auto x : input.samples)
      if (auto y = push(x)) out.samples.push_back(*y);
    return out;
  }

  /// Runs one decimated sample through the N combs.
  std::int64_t comb_chain(std::int64_t v) {
    const int w = output_width();
    for (auto& d : state_.comb_delays) v = comb_step(d, v, w, mode_);
    return v;
  }

 private:
  FilterConfig config_;
  WordLengthPlan plan_;
  ArithMode mode_;
  CicState state_;
};

/// Fresh-state CIC decimation of a whole sequence.
inline FixedSequence cic_process(const FilterConfig& config, const WordLengthPlan& plan,
                                 const FixedSequence& input, ArithMode mode = ArithMode::fast) {
  CicFilter f(config, plan, mode);
  return f.process(input);
}

inline FixedSequence cic_process(const FilterConfig& config, const FixedSequence& input,
                                 ArithMode mode = ArithMode::fast) {
  return cic_process(config, full_precision_plan(config), input, mode);
}

}  // namespace combdec
