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

// combdec command-line front end. Kept in a header so tests can drive the
// commands in-process with captured streams.
//
// Exit codes: 0 success, 2 invalid configuration or arguments, 3 malformed
// input data, 4 internal invariant violation, 5 sample width mismatch.

#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "combdec/combdec.hpp"

namespace combdec::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidConfig = 2,
  kMalformedInput = 3,
  kInvariantViolation = 4,
  kWidthMismatch = 5,
};

#ifdef COMBDEC_VERSION
inline constexpr const char* kVersion = COMBDEC_VERSION;
#else
inline constexpr const char* kVersion = "dev";
#endif

/// Formats a double with 12 significant digits.
inline std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Ordered key=value record written next to every command's output.
class Manifest {
 public:
  explicit Manifest(std::string command) { set("command", std::move(command)); }

  void set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_)
      if (k == key) {
        v = value;
        return;
      }
    entries_.emplace_back(key, value);
  }

  void set_config(const FilterConfig& c) {
    set("n", std::to_string(c.order_n));
    set("m", std::to_string(c.diff_delay_m));
    set("r", std::to_string(c.decim_r));
    set("bin", std::to_string(c.input_width));
    set("arch", std::string(to_string(c.arch)));
  }

  std::string str() const {
    std::string s;
    for (const auto& [k, v] : entries_) s += k + "=" + v + "\n";
    s += "version=" + std::string(kVersion) + "\n";
    s += "timestamp=" + utc_timestamp() + "\n";
    return s;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct ConfigOptions {
  std::string config_path;
  std::optional<std::string> arch;
  std::optional<int> n, m, r, bin;

  void add_to(CLI::App* app) {
    app->add_option("--config", config_path, "flat key=value config file (n=5 m=1 r=16 bin=5 arch=cic)");
    app->add_option("--arch", arch, "cic | nonrec");
    app->add_option("--n", n, "number of stages N");
    app->add_option("--m", m, "differential delay M");
    app->add_option("--r", r, "decimation factor R");
    app->add_option("--bin", bin, "input width in bits");
  }

  /// Config file first, then flags on top.
  FilterConfig resolve(FilterConfig defaults = {5, 1, 16, 5, Architecture::cic}) const {
    FilterConfig c = defaults;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot open config file '" + config_path + "'");
      std::stringstream ss;
      ss << f.rdbuf();
      c = apply_kv(c, parse_kv(ss.str()));
    }
    if (arch) c.arch = parse_architecture(*arch);
    if (n) c.order_n = *n;
    if (m) c.diff_delay_m = *m;
    if (r) c.decim_r = *r;
    if (bin) c.input_width = *bin;
    c.validate();
    return c;
  }
};

/// Output sink: a file when a path is given, otherwise the command's stdout.
/// The manifest goes to `<path>.manifest`, or to the error stream as comments.
struct Sink {
  std::string path;
  std::string manifest_path;

  void emit(const std::string& payload, const Manifest& manifest, std::ostream& out,
            std::ostream& err, bool binary = false) const {
    if (path.empty() || path == "-") {
      out << payload;
      std::istringstream ms(manifest.str());
      for (std::string line; std::getline(ms, line);) err << "# " << line << '\n';
      return;
    }
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    if (!f) throw DataError("cannot write '" + path + "'");
    f << payload;
    std::ofstream mf(manifest_path.empty() ? path + ".manifest" : manifest_path);
    mf << manifest.str();
  }
};

inline FixedSequence load_samples(const std::string& path, int text_width, std::istream& in) {
  if (path == "-") return read_samples(in, text_width);
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open input '" + path + "'");
  return read_samples(f, text_width);
}

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) throw ConfigError("empty entry in list '" + s + "'");
    out.push_back(detail::parse_positive("list", tok));
  }
  return out;
}

// ---------------------------------------------------------------------------

inline int cmd_design(const ConfigOptions& opts, const std::string& truncate, std::ostream& out) {
  const FilterConfig c = opts.resolve();
  out << "arch=" << to_string(c.arch) << '\n';
  out << "config=" << to_kv(c) << '\n';
  out << "gmax=" << max_register_growth(c) << '\n';
  if (c.arch == Architecture::cic) {
    const auto plan = truncate.empty() ? full_precision_plan(c)
                                       : cic_truncation_plan(c, parse_int_list(truncate));
    out << "width=" << total_width(c) << '\n';
    out << "schedule=" << join(plan.stage_widths) << '\n';
    out << "truncation=" << join(plan.truncation_bits) << '\n';
    out << "output_width=" << plan.output_width() << '\n';
    out << "error_bound=" << truncation_error_bound(c, plan) << '\n';
  } else {
    if (!truncate.empty()) throw ConfigError("--truncate applies to the cic architecture only");
    const auto schedule = nonrec_width_schedule(c);
    out << "width=" << schedule.back() << '\n';
    out << "schedule=" << join(schedule) << '\n';
  }
  return kOk;
}

struct SimulateOptions {
  std::string input;
  Sink sink;
  std::string format = "text";
  bool pipelined = false;
  bool gate_model = false;
  std::string truncate;
};

inline int cmd_simulate(const ConfigOptions& opts, const SimulateOptions& so, std::istream& in,
                        std::ostream& out, std::ostream& err) {
  const FilterConfig c = opts.resolve();
  const auto fmt = parse_sample_format(so.format);
  const auto mode = so.gate_model ? ArithMode::gate_model : ArithMode::fast;
  if (!so.truncate.empty() && c.arch != Architecture::cic)
    throw ConfigError("--truncate applies to the cic architecture only");
  const auto plan = c.arch == Architecture::cic
                        ? (so.truncate.empty() ? full_precision_plan(c)
                                               : cic_truncation_plan(c, parse_int_list(so.truncate)))
                        : WordLengthPlan{};

  const FixedSequence input = load_samples(so.input, c.input_width, in);
  if (input.width != c.input_width)
    throw WidthMismatch("input declares width " + std::to_string(input.width) +
                        " but bin=" + std::to_string(c.input_width));

  FixedSequence output;
  int latency = 0;
  if (so.pipelined) {
    const auto pf = c.arch == Architecture::cic
                        ? PipelinedFilter::cic(c, plan, std::vector<bool>(static_cast<std::size_t>(c.order_n), true))
                        : PipelinedFilter::fully_pipelined(c);
    latency = pf.latency_cycles();
    output = pipelined_process(pf, input, mode);
  } else if (c.arch == Architecture::cic) {
    output = cic_process(c, plan, input, mode);
  } else {
    output = nonrec_process(c, input, mode);
  }

  Manifest man("simulate");
  man.set_config(c);
  man.set("input", so.input);
  man.set("output", so.sink.path.empty() ? "-" : so.sink.path);
  man.set("format", so.format);
  man.set("pipelined", so.pipelined ? "1" : "0");
  man.set("gate_model", so.gate_model ? "1" : "0");
  man.set("truncate", so.truncate.empty() ? "none" : so.truncate);
  man.set("input_samples", std::to_string(input.size()));
  man.set("output_samples", std::to_string(output.size()));
  man.set("output_width", std::to_string(output.width));
  man.set("latency_outputs", std::to_string(latency));
  so.sink.emit(samples_to_string(output, fmt), man, out, err, fmt == SampleFormat::binary);
  return kOk;
}

inline int cmd_response(const ConfigOptions& opts, double fs, int points, const Sink& sink,
                        std::ostream& out, std::ostream& err) {
  FilterConfig c = opts.resolve();
  std::string csv = "freq_hz,magnitude,magnitude_db\n";
  for (const auto& p : response_sweep(c, fs, points))
    csv += fmt12(p.freq_hz) + "," + fmt12(p.magnitude) + "," + fmt12(p.magnitude_db) + "\n";
  Manifest man("response");
  man.set_config(c);
  man.set("fs_hz", fmt12(fs));
  man.set("points", std::to_string(points));
  man.set("output", sink.path.empty() ? "-" : sink.path);
  sink.emit(csv, man, out, err);
  return kOk;
}

struct SnrOptions {
  std::string input;
  double fs = 6.144e6;
  double tone = 0;
  double band = 20e3;
  double amplitude = 0.5;
  int samples = 8192;
  int tone_bin = 43;
  Sink sink;
};

inline std::string metric(const std::string& k, double v) { return k + "," + fmt12(v) + "\n"; }

inline int cmd_snr(const ConfigOptions& opts, const SnrOptions& so, std::istream& in,
                   std::ostream& out, std::ostream& err) {
  Manifest man("snr");
  std::string csv = "metric,value\n";
  if (!so.input.empty()) {
    const auto s = load_samples(so.input, kMaxWidth, in);
    const auto rep = measure_snr(s, so.fs, so.tone, so.band);
    csv += metric("signal_power_db", rep.signal_power_db);
    csv += metric("noise_power_db", rep.noise_power_db);
    csv += metric("snr_db", rep.snr_db);
    csv += metric("band_hz", rep.band_hz);
    man.set("input", so.input);
  } else {
    const FilterConfig c = opts.resolve({5, 1, 16, kBitstreamWidth, Architecture::cic});
    SigmaDeltaExperiment e;
    e.fs_hz = so.fs;
    e.decim_r = c.decim_r;
    e.order_n = c.order_n;
    e.amplitude = so.amplitude;
    e.band_hz = so.band;
    e.output_samples = static_cast<std::size_t>(so.samples);
    e.tone_bin = so.tone_bin;
    const auto res = sigma_delta_decimation_snr(e);
    csv += metric("tone_hz", e.tone_hz());
    csv += metric("band_hz", e.band_hz);
    csv += metric("output_rate_hz", e.output_rate());
    csv += metric("comb_signal_power_db", res.comb.signal_power_db);
    csv += metric("comb_noise_power_db", res.comb.noise_power_db);
    csv += metric("comb_snr_db", res.comb.snr_db);
    csv += metric("naive_signal_power_db", res.naive.signal_power_db);
    csv += metric("naive_noise_power_db", res.naive.noise_power_db);
    csv += metric("naive_snr_db", res.naive.snr_db);
    csv += metric("improvement_db", res.improvement_db());
    man.set("n", std::to_string(c.order_n));
    man.set("r", std::to_string(c.decim_r));
    man.set("amplitude", fmt12(so.amplitude));
    man.set("samples", std::to_string(so.samples));
  }
  man.set("fs_hz", fmt12(so.fs));
  man.set("output", so.sink.path.empty() ? "-" : so.sink.path);
  so.sink.emit(csv, man, out, err);
  return kOk;
}

inline int cmd_clocks(const std::string& sweep, int n, int bin, bool pipelined, double peak_mhz,
                      const Sink& sink, std::ostream& out, std::ostream& err) {
  const auto rs = parse_int_list(sweep);
  std::string csv = "arch,R,N,width,depth,est_mhz\n";
  for (const auto& row : clock_sweep(rs, n, bin, pipelined, peak_mhz * 1e6))
    csv += std::string(to_string(row.arch)) + "," + std::to_string(row.decim_r) + "," +
           std::to_string(row.order_n) + "," + std::to_string(row.width) + "," +
           std::to_string(row.depth) + "," + fmt12(row.est_hz / 1e6) + "\n";
  Manifest man("clocks");
  man.set("sweep_r", sweep);
  man.set("n", std::to_string(n));
  man.set("bin", std::to_string(bin));
  man.set("pipelined", pipelined ? "1" : "0");
  man.set("peak_mhz", fmt12(peak_mhz));
  man.set("output", sink.path.empty() ? "-" : sink.path);
  sink.emit(csv, man, out, err);
  return kOk;
}

struct OracleOptions {
  bool taps = false;
  std::string input;
  std::string compare;
  Sink sink;
};

inline int cmd_oracle(const ConfigOptions& opts, const OracleOptions& oo, std::istream& in,
                      std::ostream& out, std::ostream& err) {
  const FilterConfig c = opts.resolve();
  const auto coeffs = oracle::fir_coefficients(c);
  Manifest man("oracle");
  man.set_config(c);
  if (!oo.compare.empty()) {
    if (oo.input.empty()) throw ConfigError("--compare needs --input");
    const auto input = load_samples(oo.input, c.input_width, in);
    if (input.width != c.input_width)
      throw WidthMismatch("input declares width " + std::to_string(input.width) +
                          " but bin=" + std::to_string(c.input_width));
    const int w = total_width(c);
    const auto expected = reduce_to_width(oracle::fir_decimate(coeffs, c.decim_r, input), w);
    const auto actual = load_samples(oo.compare, w, in);
    std::size_t mismatches = 0;
    const std::size_t common = std::min(expected.size(), actual.size());
    for (std::size_t i = 0; i < common; ++i)
      if (wrap(actual.samples[i], w) != expected.samples[i]) ++mismatches;
    mismatches += std::max(expected.size(), actual.size()) - common;
    out << "compared=" << std::max(expected.size(), actual.size()) << " mismatches=" << mismatches
        << '\n';
    return mismatches == 0 ? kOk : kInvariantViolation;
  }
  std::string payload;
  if (oo.taps || oo.input.empty()) {
    for (const auto& t : coeffs.taps) payload += t.str() + "\n";
  } else {
    const auto input = load_samples(oo.input, c.input_width, in);
    for (const auto& v : oracle::fir_decimate(coeffs, c.decim_r, input)) payload += v.str() + "\n";
    man.set("input", oo.input);
  }
  man.set("output", oo.sink.path.empty() ? "-" : oo.sink.path);
  oo.sink.emit(payload, man, out, err);
  return kOk;
}

inline int cmd_adder(bool verify, bool depth, int width, long long cases, unsigned long long seed,
                     std::ostream& out) {
  if (!verify && !depth) throw ConfigError("adder needs --verify and/or --depth");
  if (depth) {
    out << "width=" << width << " mcla_depth=" << critical_path_gates(width, AdderKind::mcla)
        << " ripple_depth=" << critical_path_gates(width, AdderKind::ripple) << '\n';
  }
  if (!verify) return kOk;
  const Mcla adder(width);
  const auto mask = width_mask(width);
  std::uint64_t checked = 0, failures = 0;
  auto check = [&](std::uint64_t a, std::uint64_t b, bool cin) {
    const auto r = adder.add(a, b, cin);
    const unsigned __int128 exact = static_cast<unsigned __int128>(a) + b + (cin ? 1 : 0);
    const bool cout = width == 64 ? (exact >> 64) != 0 : ((exact >> width) & 1) != 0;
    if (r.sum != (static_cast<std::uint64_t>(exact) & mask) || r.carry_out != cout) ++failures;
    ++checked;
  };
  if (width <= 8) {
    for (std::uint64_t a = 0; a <= mask; ++a)
      for (std::uint64_t b = 0; b <= mask; ++b)
        for (int cin = 0; cin < 2; ++cin) check(a, b, cin != 0);
  } else {
    std::mt19937_64 rng(seed);
    for (long long i = 0; i < cases; ++i) check(rng() & mask, rng() & mask, (rng() & 1u) != 0);
  }
  if (failures != 0) {
    out << "FAIL " << failures << " of " << checked << " cases\n";
    return kInvariantViolation;
  }
  out << "OK " << checked << " cases\n";
  return kOk;
}

// ---------------------------------------------------------------------------

/// Parses `args` (without the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Bit-exact comb decimation filters: design, simulation and analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  ConfigOptions design_cfg, sim_cfg, resp_cfg, snr_cfg, oracle_cfg;
  std::string design_trunc;
  SimulateOptions so;
  double resp_fs = 6.144e6;
  int resp_points = 4096;
  Sink resp_sink;
  SnrOptions snro;
  std::string clk_sweep = "8,16,32,64";
  int clk_n = 5, clk_bin = 5;
  bool clk_pipelined = true;
  double clk_peak = 90.0;
  Sink clk_sink;
  OracleOptions oo;
  bool add_verify = false, add_depth = false;
  int add_width = 8;
  long long add_cases = 1000000;
  unsigned long long add_seed = 1;

  auto* design = app.add_subcommand("design", "print register growth and the word-length plan");
  design_cfg.add_to(design);
  design->add_option("--truncate", design_trunc, "comma-separated integrator widths (cic)");

  auto* sim = app.add_subcommand("simulate", "run a sample file through a filter");
  sim_cfg.add_to(sim);
  sim->add_option("--input", so.input, "input sample file ('-' for stdin)")->required();
  sim->add_option("--output", so.sink.path, "output sample file (default stdout)");
  sim->add_option("--manifest", so.sink.manifest_path, "manifest path (default <output>.manifest)");
  sim->add_option("--format", so.format, "output format: text | binary");
  sim->add_flag("--pipelined", so.pipelined, "use the pipelined register model");
  sim->add_flag("--gate-model", so.gate_model, "perform every addition with the gate-level MCLA");
  sim->add_option("--truncate", so.truncate, "comma-separated integrator widths (cic)");

  auto* resp = app.add_subcommand("response", "closed-form magnitude response as CSV");
  resp_cfg.add_to(resp);
  resp->add_option("--fs", resp_fs, "input sampling rate in Hz");
  resp->add_option("--points", resp_points, "grid points over [0, fs/2]");
  resp->add_option("--output", resp_sink.path, "CSV path (default stdout)");

  auto* snr = app.add_subcommand("snr", "measure SNR of a file, or run the sigma-delta comparison");
  snr_cfg.add_to(snr);
  snr->add_option("--input", snro.input, "sample file to measure (omit for the sigma-delta demo)");
  snr->add_option("--fs", snro.fs, "sampling rate in Hz (of the file, or of the modulator)");
  snr->add_option("--tone", snro.tone, "tone frequency in Hz (file mode)");
  snr->add_option("--band", snro.band, "analysis band edge in Hz");
  snr->add_option("--amplitude", snro.amplitude, "modulator input amplitude in (0, 1)");
  snr->add_option("--samples", snro.samples, "output samples analysed (demo)");
  snr->add_option("--tone-bin", snro.tone_bin, "tone frequency in output FFT bins (demo)");
  snr->add_option("--output", snro.sink.path, "CSV path (default stdout)");

  auto* clocks = app.add_subcommand("clocks", "estimated maximum clock versus decimation factor");
  clocks->add_option("--sweep-r", clk_sweep, "comma-separated decimation factors (powers of 2)");
  clocks->add_option("--n", clk_n, "number of stages N");
  clocks->add_option("--bin", clk_bin, "input width in bits");
  clocks->add_flag("--pipelined,!--no-pipelined", clk_pipelined, "pipelined critical path (default)");
  clocks->add_option("--peak-mhz", clk_peak, "calibrated clock of the fastest row");
  clocks->add_option("--output", clk_sink.path, "CSV path (default stdout)");

  auto* orc = app.add_subcommand("oracle", "reference FIR: taps, decimation, or comparison");
  oracle_cfg.add_to(orc);
  orc->add_flag("--taps", oo.taps, "print the expanded FIR taps");
  orc->add_option("--input", oo.input, "input sample file to decimate");
  orc->add_option("--compare", oo.compare, "filter output file to check against the reference");
  orc->add_option("--output", oo.sink.path, "output path (default stdout)");

  auto* adder = app.add_subcommand("adder", "verify the gate-level MCLA or report its depth");
  adder->add_flag("--verify", add_verify, "check against integer addition");
  adder->add_flag("--depth", add_depth, "print unit-gate critical paths");
  adder->add_option("--width", add_width, "adder width (multiple of 4)");
  adder->add_option("--cases", add_cases, "random cases for widths above 8");
  adder->add_option("--seed", add_seed, "random seed");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  }

  try {
    if (*design) return cmd_design(design_cfg, design_trunc, out);
    if (*sim) return cmd_simulate(sim_cfg, so, in, out, err);
    if (*resp) return cmd_response(resp_cfg, resp_fs, resp_points, resp_sink, out, err);
    if (*snr) return cmd_snr(snr_cfg, snro, in, out, err);
    if (*clocks) return cmd_clocks(clk_sweep, clk_n, clk_bin, clk_pipelined, clk_peak, clk_sink, out, err);
    if (*orc) return cmd_oracle(oracle_cfg, oo, in, out, err);
    if (*adder) return cmd_adder(add_verify, add_depth, add_width, add_cases, add_seed, out);
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const WidthMismatch& e) {
    err << "width mismatch: " << e.what() << '\n';
    return kWidthMismatch;
  } catch (const DataError& e) {
    err << "malformed input: " << e.what() << '\n';
    return kMalformedInput;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << '\n';
    return kInvariantViolation;
  }
  return kInvalidConfig;
}

}  // namespace combdec::cli
