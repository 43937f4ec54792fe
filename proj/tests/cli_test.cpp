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

#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"

namespace combdec::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = run(args, in, out, err);
  return {code, out.str(), err.str()};
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("combdec_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static void write(const std::string& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }
  static std::string read(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST(CliDesign, RecursiveDefaults) {
  const auto r = invoke({"design", "--arch", "cic", "--r", "16", "--m", "1", "--n", "5", "--bin", "5"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("gmax=1048576\n"), std::string::npos);
  EXPECT_NE(r.out.find("width=25\n"), std::string::npos);
}

TEST(CliDesign, NonRecursive) {
  const auto r = invoke({"design", "--arch", "nonrec", "--r", "8", "--n", "5", "--bin", "5"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("width=20\n"), std::string::npos);
  EXPECT_NE(r.out.find("schedule=5,10,15,20\n"), std::string::npos);
  EXPECT_EQ(invoke({"design", "--arch", "nonrec", "--r", "12"}).code, kInvalidConfig);
}

TEST(CliDesign, TruncationPlan) {
  const auto r = invoke({"design", "--truncate", "25,22,20,18,16"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("truncation=3,2,2,2,0\n"), std::string::npos);
  EXPECT_NE(r.out.find("output_width=16\n"), std::string::npos);
  EXPECT_EQ(invoke({"design", "--truncate", "24,22,20,18,16"}).code, kInvalidConfig);
  EXPECT_EQ(invoke({"design", "--truncate", "25,26,20,18,16"}).code, kInvalidConfig);
}

TEST(CliArgs, UnknownOptionsAndValues) {
  EXPECT_EQ(invoke({}).code, kInvalidConfig);
  EXPECT_EQ(invoke({"design", "--bogus"}).code, kInvalidConfig);
  EXPECT_EQ(invoke({"design", "--n", "0"}).code, kInvalidConfig);
  EXPECT_EQ(invoke({"design", "--arch", "fir"}).code, kInvalidConfig);
  EXPECT_EQ(invoke({"--version"}).code, kOk);
}

TEST(CliSimulate, ImpulseThroughSecondOrder) {
  const auto r = invoke({"simulate", "--input", "-", "--r", "2", "--n", "2", "--bin", "4"}, "1\n0\n0\n");
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out, "1\n1\n");
  EXPECT_NE(r.err.find("# output_width=6"), std::string::npos);
}

TEST(CliSimulate, ZeroLengthInput) {
  const auto r = invoke({"simulate", "--input", "-"}, "");
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out, "");
}

TEST(CliSimulate, ErrorCodes) {
  EXPECT_EQ(invoke({"simulate", "--input", "-", "--bin", "4"}, "1\nx\n").code, kMalformedInput);
  EXPECT_EQ(invoke({"simulate", "--input", "-", "--bin", "4"}, "9\n").code, kWidthMismatch);
  EXPECT_EQ(invoke({"simulate", "--input", "-", "--bin", "4"}, "width=6 count=0\n").code, kWidthMismatch);
  EXPECT_EQ(invoke({"simulate", "--input", "-", "--truncate", "25,22"}, "").code, kInvalidConfig);
  EXPECT_EQ(invoke({"simulate", "--input", "-", "--arch", "nonrec", "--r", "8", "--truncate", "20"}, "").code,
            kInvalidConfig);
  EXPECT_EQ(invoke({"simulate", "--input", "/nonexistent/file"}).code, kMalformedInput);
  EXPECT_EQ(invoke({"simulate"}).code, kInvalidConfig);
}

TEST_F(CliFiles, GateModelAndArchitecturesAgree) {
  std::mt19937_64 rng(81);
  const auto x = combdec::testing::random_input(rng, 5, 2000);
  write(path("in.txt"), samples_to_string(x, SampleFormat::text));
  const auto fast = invoke({"simulate", "--input", path("in.txt"), "--r", "8"});
  const auto gate = invoke({"simulate", "--input", path("in.txt"), "--r", "8", "--gate-model"});
  const auto nonrec = invoke({"simulate", "--input", path("in.txt"), "--r", "8", "--arch", "nonrec"});
  ASSERT_EQ(fast.code, kOk);
  EXPECT_EQ(fast.out, gate.out);
  EXPECT_EQ(fast.out, nonrec.out);
}

TEST_F(CliFiles, SimulateThenCompareAgainstOracle) {
  std::mt19937_64 rng(82);
  for (const std::string r : {"3", "16"}) {
    const auto x = combdec::testing::random_input(rng, 5, 3000);
    write(path("in.bin"), samples_to_string(x, SampleFormat::binary));
    const auto sim = invoke({"simulate", "--input", path("in.bin"), "--r", r, "--m", "2", "--output", path("out.txt")});
    ASSERT_EQ(sim.code, kOk) << sim.err;
    EXPECT_TRUE(fs::exists(path("out.txt.manifest")));
    const auto cmp = invoke({"oracle", "--r", r, "--m", "2", "--input", path("in.bin"), "--compare", path("out.txt")});
    EXPECT_EQ(cmp.code, kOk) << cmp.err;
    EXPECT_NE(cmp.out.find(" mismatches=0"), std::string::npos);

    // A corrupted sample is caught.
    auto text = read(path("out.txt"));
    text.insert(0, "7\n");
    write(path("bad.txt"), text);
    EXPECT_EQ(invoke({"oracle", "--r", r, "--m", "2", "--input", path("in.bin"), "--compare", path("bad.txt")}).code,
              kInvariantViolation);
  }
}

TEST_F(CliFiles, PipelinedOutputIsShifted) {
  std::mt19937_64 rng(83);
  const auto x = combdec::testing::random_input(rng, 5, 400);
  write(path("in.txt"), samples_to_string(x, SampleFormat::text));
  const auto base = invoke({"simulate", "--input", path("in.txt"), "--r", "2"});
  const auto piped = invoke({"simulate", "--input", path("in.txt"), "--r", "2", "--pipelined"});
  ASSERT_EQ(piped.code, kOk) << piped.err;
  EXPECT_NE(piped.err.find("# latency_outputs=2"), std::string::npos);
  const auto b = samples_from_string(base.out, 25), p = samples_from_string(piped.out, 25);
  EXPECT_EQ(p, combdec::testing::delayed(b, 2));
}

TEST_F(CliFiles, ManifestIsDeterministicApartFromTimestamp) {
  write(path("in.txt"), "1\n2\n3\n");
  auto strip = [](const std::string& m) {
    std::string s;
    std::istringstream is(m);
    for (std::string line; std::getline(is, line);)
      if (line.rfind("timestamp=", 0) != 0) s += line + "\n";
    return s;
  };
  std::string first;
  for (int i = 0; i < 2; ++i) {
    ASSERT_EQ(invoke({"simulate", "--input", path("in.txt"), "--output", path("o.txt")}).code, kOk);
    const auto m = read(path("o.txt.manifest"));
    EXPECT_NE(m.find("version="), std::string::npos);
    EXPECT_NE(m.find("timestamp="), std::string::npos);
    if (i == 0) first = strip(m);
    else EXPECT_EQ(strip(m), first);
  }
}

TEST_F(CliFiles, ConfigFileThenFlags) {
  write(path("c.cfg"), "# design\nn=3 r=4\nbin=6\narch=cic\n");
  const auto from_file = invoke({"design", "--config", path("c.cfg")});
  ASSERT_EQ(from_file.code, kOk) << from_file.err;
  EXPECT_NE(from_file.out.find("gmax=64\n"), std::string::npos);
  const auto overridden = invoke({"design", "--config", path("c.cfg"), "--n", "2"});
  EXPECT_NE(overridden.out.find("gmax=16\n"), std::string::npos);
  write(path("bad.cfg"), "n=3 colour=red\n");
  EXPECT_EQ(invoke({"design", "--config", path("bad.cfg")}).code, kInvalidConfig);
  EXPECT_EQ(invoke({"design", "--config", path("missing.cfg")}).code, kInvalidConfig);
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

TEST(CliResponse, CsvWithNulls) {
  const auto r = invoke({"response", "--fs", "6144000", "--points", "4096"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 4097u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"freq_hz", "magnitude", "magnitude_db"}));
  EXPECT_DOUBLE_EQ(std::stod(rows[1][1]), 1048576.0);
  double min_db = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) min_db = std::min(min_db, std::stod(rows[i][2]));
  EXPECT_LT(min_db, -100.0);
  EXPECT_EQ(invoke({"response", "--points", "1"}).code, kInvalidConfig);
}

TEST(CliClocks, Trend) {
  const auto r = invoke({"clocks", "--sweep-r", "8,16,32,64", "--n", "5", "--bin", "5"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"arch", "R", "N", "width", "depth", "est_mhz"}));
  double peak = 0;
  for (std::size_t i = 1; i < 9; ++i) peak = std::max(peak, std::stod(rows[i][5]));
  EXPECT_DOUBLE_EQ(peak, 90.0);
  for (std::size_t i = 2; i <= 4; ++i) EXPECT_LT(std::stod(rows[i][5]), std::stod(rows[i - 1][5]));
  for (std::size_t i = 6; i <= 8; ++i) EXPECT_EQ(rows[i][5], rows[5][5]);
  EXPECT_EQ(invoke({"clocks", "--sweep-r", "8,12"}).code, kInvalidConfig);
  EXPECT_EQ(invoke({"clocks", "--no-pipelined"}).code, kOk);
}

TEST(CliAdder, VerifyAndDepth) {
  const auto v = invoke({"adder", "--verify", "--width", "8"});
  ASSERT_EQ(v.code, kOk) << v.err;
  EXPECT_EQ(v.out, "OK 131072 cases\n");
  EXPECT_EQ(invoke({"adder", "--verify", "--width", "16", "--cases", "5000"}).out, "OK 5000 cases\n");
  const auto d = invoke({"adder", "--depth", "--width", "8"});
  EXPECT_NE(d.out.find("mcla_depth=9"), std::string::npos);
  EXPECT_EQ(invoke({"adder", "--verify", "--width", "10"}).code, kInvalidConfig);
}

TEST(CliSnr, DemoAndFileModes) {
  const auto demo = invoke({"snr"});
  ASSERT_EQ(demo.code, kOk) << demo.err;
  const auto rows = csv_rows(demo.out);
  double improvement = -1;
  for (const auto& row : rows)
    if (row.size() == 2 && row[0] == "improvement_db") improvement = std::stod(row[1]);
  EXPECT_GE(improvement, 20.0);
  EXPECT_EQ(invoke({"snr", "--input", "-", "--fs", "48000", "--tone", "1000", "--band", "20000"}, "1\n2\n").code,
            kInvalidConfig);
  EXPECT_EQ(invoke({"snr", "--amplitude", "1.5"}).code, kInvalidConfig);
}

TEST(CliOracle, Taps) {
  const auto r = invoke({"oracle", "--taps", "--r", "2", "--n", "2"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, "1\n2\n1\n");
}

}  // namespace
}  // namespace combdec::cli
