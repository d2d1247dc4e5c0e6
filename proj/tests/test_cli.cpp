// Copyright 2026 The qinst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <json.hpp>
#include <set>
#include <sstream>

#include "qinst/cli.hpp"
#include "qinst/qasm.hpp"
#include "qinst/report.hpp"
#include "qinst/simulator.hpp"
#include "support.hpp"

namespace qinst {
namespace {

using Json = nlohmann::json;
using testing::TempDir;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string &s) {
  std::vector<std::string> lines;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    Rng rng(81);
    templ_ = testing::random_circuit(3, 14, rng, 0.35);
    dir_.write("templ.qasm", write_qasm(templ_));
    dir_.write("target.json", unitary_to_json(circuit_unitary(templ_)));
    Circuit hard(3);
    for (int q = 0; q < 3; ++q) hard.append(u3_gate(q, 0.1, 0.2, 0.3));
    dir_.write("thin.qasm", write_qasm(hard));
    dir_.write("random.json", unitary_to_json(haar_random_unitary(8, rng)));
  }

  std::string path(const std::string &name) const { return dir_.file(name); }

  TempDir dir_;
  Circuit templ_;
};

TEST_F(CliTest, SelfInstantiationConverges) {
  const CliRun r = run({"instantiate", path("target.json"), path("templ.qasm"), "--seed", "4",
                     "--multistarts", "4", "--threads", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["instantiation"]["termination"], "converged");
  EXPECT_LT(j["instantiation"]["c_train"].get<double>(), 1e-10);
  EXPECT_EQ(j["command"], "instantiate");
  EXPECT_EQ(j["tool_version"], kToolVersion);
  EXPECT_TRUE(j.contains("execution"));
}

TEST_F(CliTest, BackendsAgreeOnTheUnitary) {
  const ComplexMatrix target = circuit_unitary(templ_);
  std::vector<double> reported;
  std::vector<ComplexMatrix> exported;
  for (const std::string backend : {"sample", "full"}) {
    const std::string out = path("out_" + backend + ".qasm");
    const CliRun r = run({"instantiate", path("target.json"), path("templ.qasm"), "--backend",
                          backend, "--seed", "9", "--multistarts", "4", "--qasm-out", out});
    ASSERT_EQ(r.code, 0) << backend << r.err;
    reported.push_back(Json::parse(r.out)["instantiation"]["frobenius_distance"].get<double>());
    exported.push_back(circuit_unitary(parse_qasm(testing::read_text(out))));
  }
  EXPECT_LT(std::abs(reported[0] - reported[1]), 1e-8);
  EXPECT_LT(reported[0], 1e-8);
  // QASM export drops per-gate phases, so the files agree up to a global phase.
  EXPECT_LT(testing::diff_up_to_phase(exported[0], target), 1e-7);
  EXPECT_LT(testing::diff_up_to_phase(exported[1], target), 1e-7);
}

TEST_F(CliTest, ForcedCapExitsTwo) {
  const CliRun r = run({"instantiate", path("random.json"), path("thin.qasm"), "--max-iter", "1",
                     "--min-iter", "1", "--multistarts", "2"});
  EXPECT_EQ(r.code, 2) << r.err;
  EXPECT_EQ(Json::parse(r.out)["instantiation"]["termination"], "max_iter");
}

TEST_F(CliTest, PlateauExitsTwo) {
  const CliRun r = run({"instantiate", path("random.json"), path("thin.qasm"), "--multistarts", "2"});
  EXPECT_EQ(r.code, 2) << r.err;
  EXPECT_EQ(Json::parse(r.out)["instantiation"]["termination"], "plateau");
}

TEST_F(CliTest, StatesExhaustedExitsThree) {
  Rng rng(82);
  const Circuit wide = testing::brickwork(4, 8, rng);
  dir_.write("wide.qasm", write_qasm(wide));
  dir_.write("wide.json", unitary_to_json(circuit_unitary(wide)));
  const CliRun r = run({"instantiate", path("wide.json"), path("wide.qasm"), "--train-states", "1",
                     "--max-train-states", "2", "--multistarts", "1", "--diff-tol-r", "1e-5"});
  EXPECT_EQ(r.code, 3) << r.out << r.err;
}

TEST_F(CliTest, ErrorsExitOne) {
  EXPECT_EQ(run({"instantiate", path("missing.json"), path("templ.qasm")}).code, 1);
  dir_.write("bad.qasm", "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\nh q[0];\n");
  const CliRun bad = run({"instantiate", path("target.json"), path("bad.qasm")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("line 4"), std::string::npos) << bad.err;
  EXPECT_EQ(run({"instantiate", path("target.json")}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"instantiate", path("target.json"), path("templ.qasm"), "--beta", "2"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  dir_.write("cfg.toml", "multistarts = 3\nseed = 11\nbackend = full\n");
  const CliRun r = run({"instantiate", path("target.json"), path("templ.qasm"), "--config",
                     path("cfg.toml"), "--seed", "12"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["config"]["multistarts"], 3);
  EXPECT_EQ(j["config"]["seed"], 12);
  EXPECT_EQ(j["config"]["backend"], "full");
}

TEST_F(CliTest, ReportRoundTripsLosslessly) {
  const CliRun r = run({"instantiate", path("target.json"), path("templ.qasm"), "--seed", "5",
                     "--multistarts", "2"});
  ASSERT_EQ(r.code, 0);
  const RunReport parsed = parse_report(r.out);
  EXPECT_EQ(dump_report(parsed), r.out);
  EXPECT_EQ(parsed.config.seed, 5u);
  ASSERT_TRUE(parsed.instantiation.has_value());
  EXPECT_EQ(parsed.instantiation->termination, Termination::kConverged);
}

TEST_F(CliTest, ResynthRemovesRedundancy) {
  Rng rng(83);
  const Circuit half = testing::random_circuit(3, 8, rng, 0.4);
  Circuit c = half;
  c.append(half.inverse());
  dir_.write("double.qasm", write_qasm(c));
  const CliRun r = run({"resynth", path("double.qasm"), "--k", "3", "--seed", "2", "--multistarts",
                     "4", "--qasm-out", path("double_out.qasm")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  const auto &s = j["resynth"];
  EXPECT_LT(s["u3_after"].get<int>() + s["cnot_after"].get<int>(),
            s["u3_before"].get<int>() + s["cnot_before"].get<int>());
  for (const char *key : {"u3_before", "u3_after", "cnot_before", "cnot_after", "partitions",
                          "coverage"}) {
    EXPECT_TRUE(s.contains(key)) << key;
  }
  EXPECT_TRUE(j["execution"].contains("resynth_runtime_s"));
  const Circuit out = parse_qasm(testing::read_text(path("double_out.qasm")));
  EXPECT_LT(frobenius_cost(circuit_unitary(c), out), 1e-8);
  EXPECT_EQ(dump_report(parse_report(r.out)), r.out);
}

TEST_F(CliTest, ResynthInfeasibleK) {
  const CliRun r = run({"resynth", path("templ.qasm"), "--k", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("partition size"), std::string::npos) << r.err;
}

TEST_F(CliTest, ResynthDeterministicUnderSeed) {
  const std::vector<std::string> args{"resynth", path("templ.qasm"), "--k", "2", "--seed", "8",
                                      "--multistarts", "3"};
  auto with_threads = [&](const char *t) {
    std::vector<std::string> a = args;
    a.insert(a.end(), {"--threads", t});
    return run(a);
  };
  const CliRun a = with_threads("1"), b = with_threads("3");
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(deterministic_section(a.out), deterministic_section(b.out));
}

TEST_F(CliTest, BenchSchema) {
  TempDir corpus;
  corpus.write("tiny.qasm", write_qasm(templ_));
  const CliRun r = run({"bench", corpus.path(), "--sizes", "2", "--per-size", "3", "--multistarts",
                     "2", "--seed", "1", "--csv", path("bench.csv"), "--out", path("bins.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = split_lines(testing::read_text(path("bench.csv")));
  ASSERT_EQ(lines.size(), 1u + 2u * 3u);
  for (const char *col : {"success", "termination", "wall_s", "mult_adds", "u3", "n", "bin_key",
                          "backend"}) {
    EXPECT_NE(lines[0].find(col), std::string::npos) << col;
  }
  std::set<std::string> backends;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    backends.insert(lines[i].find(",sample,") != std::string::npos ? "sample" : "full");
  }
  EXPECT_EQ(backends.size(), 2u);
  const Json bins = Json::parse(testing::read_text(path("bins.json")));
  EXPECT_EQ(bins["rows"], 6);
  EXPECT_FALSE(bins["bins"].empty());
}

TEST_F(CliTest, BenchBinKeyIsU3OverDim) {
  TempDir corpus;
  Circuit c(2);
  for (int i = 0; i < 3; ++i) c.append(u3_gate(i % 2, 0.1 * i, 0.2, 0.3));
  c.append(cx_gate(0, 1));
  corpus.write("c.qasm", write_qasm(c));
  const CliRun r = run({"bench", corpus.path(), "--sizes", "2", "--per-size", "1", "--backends",
                     "full", "--multistarts", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = split_lines(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_NE(lines[1].find(",0.75,\"[0.5,1)\",full,"), std::string::npos) << lines[1];
}

TEST_F(CliTest, BenchSampledCheaperThanFull) {
  Rng rng(84);
  TempDir corpus;
  corpus.write("b6.qasm", write_qasm(testing::brickwork(6, 3, rng)));
  const CliRun r = run({"bench", corpus.path(), "--sizes", "6", "--per-size", "1", "--multistarts",
                     "1", "--max-iter", "8", "--min-iter", "8", "--train-states", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = split_lines(r.out);
  ASSERT_EQ(lines.size(), 3u);
  auto mult_adds = [](const std::string &line) {
    std::vector<std::string> cols;
    std::istringstream in(line);
    for (std::string c; std::getline(in, c, ',');) cols.push_back(c);
    return std::stod(cols[cols.size() - 3]);
  };
  EXPECT_LT(mult_adds(lines[1]), mult_adds(lines[2]));
}

TEST_F(CliTest, BenchEmptyCorpus) {
  TempDir empty;
  EXPECT_EQ(run({"bench", empty.path(), "--sizes", "2"}).code, 1);
}

TEST_F(CliTest, PartitionStats) {
  Rng rng(85);
  dir_.write("wide.qasm", write_qasm(testing::random_circuit(6, 60, rng, 0.4)));
  const CliRun r = run({"partition-stats", path("wide.qasm"), "--k-list", "2,3,4"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::map<int, double> sums;
  const auto lines = split_lines(r.out);
  EXPECT_EQ(lines[0], "k,size,partitions,gates,fraction");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    int k = 0, size = 0, parts = 0, gates = 0;
    double frac = 0.0;
    ASSERT_EQ(std::sscanf(lines[i].c_str(), "%d,%d,%d,%d,%lf", &k, &size, &parts, &gates, &frac), 5);
    sums[k] += frac;
  }
  ASSERT_EQ(sums.size(), 3u);
  for (const auto &[k, s] : sums) EXPECT_NEAR(s, 1.0, 1e-12) << "k=" << k;
}

TEST_F(CliTest, PartitionStatsTwoQubitCircuit) {
  Circuit c(2);
  c.append(u3_gate(0, 0.1, 0.2, 0.3));
  c.append(cx_gate(1, 0));
  dir_.write("two.qasm", write_qasm(c));
  const CliRun r = run({"partition-stats", path("two.qasm"), "--k-list", "3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("3,2,1,2,1\n"), std::string::npos) << r.out;
}

TEST(ExitCodes, DistinctPerOutcome) {
  EXPECT_EQ(exit_code(Termination::kConverged), 0);
  EXPECT_EQ(exit_code(Termination::kPlateau), 2);
  EXPECT_EQ(exit_code(Termination::kMaxIter), 2);
  EXPECT_EQ(exit_code(Termination::kStatesExhausted), 3);
}

}  // namespace
}  // namespace qinst
