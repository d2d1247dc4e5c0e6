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

#include <map>
#include <set>

#include "qinst/errors.hpp"
#include "qinst/resynth.hpp"
#include "qinst/simulator.hpp"
#include "support.hpp"

namespace qinst {
namespace {

using testing::max_abs_diff;
using testing::random_circuit;

// Gate labels touching each qubit, in circuit order; labels are the
// original gate indices.
std::map<int, std::vector<std::size_t>> per_qubit_sequence(
    const std::vector<std::pair<std::vector<int>, std::size_t>> &gates) {
  std::map<int, std::vector<std::size_t>> seq;
  for (const auto &[loc, id] : gates) {
    for (int q : loc) seq[q].push_back(id);
  }
  return seq;
}

void check_plan(const Circuit &c, int k) {
  const PartitionPlan plan = partition(c, k);
  std::vector<std::pair<std::vector<int>, std::size_t>> original, emitted;
  for (std::size_t i = 0; i < c.size(); ++i) original.push_back({c.gate(i).location, i});
  std::set<std::size_t> owned;
  for (const Partition &p : plan.partitions) {
    ASSERT_LE(p.qubits.size(), static_cast<std::size_t>(k));
    ASSERT_EQ(p.gates.size(), p.block.size());
    for (std::size_t g : p.gates) {
      EXPECT_TRUE(owned.insert(g).second) << "gate " << g << " owned twice";
      emitted.push_back({c.gate(g).location, g});
      for (int q : c.gate(g).location) {
        EXPECT_TRUE(std::binary_search(p.qubits.begin(), p.qubits.end(), q));
      }
    }
  }
  EXPECT_EQ(owned.size(), c.size());
  EXPECT_EQ(per_qubit_sequence(emitted), per_qubit_sequence(original));

  double total = 0.0;
  for (const CoverageBin &b : plan.coverage.bins) total += b.fraction;
  if (!c.empty()) EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(plan.coverage.bins.size(), static_cast<std::size_t>(k));
}

TEST(Partition, PreservesEveryQubitSequence) {
  Rng rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 7;
    const Circuit c = random_circuit(n, 40, rng, 0.4);
    for (int k = 2; k <= std::min(n, 5); ++k) check_plan(c, k);
  }
}

TEST(Partition, ReassemblyReproducesUnitary) {
  Rng rng(72);
  for (int trial = 0; trial < 10; ++trial) {
    const Circuit c = random_circuit(5, 30, rng, 0.4);
    const PartitionPlan plan = partition(c, 3);
    EXPECT_LT(max_abs_diff(circuit_unitary(reassemble(5, plan.partitions)), circuit_unitary(c)),
              1e-12);
  }
}

TEST(Partition, BlockUnitaryMatchesOwnedGates) {
  Rng rng(73);
  const Circuit c = random_circuit(6, 30, rng, 0.4);
  for (const Partition &p : partition(c, 3).partitions) {
    Circuit sub(6);
    for (std::size_t g : p.gates) sub.append(c.gate(g));
    std::vector<Partition> single{p};
    EXPECT_LT(max_abs_diff(circuit_unitary(reassemble(6, single)), circuit_unitary(sub)), 1e-12);
  }
}

TEST(Partition, TwoQubitCircuitFullyCoveredAtSizeTwo) {
  Circuit c(2);
  c.append(u3_gate(0, 0.1, 0.2, 0.3));
  c.append(cx_gate(0, 1));
  c.append(u3_gate(1, 0.1, 0.2, 0.3));
  const PartitionPlan plan = partition(c, 3);
  ASSERT_EQ(plan.partitions.size(), 1u);
  EXPECT_EQ(plan.coverage.bins[1].fraction, 1.0);
  EXPECT_EQ(plan.coverage.bins[0].fraction, 0.0);
  EXPECT_EQ(plan.coverage.bins[2].fraction, 0.0);
}

TEST(Partition, InfeasibleWhenGateWiderThanK) {
  Circuit c(3);
  c.append(cx_gate(0, 2));
  EXPECT_THROW(partition(c, 1), InfeasiblePartitionError);
  EXPECT_THROW(partition(c, 0), InfeasiblePartitionError);
}

TEST(Partition, EmptyCircuit) {
  const PartitionPlan plan = partition(Circuit(3), 2);
  EXPECT_TRUE(plan.partitions.empty());
  EXPECT_EQ(plan.coverage.total_gates, 0u);
}

OptimizerConfig deletion_config() {
  OptimizerConfig c;
  c.multistarts = 4;
  c.threads = 1;
  c.dist_tol = 1e-10;
  c.diff_tol_r = 1e-5;
  c.seed = 3;
  return c;
}

Circuit redundant_circuit() {
  Circuit c(3);
  c.append(u3_gate(0, 0.3, 0.1, -0.4));
  c.append(u3_gate(1, 1.2, 0.5, 0.2));
  c.append(cx_gate(0, 1));
  c.append(cx_gate(0, 1));
  c.append(u3_gate(2, 0.0, 0.0, 0.0));
  c.append(cx_gate(1, 2));
  c.append(u3_gate(2, 0.9, -0.3, 0.6));
  return c;
}

TEST(Deletion, RemovesIdentityAndCnotPair) {
  const Circuit c = redundant_circuit();
  const Partition part = partition(c, 3).partitions.front();
  const DeletionOutcome out = delete_gates_pass(part, deletion_config());
  EXPECT_GE(out.deletions, 3u);
  EXPECT_EQ(out.block.count_label("cx"), 1u);
  EXPECT_LE(out.distance, 1e-10 * 1.1);
  EXPECT_GT(out.attempts, 0u);
}

TEST(Deletion, IrreducibleBlockUnchanged) {
  Circuit c(2);
  c.append(u3_gate(0, 0.3, 0.1, -0.4));
  c.append(u3_gate(1, 1.2, 0.5, 0.2));
  c.append(cx_gate(0, 1));
  c.append(u3_gate(0, 0.7, 0.2, 0.1));
  c.append(u3_gate(1, 0.4, -1.5, 0.9));
  const Partition part = partition(c, 2).partitions.front();
  const DeletionOutcome out = delete_gates_pass(part, deletion_config());
  EXPECT_EQ(out.deletions, 0u);
  EXPECT_EQ(out.block.size(), c.size());
}

TEST(Flow, RedundantCircuitShrinksAndStaysClose) {
  const Circuit c = redundant_circuit();
  ResynthOptions opt;
  opt.k = 3;
  const ResynthOutput out = resynth_flow(c, deletion_config(), opt);
  const ResynthReport &r = out.report;
  EXPECT_GE(r.deletions, 3u);
  EXPECT_EQ(r.u3_before + r.cnot_before - r.u3_after - r.cnot_after, r.deletions);
  ASSERT_TRUE(r.final_distance.has_value());
  EXPECT_LE(*r.final_distance,
            static_cast<double>(r.partitions_modified) * 1e-10 * 1.1 + 1e-15);
  EXPECT_EQ(r.rows.size(), r.partitions);
}

TEST(Flow, CircuitTimesInverseCollapses) {
  Rng rng(74);
  const Circuit half = random_circuit(3, 8, rng, 0.4);
  Circuit c = half;
  c.append(half.inverse());
  ResynthOptions opt;
  opt.k = 3;
  const ResynthOutput out = resynth_flow(c, deletion_config(), opt);
  EXPECT_GE(2 * out.report.deletions, c.size());
  EXPECT_LT(frobenius_cost(circuit_unitary(c), out.circuit), 1e-8);
}

TEST(Flow, DeterministicAcrossThreads) {
  Rng rng(75);
  const Circuit half = random_circuit(5, 10, rng, 0.4);
  Circuit c = half;
  c.append(half.inverse());
  ResynthOptions opt;
  opt.k = 2;
  OptimizerConfig cfg = deletion_config();
  cfg.threads = 1;
  const ResynthOutput a = resynth_flow(c, cfg, opt);
  cfg.threads = 3;
  const ResynthOutput b = resynth_flow(c, cfg, opt);
  EXPECT_EQ(a.report.deletions, b.report.deletions);
  EXPECT_TRUE(a.report.counters == b.report.counters);
  EXPECT_EQ(max_abs_diff(circuit_unitary(a.circuit), circuit_unitary(b.circuit)), 0.0);
}

TEST(Flow, ClampsOversizedK) {
  Circuit c(2);
  c.append(cx_gate(0, 1));
  ResynthOptions opt;
  opt.k = 40;
  const ResynthOutput out = resynth_flow(c, deletion_config(), opt);
  EXPECT_EQ(out.report.k, kMaxBlockQubits);
  ASSERT_FALSE(out.report.warnings.empty());
}

TEST(Partition, NarrowCircuitIsOnePartition) {
  Rng rng(76);
  const Circuit c = random_circuit(3, 20, rng, 0.4);
  const PartitionPlan plan = partition(c, 3);
  ASSERT_EQ(plan.partitions.size(), 1u);
  EXPECT_EQ(plan.partitions[0].gates.size(), c.size());
}

TEST(Partition, DisjointPairsGiveTwoPartitions) {
  Circuit c(4);
  c.append(cx_gate(0, 1));
  c.append(cx_gate(2, 3));
  c.append(u3_gate(1, 0.1, 0.2, 0.3));
  c.append(u3_gate(3, 0.1, 0.2, 0.3));
  const PartitionPlan plan = partition(c, 2);
  EXPECT_EQ(plan.partitions.size(), 2u);
  EXPECT_EQ(plan.coverage.bins[1].fraction, 1.0);
}

TEST(Partition, EightQubitReassemblyIsAPermutationOfGates) {
  Rng rng(77);
  const Circuit c = random_circuit(8, 60, rng, 0.4);
  const PartitionPlan plan = partition(c, 3);
  const Circuit back = reassemble(8, plan.partitions);
  ASSERT_EQ(back.size(), c.size());
  std::size_t pos = 0;
  for (const Partition &p : plan.partitions) {
    for (std::size_t g : p.gates) {
      EXPECT_EQ(back.gate(pos).location, c.gate(g).location);
      EXPECT_EQ(max_abs_diff(back.gate(pos).unitary, c.gate(g).unitary), 0.0);
      ++pos;
    }
  }
  check_plan(c, 3);
}

// Gate fraction held by partitions of at least the previous k's width.
TEST(Partition, LargerKDoesNotShrinkWideCoverage) {
  Rng rng(78);
  for (int trial = 0; trial < 20; ++trial) {
    const Circuit c = random_circuit(8, 80, rng, 0.4);
    for (int k = 3; k <= 6; ++k) {
      const PartitionPlan small = partition(c, k - 1);
      const PartitionPlan big = partition(c, k);
      auto wide = [&](const PartitionPlan &p) {
        double f = 0.0;
        for (const CoverageBin &b : p.coverage.bins) {
          if (b.size >= static_cast<std::size_t>(k - 1)) f += b.fraction;
        }
        return f;
      };
      EXPECT_GE(wide(big) + 1e-12, wide(small)) << "trial " << trial << " k " << k;
    }
  }
}

TEST(Deletion, CnotPairBothDeletedWithinTolerance) {
  Circuit c(2);
  c.append(u3_gate(0, 0.4, 0.3, 0.2));
  c.append(cx_gate(0, 1));
  c.append(cx_gate(0, 1));
  c.append(u3_gate(1, 0.9, 0.1, 0.5));
  const DeletionOutcome out = delete_gates_pass(partition(c, 2).partitions.front(), deletion_config());
  EXPECT_EQ(out.block.count_label("cx"), 0u);
  EXPECT_LE(out.distance, 1e-10);
}

TEST(Deletion, RandomBlockNeverGrowsAndIsVerified) {
  Rng rng(79);
  for (int t = 0; t < 3; ++t) {
    const Circuit c = random_circuit(3, 10, rng, 0.3);
    const Partition part = partition(c, 3).partitions.front();
    const DeletionOutcome out = delete_gates_pass(part, deletion_config());
    EXPECT_LE(out.block.size(), part.block.size());
    EXPECT_NEAR(out.distance, frobenius_cost(circuit_unitary(part.block), out.block), 1e-15);
    EXPECT_LE(out.distance, 1e-10 * 1.1);
  }
}

TEST(Flow, NoRedundancyKeepsCounts) {
  Circuit c(2);
  c.append(u3_gate(0, 0.3, 0.1, -0.4));
  c.append(u3_gate(1, 1.2, 0.5, 0.2));
  c.append(cx_gate(0, 1));
  c.append(u3_gate(0, 0.7, 0.2, 0.1));
  c.append(u3_gate(1, 0.4, -1.5, 0.9));
  OptimizerConfig cfg = deletion_config();
  cfg.dist_tol = 1e-14;
  ResynthOptions opt;
  opt.k = 2;
  const ResynthReport r = resynth_flow(c, cfg, opt).report;
  EXPECT_EQ(r.u3_after, r.u3_before);
  EXPECT_EQ(r.cnot_after, r.cnot_before);
}

}  // namespace
}  // namespace qinst
