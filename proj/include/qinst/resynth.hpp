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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qinst/circuit.hpp"
#include "qinst/optimizer.hpp"
#include "qinst/simulator.hpp"

namespace qinst {

// Block unitaries are formed densely for verification, which bounds the
// partition width.
inline constexpr int kMaxBlockQubits = 12;
// Whole-circuit unitary check after resynthesis is done up to this width.
inline constexpr int kMaxVerifyQubits = 10;

/// A block of gates supported on at most k qubits.
struct Partition {
  std::vector<int> qubits;         // sorted original qubit indices
  std::vector<std::size_t> gates;  // owned original gate indices, ascending
  Circuit block;                   // gates relabeled onto 0..qubits.size()-1
};

struct CoverageBin {
  std::size_t size = 0;  // qubits per partition
  std::size_t partitions = 0;
  std::size_t gates = 0;
  double fraction = 0.0;  // of all gates
};

struct CoverageReport {
  std::size_t total_gates = 0;
  std::vector<CoverageBin> bins;  // one per size 1..k
};

struct PartitionPlan {
  int k = 0;
  std::vector<Partition> partitions;  // in emission order
  CoverageReport coverage;
};

/// Greedy left-to-right partitioner.
///
/// Each qubit is held by at most one open block. A gate joins the block(s)
/// holding its qubits when the merged support stays within k; a gate on
/// free qubits joins the widest open block it fits in. Otherwise the
/// holding blocks are closed and the gate starts a new block. Blocks are
/// emitted in closing order, which keeps every qubit's gate sequence intact.
PartitionPlan partition(const Circuit &circuit, int k);

// Concatenates blocks (in plan order) back onto the original qubits.
Circuit reassemble(int num_qubits, const std::vector<Partition> &partitions);

struct DeletionOutcome {
  Circuit block;
  std::size_t deletions = 0;
  std::size_t attempts = 0;
  // Normalized Frobenius distance of the final block to the original block.
  double distance = 0.0;
  bool skipped = false;
  std::string warning;
  // Summed over the winning run of every attempt.
  OpCounters counters;
};

struct ResynthOptions {
  int k = 3;
  // Keep sweeping until a full pass deletes nothing.
  bool repeat_until_fixpoint = false;
  // Per-instantiation iteration cap inside the flow.
  std::size_t max_iter = 10000;
};

/// Uni-directional deletion sweep over one block: each gate is removed in
/// turn and the remainder re-instantiated (u3 gates variable, CNOTs fixed)
/// against the block's original unitary. A deletion is kept only if the
/// instantiation converged and the full-unitary distance is within
/// dist_tol * (1 + overtrain_ratio). If a fixed two-qubit gate cannot be
/// removed alone, it is retried together with the next gate on exactly the
/// same qubits.
DeletionOutcome delete_gates_pass(const Partition &part, const OptimizerConfig &config,
                                  const ResynthOptions &options = {});

struct PartitionRow {
  std::size_t index = 0;
  std::vector<int> qubits;
  std::size_t gates_before = 0;
  std::size_t gates_after = 0;
  std::size_t deletions = 0;
  double distance = 0.0;
  bool skipped = false;
  std::string message;
};

struct ResynthReport {
  int k = 0;
  std::size_t u3_before = 0;
  std::size_t u3_after = 0;
  std::size_t cnot_before = 0;
  std::size_t cnot_after = 0;
  std::size_t partitions = 0;
  std::size_t partitions_modified = 0;
  std::size_t deletions = 0;
  std::optional<double> final_distance;  // set when n <= kMaxVerifyQubits
  CoverageReport coverage;
  std::vector<PartitionRow> rows;
  std::vector<std::string> warnings;
  OpCounters counters;
  double runtime_s = 0.0;
};

struct ResynthOutput {
  Circuit circuit;
  ResynthReport report;
};

/// Partitions, runs delete_gates_pass on every partition (in parallel over
/// config.threads workers) and reassembles. A failing partition keeps its
/// original gates and is reported; it never aborts the others.
ResynthOutput resynth_flow(const Circuit &circuit, const OptimizerConfig &config,
                           const ResynthOptions &options);

}  // namespace qinst
