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
#include <cstdint>
#include <variant>
#include <vector>

#include "qinst/circuit.hpp"
#include "qinst/numerics.hpp"

namespace qinst {

// Largest register for the sampled backend (state-vector memory bound).
inline constexpr int kMaxSampleQubits = 20;
// Largest register for the full-unitary backend.
inline constexpr int kMaxFullQubits = kMaxUnitaryQubits;

// States are re-normalized after this many consecutive gate applications.
inline constexpr std::size_t kRenormalizeEvery = 64;

/// Work counters. One multiply-add is one complex a += b * c.
struct OpCounters {
  std::uint64_t mult_adds = 0;
  std::uint64_t gate_applications = 0;
  std::uint64_t environments = 0;
  std::uint64_t svds = 0;

  OpCounters &operator+=(const OpCounters &o) {
    mult_adds += o.mult_adds;
    gate_applications += o.gate_applications;
    environments += o.environments;
    svds += o.svds;
    return *this;
  }
  friend bool operator==(const OpCounters &, const OpCounters &) = default;
};

// states <- (u on location) states. Cost m * 2^n * 2^k multiply-adds.
void apply_unitary_inplace(StateSet &states, const std::vector<int> &location,
                           const ComplexMatrix &u, OpCounters *counters = nullptr);

StateSet apply_gate(const StateSet &states, const Gate &gate,
                    OpCounters *counters = nullptr);

// Applies gate^dagger.
StateSet apply_gate_adjoint(const StateSet &states, const Gate &gate,
                            OpCounters *counters = nullptr);

// Runs every gate of `circuit` over the states.
StateSet simulate(const Circuit &circuit, StateSet states,
                  OpCounters *counters = nullptr);

/// The unitary to instantiate, given either densely or as a reference
/// circuit whose action is simulated on demand.
class Target {
 public:
  explicit Target(ComplexMatrix unitary);
  explicit Target(Circuit reference);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return std::size_t{1} << num_qubits_; }

  // U|psi_j> for every input state.
  StateSet apply(const StateSet &inputs, OpCounters *counters = nullptr) const;

  // Dense matrix (computed from the reference circuit when needed).
  ComplexMatrix dense() const;

 private:
  int num_qubits_ = 0;
  std::variant<ComplexMatrix, Circuit> repr_;
};

/// Pre-computed tensors of one optimization run.
///
/// outputs() holds U|psi_j>; its conjugate is the A tensor <psi_j|U^dagger.
/// prefix(i) holds the inputs after gates 0..i-1 (prefix(0) = inputs).
/// Entries from dirty_from() on are stale until refresh() is called.
class SimCaches {
 public:
  SimCaches(const Target &target, const Circuit &circuit, StateSet inputs,
            OpCounters *counters = nullptr);
  // Output states supplied directly instead of a target.
  SimCaches(StateSet outputs, const Circuit &circuit, StateSet inputs,
            OpCounters *counters = nullptr);

  const StateSet &inputs() const { return prefixes_.front(); }
  const StateSet &outputs() const { return outputs_; }
  std::size_t num_states() const { return outputs_.size(); }
  std::size_t num_prefixes() const { return prefixes_.size(); }
  std::size_t dirty_from() const { return dirty_from_; }

  // Throws InternalError if entry i is stale.
  const StateSet &prefix(std::size_t i) const;

  // Marks prefix entries i, i+1, ... stale (i >= 1).
  void invalidate_from(std::size_t i);

  // Rebuilds stale prefix entries from the circuit's current gates.
  void refresh(const Circuit &circuit);

  bool valid() const { return dirty_from_ == prefixes_.size(); }

 private:
  void check_shapes(const Circuit &circuit) const;

  StateSet outputs_;
  std::vector<StateSet> prefixes_;
  std::size_t dirty_from_ = 1;
  OpCounters *counters_ = nullptr;
};

struct EnvironmentMatrix {
  std::size_t gate_index = 0;
  ComplexMatrix e;  // Tr(e * u) is the cost's linear form in gate u
};

/// Environment of gate i from the prefix cache and a right accumulator.
///
/// `right_acc` holds the output states pulled back through gates k-1..i+1,
/// i.e. |r_j> = G_{i+1}^dagger ... G_{k-1}^dagger U|psi_j>. Then
///   sum_j <psi_j|U^dagger C|psi_j> = sum_j <r_j| G_i |b_j> = Tr(e u_i).
EnvironmentMatrix environment_sample(const SimCaches &caches, const Circuit &circuit,
                                     std::size_t i, const StateSet &right_acc,
                                     OpCounters *counters = nullptr);

/// Full-trace environment: Tr(e v) = Tr(U^dagger C[gate i -> v]). Forms the
/// prefix and suffix unitaries densely; n <= kMaxFullQubits.
EnvironmentMatrix environment_full(const ComplexMatrix &target, const Circuit &circuit,
                                   std::size_t i);

// sum_j <left_j|right_j>.
Complex overlap_sum(const StateSet &left, const StateSet &right);

// (1/M) sum_j || a_j - b_j ||^2.
double mean_squared_distance(const StateSet &a, const StateSet &b);

// (1/M) sum_j ||U|psi_j> - C|psi_j>||^2 = 2 - (2/M) Re sum_j <psi_j|U^dagger C|psi_j>,
// in [0, 4]. Requires refreshed caches.
double sample_cost(const SimCaches &caches, const Circuit &circuit);

// 1 - Re Tr(U^dagger C) / 2^n, in [0, 2].
double frobenius_cost(const ComplexMatrix &target, const Circuit &circuit);
double frobenius_cost(const ComplexMatrix &target, const ComplexMatrix &candidate);

}  // namespace qinst
