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
#include <string>
#include <vector>

#include "qinst/numerics.hpp"

namespace qinst {

enum class GateKind { kFixed, kVariable };

// Gates act on at most this many qubits (svd limit of 64x64).
inline constexpr std::size_t kMaxGateArity = 6;

// Largest circuit for which a dense unitary is ever formed.
inline constexpr int kMaxUnitaryQubits = 14;

/// A unitary bound to a sorted set of qubits.
///
/// The unitary is expressed in the gate's local little-endian basis: local
/// bit p belongs to qubit location[p]. Fixed gates are never touched by the
/// optimizers.
struct Gate {
  std::vector<int> location;
  GateKind kind = GateKind::kFixed;
  ComplexMatrix unitary;
  std::string label;

  std::size_t arity() const { return location.size(); }
  std::size_t dim() const { return std::size_t{1} << location.size(); }
  bool is_variable() const { return kind == GateKind::kVariable; }
};

// Validates location ordering and unitarity (1e-10).
Gate make_gate(std::vector<int> location, ComplexMatrix unitary, GateKind kind,
               std::string label = {});

ComplexMatrix u3_matrix(double theta, double phi, double lambda);

// CNOT in the local basis of the sorted pair {min(c,t), max(c,t)}.
ComplexMatrix cnot_matrix(int control, int target);

Gate u3_gate(int qubit, double theta, double phi, double lambda);
Gate cx_gate(int control, int target);

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }
  // Number of variable gates.
  std::size_t num_variable() const;

  const std::vector<Gate> &gates() const { return gates_; }
  const Gate &gate(std::size_t i) const { return gates_.at(i); }

  void append(Gate gate);
  void append(const Circuit &other);
  void insert(std::size_t pos, Gate gate);
  void erase(std::size_t pos);

  // Replaces the unitary of gate i; rejects dimension changes.
  void set_unitary(std::size_t i, ComplexMatrix unitary);

  // Reversed gate order with every unitary adjointed.
  Circuit inverse() const;

  std::size_t count_label(const std::string &label) const;

 private:
  void check(const Gate &gate) const;

  int num_qubits_ = 0;
  std::vector<Gate> gates_;
};

// Full 2^n x 2^n unitary (gate 0 applied first); n <= kMaxUnitaryQubits.
ComplexMatrix circuit_unitary(const Circuit &circuit);

// Places a local gate unitary on `location` of an n-qubit register.
ComplexMatrix embed_unitary(const ComplexMatrix &local,
                            const std::vector<int> &location, int num_qubits);

struct ZyzAngles {
  double theta = 0.0;   // in [0, pi]
  double phi = 0.0;
  double lambda = 0.0;
  double phase = 0.0;   // u = e^{i phase} U3(theta, phi, lambda)
};

ZyzAngles zyz_reparameterize(const ComplexMatrix &u);

}  // namespace qinst
