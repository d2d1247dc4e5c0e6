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

#include "qinst/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qinst/detail/kernels.hpp"
#include "qinst/errors.hpp"

namespace qinst {

namespace {

constexpr double kGateUnitarityTol = 1e-10;

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

}  // namespace

Gate make_gate(std::vector<int> location, ComplexMatrix unitary, GateKind kind,
               std::string label) {
  if (location.empty() || location.size() > kMaxGateArity) {
    throw DimensionError("gate arity must be between 1 and " +
                         std::to_string(kMaxGateArity));
  }
  for (std::size_t i = 0; i < location.size(); ++i) {
    if (location[i] < 0) throw DimensionError("negative qubit index");
    if (i > 0 && location[i] <= location[i - 1]) {
      throw DimensionError("gate location must be strictly increasing");
    }
  }
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << location.size());
  if (unitary.rows() != d || unitary.cols() != d) {
    throw DimensionError("gate unitary is " + std::to_string(unitary.rows()) +
                         "x" + std::to_string(unitary.cols()) + ", expected " +
                         std::to_string(d) + "x" + std::to_string(d));
  }
  if (!all_finite(unitary)) throw NumericError("gate unitary is not finite");
  if (unitarity_error(unitary) > kGateUnitarityTol) {
    throw NumericError("gate unitary is not unitary");
  }
  return Gate{std::move(location), kind, std::move(unitary), std::move(label)};
}

ComplexMatrix u3_matrix(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  ComplexMatrix u(2, 2);
  u(0, 0) = c;
  u(0, 1) = -std::polar(s, lambda);
  u(1, 0) = std::polar(s, phi);
  u(1, 1) = std::polar(c, phi + lambda);
  return u;
}

ComplexMatrix cnot_matrix(int control, int target) {
  if (control == target) throw DimensionError("cx control equals target");
  // Local bit 0 is the lower qubit index.
  const int control_bit = control < target ? 0 : 1;
  const int target_bit = 1 - control_bit;
  ComplexMatrix u = ComplexMatrix::Zero(4, 4);
  for (int a = 0; a < 4; ++a) {
    int b = a;
    if ((a >> control_bit) & 1) b ^= 1 << target_bit;
    u(b, a) = 1.0;
  }
  return u;
}

Gate u3_gate(int qubit, double theta, double phi, double lambda) {
  return make_gate({qubit}, u3_matrix(theta, phi, lambda), GateKind::kVariable,
                   "u3");
}

Gate cx_gate(int control, int target) {
  return make_gate({std::min(control, target), std::max(control, target)},
                   cnot_matrix(control, target), GateKind::kFixed, "cx");
}

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1) throw DimensionError("circuit needs at least one qubit");
}

std::size_t Circuit::num_variable() const {
  return static_cast<std::size_t>(std::count_if(
      gates_.begin(), gates_.end(), [](const Gate &g) { return g.is_variable(); }));
}

void Circuit::check(const Gate &gate) const {
  if (gate.location.empty() || gate.location.back() >= num_qubits_) {
    throw DimensionError("gate location exceeds circuit width " +
                         std::to_string(num_qubits_));
  }
}

void Circuit::append(Gate gate) {
  check(gate);
  gates_.push_back(std::move(gate));
}

void Circuit::append(const Circuit &other) {
  if (other.num_qubits_ > num_qubits_) {
    throw DimensionError("appended circuit is wider than the receiver");
  }
  for (const Gate &g : other.gates_) gates_.push_back(g);
}

void Circuit::insert(std::size_t pos, Gate gate) {
  if (pos > gates_.size()) throw DimensionError("insert position out of range");
  check(gate);
  gates_.insert(gates_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(gate));
}

void Circuit::erase(std::size_t pos) {
  if (pos >= gates_.size()) throw DimensionError("erase position out of range");
  gates_.erase(gates_.begin() + static_cast<std::ptrdiff_t>(pos));
}

void Circuit::set_unitary(std::size_t i, ComplexMatrix unitary) {
  Gate &g = gates_.at(i);
  if (unitary.rows() != g.unitary.rows() || unitary.cols() != g.unitary.cols()) {
    throw DimensionError("replacement unitary has the wrong dimension");
  }
  g.unitary = std::move(unitary);
}

Circuit Circuit::inverse() const {
  Circuit out(num_qubits_);
  out.gates_.reserve(gates_.size());
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    Gate g = *it;
    g.unitary = it->unitary.adjoint();
    out.gates_.push_back(std::move(g));
  }
  return out;
}

std::size_t Circuit::count_label(const std::string &label) const {
  return static_cast<std::size_t>(std::count_if(
      gates_.begin(), gates_.end(), [&](const Gate &g) { return g.label == label; }));
}

ComplexMatrix circuit_unitary(const Circuit &circuit) {
  const int n = circuit.num_qubits();
  if (n > kMaxUnitaryQubits) {
    throw CapacityError("circuit_unitary is limited to " +
                        std::to_string(kMaxUnitaryQubits) + " qubits");
  }
  const auto dim = Eigen::Index{1} << n;
  // Rows of `cols` are the images of the basis states, i.e. columns of C.
  ComplexMatrix cols = ComplexMatrix::Identity(dim, dim);
  for (const Gate &g : circuit.gates()) {
    const auto offsets = detail::local_offsets(g.location);
    for (Eigen::Index j = 0; j < dim; ++j) {
      detail::apply_local({cols.data() + j * dim, static_cast<std::size_t>(dim)},
                          n, g.location, offsets, g.unitary);
    }
  }
  return cols.transpose();
}

ComplexMatrix embed_unitary(const ComplexMatrix &local,
                            const std::vector<int> &location, int num_qubits) {
  Circuit c(num_qubits);
  c.append(make_gate(location, local, GateKind::kFixed));
  return circuit_unitary(c);
}

ZyzAngles zyz_reparameterize(const ComplexMatrix &u) {
  if (u.rows() != 2 || u.cols() != 2) {
    throw DimensionError("zyz_reparameterize expects a 2x2 matrix");
  }
  if (!all_finite(u) || unitarity_error(u) > 1e-10) {
    throw NumericError("zyz_reparameterize expects a unitary matrix");
  }
  const Complex u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  const double c = std::abs(u00);
  const double s = std::abs(u10);
  ZyzAngles out;
  out.theta = 2.0 * std::atan2(s, c);
  // Angles are read from the larger-magnitude entries; the small ones only
  // scale entries of the same small magnitude.
  if (c >= s) {
    out.phase = std::arg(u00);
    out.phi = s > 0.0 ? std::arg(u10) - out.phase : 0.0;
    out.lambda = std::arg(u11) - out.phase - out.phi;
  } else {
    const double gamma_phi = std::arg(u10);
    const double gamma_lambda = std::arg(-u01);
    if (c > 0.0) {
      out.phase = gamma_phi + gamma_lambda - std::arg(u11);
    } else {
      out.phase = gamma_lambda;
    }
    out.phi = gamma_phi - out.phase;
    out.lambda = gamma_lambda - out.phase;
  }
  out.phase = wrap_angle(out.phase);
  out.phi = wrap_angle(out.phi);
  out.lambda = wrap_angle(out.lambda);
  return out;
}

}  // namespace qinst
