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

#include "qinst/simulator.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "qinst/detail/kernels.hpp"
#include "qinst/errors.hpp"

namespace qinst {

namespace {

void check_location(const std::vector<int> &location, int num_qubits) {
  if (location.empty() || location.back() >= num_qubits) {
    throw DimensionError("gate location does not fit a " +
                         std::to_string(num_qubits) + "-qubit state");
  }
}

void check_same_shape(const StateSet &a, const StateSet &b, const char *what) {
  if (a.num_qubits() != b.num_qubits() || a.size() != b.size()) {
    throw DimensionError(std::string(what) + ": state sets differ in shape");
  }
}

}  // namespace

void apply_unitary_inplace(StateSet &states, const std::vector<int> &location,
                           const ComplexMatrix &u, OpCounters *counters) {
  check_location(location, states.num_qubits());
  const auto offsets = detail::local_offsets(location);
  if (static_cast<std::size_t>(u.rows()) != offsets.size()) {
    throw DimensionError("unitary does not match gate location");
  }
  for (std::size_t j = 0; j < states.size(); ++j) {
    detail::apply_local(states.state(j), states.num_qubits(), location, offsets, u);
  }
  if (counters != nullptr) {
    counters->mult_adds += states.size() * states.dim() * offsets.size();
    counters->gate_applications += 1;
  }
}

StateSet apply_gate(const StateSet &states, const Gate &gate, OpCounters *counters) {
  StateSet out = states;
  apply_unitary_inplace(out, gate.location, gate.unitary, counters);
  return out;
}

StateSet apply_gate_adjoint(const StateSet &states, const Gate &gate,
                            OpCounters *counters) {
  StateSet out = states;
  apply_unitary_inplace(out, gate.location, gate.unitary.adjoint(), counters);
  return out;
}

StateSet simulate(const Circuit &circuit, StateSet states, OpCounters *counters) {
  if (states.num_qubits() != circuit.num_qubits()) {
    throw DimensionError("state width does not match circuit");
  }
  std::size_t since_norm = 0;
  for (const Gate &g : circuit.gates()) {
    apply_unitary_inplace(states, g.location, g.unitary, counters);
    if (++since_norm == kRenormalizeEvery) {
      states.normalize();
      since_norm = 0;
    }
  }
  return states;
}

Target::Target(ComplexMatrix unitary) : repr_(std::move(unitary)) {
  const auto &u = std::get<ComplexMatrix>(repr_);
  if (u.rows() != u.cols() || u.rows() < 2) {
    throw DimensionError("target must be a square matrix of dimension >= 2");
  }
  while ((Eigen::Index{1} << num_qubits_) < u.rows()) ++num_qubits_;
  if ((Eigen::Index{1} << num_qubits_) != u.rows()) {
    throw DimensionError("target dimension is not a power of two");
  }
  if (num_qubits_ > kMaxFullQubits) {
    throw CapacityError("dense targets are limited to " +
                        std::to_string(kMaxFullQubits) + " qubits");
  }
  if (!all_finite(u)) throw NumericError("target has non-finite entries");
}

Target::Target(Circuit reference)
    : num_qubits_(reference.num_qubits()), repr_(std::move(reference)) {
  if (num_qubits_ > kMaxSampleQubits) {
    throw CapacityError("targets are limited to " + std::to_string(kMaxSampleQubits) +
                        " qubits");
  }
}

StateSet Target::apply(const StateSet &inputs, OpCounters *counters) const {
  if (inputs.num_qubits() != num_qubits_) {
    throw DimensionError("target acts on " + std::to_string(num_qubits_) +
                         " qubits, inputs have " + std::to_string(inputs.num_qubits()));
  }
  if (const auto *u = std::get_if<ComplexMatrix>(&repr_)) {
    if (counters != nullptr) counters->mult_adds += inputs.size() * dim() * dim();
    return StateSet(num_qubits_, inputs.amplitudes() * u->transpose());
  }
  return simulate(std::get<Circuit>(repr_), inputs, counters);
}

ComplexMatrix Target::dense() const {
  if (const auto *u = std::get_if<ComplexMatrix>(&repr_)) return *u;
  return circuit_unitary(std::get<Circuit>(repr_));
}

SimCaches::SimCaches(const Target &target, const Circuit &circuit, StateSet inputs,
                     OpCounters *counters)
    : SimCaches(target.apply(inputs, counters), circuit, StateSet(inputs), counters) {}

SimCaches::SimCaches(StateSet outputs, const Circuit &circuit, StateSet inputs,
                     OpCounters *counters)
    : outputs_(std::move(outputs)), counters_(counters) {
  check_same_shape(outputs_, inputs, "build_caches");
  prefixes_.resize(circuit.size() + 1);
  prefixes_[0] = std::move(inputs);
  check_shapes(circuit);
  dirty_from_ = 1;
  refresh(circuit);
}

void SimCaches::check_shapes(const Circuit &circuit) const {
  if (circuit.num_qubits() != outputs_.num_qubits()) {
    throw DimensionError("circuit width does not match the cached states");
  }
  if (circuit.size() + 1 != prefixes_.size()) {
    throw DimensionError("circuit gate count changed under the caches");
  }
}

const StateSet &SimCaches::prefix(std::size_t i) const {
  if (i >= prefixes_.size()) throw DimensionError("prefix index out of range");
  if (i >= dirty_from_) {
    throw InternalError("prefix cache entry " + std::to_string(i) + " is stale");
  }
  return prefixes_[i];
}

void SimCaches::invalidate_from(std::size_t i) {
  dirty_from_ = std::min(dirty_from_, std::max<std::size_t>(i, 1));
}

void SimCaches::refresh(const Circuit &circuit) {
  check_shapes(circuit);
  for (std::size_t i = dirty_from_; i < prefixes_.size(); ++i) {
    prefixes_[i] = prefixes_[i - 1];
    const Gate &g = circuit.gate(i - 1);
    apply_unitary_inplace(prefixes_[i], g.location, g.unitary, counters_);
    if (i % kRenormalizeEvery == 0) prefixes_[i].normalize();
  }
  dirty_from_ = prefixes_.size();
}

EnvironmentMatrix environment_sample(const SimCaches &caches, const Circuit &circuit,
                                     std::size_t i, const StateSet &right_acc,
                                     OpCounters *counters) {
  if (i >= circuit.size() || caches.num_prefixes() != circuit.size() + 1) {
    throw DimensionError("gate index does not match the cached circuit");
  }
  const StateSet &before = caches.prefix(i);
  check_same_shape(before, right_acc, "environment_sample");
  const Gate &g = circuit.gate(i);
  check_location(g.location, before.num_qubits());

  const auto offsets = detail::local_offsets(g.location);
  const std::size_t d = offsets.size();
  const std::size_t outer = before.dim() / d;
  ComplexMatrix e = ComplexMatrix::Zero(static_cast<Eigen::Index>(d),
                                        static_cast<Eigen::Index>(d));
  std::array<Complex, kMaxSvdDim> r{};
  std::array<Complex, kMaxSvdDim> s{};
  for (std::size_t j = 0; j < before.size(); ++j) {
    const auto b_state = before.state(j);
    const auto r_state = right_acc.state(j);
    for (std::size_t t = 0; t < outer; ++t) {
      const std::size_t base = detail::spread_index(t, g.location);
      for (std::size_t a = 0; a < d; ++a) {
        r[a] = std::conj(r_state[base + offsets[a]]);
        s[a] = b_state[base + offsets[a]];
      }
      for (std::size_t b = 0; b < d; ++b) {
        for (std::size_t a = 0; a < d; ++a) {
          e(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) += r[a] * s[b];
        }
      }
    }
  }
  if (counters != nullptr) {
    counters->mult_adds += before.size() * before.dim() * d;
    counters->environments += 1;
  }
  return {i, std::move(e)};
}

EnvironmentMatrix environment_full(const ComplexMatrix &target, const Circuit &circuit,
                                   std::size_t i) {
  const int n = circuit.num_qubits();
  if (n > kMaxFullQubits) {
    throw CapacityError("environment_full is limited to " +
                        std::to_string(kMaxFullQubits) + " qubits");
  }
  if (i >= circuit.size()) throw DimensionError("gate index out of range");
  const auto dim = Eigen::Index{1} << n;
  if (target.rows() != dim || target.cols() != dim) {
    throw DimensionError("target dimension does not match circuit");
  }
  Circuit prefix(n);
  Circuit suffix(n);
  for (std::size_t j = 0; j < circuit.size(); ++j) {
    if (j < i) prefix.append(circuit.gate(j));
    if (j > i) suffix.append(circuit.gate(j));
  }
  // Tr(U^dagger S (v x I) P) = Tr((v x I) M) with M = P U^dagger S.
  const ComplexMatrix m =
      circuit_unitary(prefix) * target.adjoint() * circuit_unitary(suffix);

  const Gate &g = circuit.gate(i);
  const auto offsets = detail::local_offsets(g.location);
  const std::size_t d = offsets.size();
  const std::size_t outer = static_cast<std::size_t>(dim) / d;
  ComplexMatrix e = ComplexMatrix::Zero(static_cast<Eigen::Index>(d),
                                        static_cast<Eigen::Index>(d));
  for (std::size_t t = 0; t < outer; ++t) {
    const std::size_t base = detail::spread_index(t, g.location);
    for (std::size_t b = 0; b < d; ++b) {
      for (std::size_t a = 0; a < d; ++a) {
        e(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) +=
            m(static_cast<Eigen::Index>(base + offsets[b]),
              static_cast<Eigen::Index>(base + offsets[a]));
      }
    }
  }
  return {i, std::move(e)};
}

Complex overlap_sum(const StateSet &left, const StateSet &right) {
  check_same_shape(left, right, "overlap_sum");
  return (left.amplitudes().conjugate().cwiseProduct(right.amplitudes())).sum();
}

double mean_squared_distance(const StateSet &a, const StateSet &b) {
  check_same_shape(a, b, "mean_squared_distance");
  return (a.amplitudes() - b.amplitudes()).squaredNorm() / static_cast<double>(a.size());
}

double sample_cost(const SimCaches &caches, const Circuit &circuit) {
  if (caches.num_prefixes() != circuit.size() + 1) {
    throw DimensionError("caches were built for a different circuit");
  }
  return mean_squared_distance(caches.outputs(), caches.prefix(circuit.size()));
}

double frobenius_cost(const ComplexMatrix &target, const ComplexMatrix &candidate) {
  if (target.rows() != candidate.rows() || target.cols() != candidate.cols()) {
    throw DimensionError("frobenius_cost: dimension mismatch");
  }
  const double re_trace = (target.conjugate().cwiseProduct(candidate)).sum().real();
  return std::max(0.0, 1.0 - re_trace / static_cast<double>(target.rows()));
}

double frobenius_cost(const ComplexMatrix &target, const Circuit &circuit) {
  if (circuit.num_qubits() > kMaxFullQubits) {
    throw CapacityError("frobenius_cost is limited to " +
                        std::to_string(kMaxFullQubits) + " qubits");
  }
  return frobenius_cost(target, circuit_unitary(circuit));
}

}  // namespace qinst
