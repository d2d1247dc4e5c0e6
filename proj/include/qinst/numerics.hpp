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

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>

namespace qinst {

using Complex = std::complex<double>;
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealVector = Eigen::VectorXd;

// Every random draw in the library goes through an explicitly passed Rng.
using Rng = std::mt19937_64;

// Derives an independent stream seed (splitmix64 finalizer over seed+stream).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

// Largest gate dimension handled by svd (6-qubit gates).
inline constexpr std::size_t kMaxSvdDim = 64;

struct SvdResult {
  ComplexMatrix x;
  RealVector d;  // non-increasing
  ComplexMatrix y;
};

// a = x * diag(d) * y^dagger for square a with dim <= kMaxSvdDim.
SvdResult svd(const ComplexMatrix &a);

// Max entrywise |u^dagger u - I|; non-square input gives +inf.
double unitarity_error(const ComplexMatrix &u);

bool all_finite(const ComplexMatrix &a);

// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
// of R's diagonal pushed into Q.
ComplexMatrix haar_random_unitary(std::size_t dim, Rng &rng);

/// A set of m pure states on n qubits.
///
/// Amplitudes are stored state-major: row j holds the 2^n amplitudes of
/// state j, indexed little-endian (qubit 0 is the least significant bit of
/// the amplitude index). Viewed as a tensor this is the (m, 2, ..., 2) array
/// with the last axis belonging to qubit 0.
class StateSet {
 public:
  StateSet() = default;
  StateSet(int num_qubits, ComplexMatrix amplitudes);

  static StateSet zeros(int num_qubits, std::size_t count);

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return static_cast<std::size_t>(amps_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.cols()); }

  const ComplexMatrix &amplitudes() const { return amps_; }
  ComplexMatrix &amplitudes() { return amps_; }

  std::span<const Complex> state(std::size_t j) const {
    return {amps_.data() + j * dim(), dim()};
  }
  std::span<Complex> state(std::size_t j) {
    return {amps_.data() + j * dim(), dim()};
  }

  // G[i][j] = <psi_i|psi_j>.
  ComplexMatrix gram() const;

  // Rescales every state to unit norm.
  void normalize();

 private:
  int num_qubits_ = 0;
  ComplexMatrix amps_;
};

// m mutually orthonormal Haar-random states (columns of a Haar unitary).
StateSet haar_random_states(int num_qubits, std::size_t count, Rng &rng);

// m distinct computational basis states, drawn uniformly without
// replacement, in draw order.
StateSet basis_states(int num_qubits, std::size_t count, Rng &rng);

// All 2^n computational basis states in index order.
StateSet full_basis(int num_qubits);

// Unitary file format: {"n": int, "re": [...], "im": [...]} with 4^n
// row-major entries each.
ComplexMatrix parse_unitary_json(const std::string &text);
std::string unitary_to_json(const ComplexMatrix &u);

}  // namespace qinst
