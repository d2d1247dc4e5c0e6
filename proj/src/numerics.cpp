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

#include "qinst/numerics.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "qinst/errors.hpp"

namespace qinst {

namespace {

constexpr int kMaxStateQubits = 20;

void check_state_request(int num_qubits, std::size_t count) {
  if (num_qubits < 0 || num_qubits > kMaxStateQubits) {
    throw CapacityError("state sets are limited to " +
                        std::to_string(kMaxStateQubits) + " qubits");
  }
  const std::size_t dim = std::size_t{1} << num_qubits;
  if (count == 0) throw CapacityError("state count must be at least 1");
  if (count > dim) {
    throw CapacityError("cannot draw " + std::to_string(count) +
                        " orthogonal states in dimension " +
                        std::to_string(dim));
  }
}

ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(2.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re * scale, im * scale);
    }
  }
  return g;
}

// Orthonormal columns distributed as the first cols columns of a Haar
// unitary.
ComplexMatrix haar_columns(std::size_t rows, std::size_t cols, Rng &rng) {
  using ColMajor = Eigen::MatrixXcd;
  ColMajor g = gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<ColMajor> qr(g);
  ColMajor q = qr.householderQ() * ColMajor::Identity(g.rows(), g.cols());
  const ColMajor &r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex diag = r(j, j);
    const double mag = std::abs(diag);
    const Complex phase = mag > 0.0 ? diag / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

}  // namespace

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool all_finite(const ComplexMatrix &a) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Complex v = a.data()[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

SvdResult svd(const ComplexMatrix &a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("svd expects a square matrix, got " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
  if (static_cast<std::size_t>(a.rows()) > kMaxSvdDim) {
    throw DimensionError("svd is limited to " + std::to_string(kMaxSvdDim) +
                         "x" + std::to_string(kMaxSvdDim) + " matrices");
  }
  if (!all_finite(a)) throw NumericError("svd input has non-finite entries");

  Eigen::JacobiSVD<ComplexMatrix> jacobi(a,
                                         Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdResult out{jacobi.matrixU(), jacobi.singularValues(), jacobi.matrixV()};
  if (!all_finite(out.x) || !all_finite(out.y)) {
    throw NumericError("svd produced non-finite factors");
  }
  return out;
}

double unitarity_error(const ComplexMatrix &u) {
  if (u.rows() != u.cols() || u.rows() == 0) {
    return std::numeric_limits<double>::infinity();
  }
  const ComplexMatrix diff =
      u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
  return diff.cwiseAbs().maxCoeff();
}

ComplexMatrix haar_random_unitary(std::size_t dim, Rng &rng) {
  if (dim == 0) throw DimensionError("unitary dimension must be at least 1");
  return haar_columns(dim, dim, rng);
}

StateSet::StateSet(int num_qubits, ComplexMatrix amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  if (num_qubits < 0 || num_qubits > kMaxStateQubits) {
    throw CapacityError("state sets are limited to " +
                        std::to_string(kMaxStateQubits) + " qubits");
  }
  if (static_cast<std::size_t>(amps_.cols()) != (std::size_t{1} << num_qubits)) {
    throw DimensionError("state width " + std::to_string(amps_.cols()) +
                         " does not match " + std::to_string(num_qubits) +
                         " qubits");
  }
}

StateSet StateSet::zeros(int num_qubits, std::size_t count) {
  return StateSet(num_qubits,
                  ComplexMatrix::Zero(static_cast<Eigen::Index>(count),
                                      Eigen::Index{1} << num_qubits));
}

ComplexMatrix StateSet::gram() const { return amps_.conjugate() * amps_.transpose(); }

void StateSet::normalize() {
  for (Eigen::Index j = 0; j < amps_.rows(); ++j) {
    const double norm = amps_.row(j).norm();
    if (norm > 0.0) amps_.row(j) /= norm;
  }
}

StateSet haar_random_states(int num_qubits, std::size_t count, Rng &rng) {
  check_state_request(num_qubits, count);
  const std::size_t dim = std::size_t{1} << num_qubits;
  return StateSet(num_qubits, haar_columns(dim, count, rng).transpose());
}

StateSet basis_states(int num_qubits, std::size_t count, Rng &rng) {
  check_state_request(num_qubits, count);
  const std::size_t dim = std::size_t{1} << num_qubits;
  // Sparse partial Fisher-Yates: O(count) memory for any dimension.
  std::unordered_map<std::size_t, std::size_t> swapped;
  auto at = [&](std::size_t i) {
    auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  StateSet out = StateSet::zeros(num_qubits, count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, dim - 1);
    const std::size_t j = pick(rng);
    const std::size_t vi = at(i);
    const std::size_t vj = at(j);
    swapped[i] = vj;
    swapped[j] = vi;
    out.amplitudes()(static_cast<Eigen::Index>(i),
                     static_cast<Eigen::Index>(vj)) = 1.0;
  }
  return out;
}

StateSet full_basis(int num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  return StateSet(num_qubits, ComplexMatrix::Identity(dim, dim));
}

ComplexMatrix parse_unitary_json(const std::string &text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(0, std::string("unitary JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("re") ||
      !doc.contains("im")) {
    throw ParseError(0, "unitary JSON needs keys n, re, im");
  }
  const int n = doc.at("n").get<int>();
  if (n < 0 || n > 14) throw CapacityError("unitary JSON: n out of range");
  const std::size_t dim = std::size_t{1} << n;
  const auto re = doc.at("re").get<std::vector<double>>();
  const auto im = doc.at("im").get<std::vector<double>>();
  if (re.size() != dim * dim || im.size() != dim * dim) {
    throw DimensionError("unitary JSON: expected " + std::to_string(dim * dim) +
                         " entries in re and im");
  }
  ComplexMatrix u(dim, dim);
  for (std::size_t k = 0; k < dim * dim; ++k) u.data()[k] = Complex(re[k], im[k]);
  if (!all_finite(u)) throw NumericError("unitary JSON has non-finite entries");
  return u;
}

std::string unitary_to_json(const ComplexMatrix &u) {
  if (u.rows() != u.cols()) throw DimensionError("unitary must be square");
  int n = 0;
  while ((Eigen::Index{1} << n) < u.rows()) ++n;
  if ((Eigen::Index{1} << n) != u.rows()) {
    throw DimensionError("unitary dimension is not a power of two");
  }
  std::vector<double> re(static_cast<std::size_t>(u.size()));
  std::vector<double> im(re.size());
  for (std::size_t k = 0; k < re.size(); ++k) {
    re[k] = u.data()[k].real();
    im[k] = u.data()[k].imag();
  }
  nlohmann::json doc{{"n", n}, {"re", re}, {"im", im}};
  return doc.dump();
}

}  // namespace qinst
