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

#include "support.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qinst::testing {

Gate random_u3(int qubit, Rng &rng) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  return u3_gate(qubit, angle(rng), angle(rng), angle(rng));
}

Circuit random_circuit(int n, std::size_t gates, Rng &rng, double cx_fraction) {
  Circuit c(n);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> qubit(0, n - 1);
  for (std::size_t g = 0; g < gates; ++g) {
    if (n >= 2 && coin(rng) < cx_fraction) {
      const int a = qubit(rng);
      int b = qubit(rng);
      while (b == a) b = qubit(rng);
      c.append(cx_gate(a, b));
    } else {
      c.append(random_u3(qubit(rng), rng));
    }
  }
  return c;
}

Circuit brickwork(int n, std::size_t layers, Rng &rng) {
  Circuit c(n);
  for (std::size_t l = 0; l < layers; ++l) {
    for (int q = 0; q < n; ++q) c.append(random_u3(q, rng));
    for (int q = static_cast<int>(l % 2); q + 1 < n; q += 2) c.append(cx_gate(q, q + 1));
  }
  return c;
}

Circuit brickwork_blocks(int n, std::size_t blocks, Rng &rng) {
  std::vector<std::pair<int, int>> pairs;
  for (int q = 0; q + 1 < n; q += 2) pairs.emplace_back(q, q + 1);
  for (int q = 1; q + 1 < n; q += 2) pairs.emplace_back(q, q + 1);
  Circuit c(n);
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto [x, y] = pairs[b % pairs.size()];
    c.append(random_u3(x, rng));
    c.append(random_u3(y, rng));
    c.append(cx_gate(x, y));
  }
  return c;
}

ComplexMatrix embed_oracle(const ComplexMatrix &u, const std::vector<int> &loc, int n) {
  const std::size_t dim = std::size_t{1} << n;
  std::size_t mask = 0;
  for (int q : loc) mask |= std::size_t{1} << q;
  auto local = [&](std::size_t idx) {
    std::size_t l = 0;
    for (std::size_t p = 0; p < loc.size(); ++p) l |= ((idx >> loc[p]) & 1U) << p;
    return static_cast<Eigen::Index>(l);
  };
  ComplexMatrix full = ComplexMatrix::Zero(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if ((r & ~mask) != (c & ~mask)) continue;
      full(r, c) = u(local(r), local(c));
    }
  }
  return full;
}

ComplexMatrix unitary_oracle(const Circuit &c) {
  const std::size_t dim = std::size_t{1} << c.num_qubits();
  ComplexMatrix out = ComplexMatrix::Identity(dim, dim);
  for (const Gate &g : c.gates()) out = embed_oracle(g.unitary, g.location, c.num_qubits()) * out;
  return out;
}

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng &rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return m;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double diff_up_to_phase(const ComplexMatrix &a, const ComplexMatrix &b) {
  // Align on the largest entry of b.
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  const Complex ratio = a(r, c) / b(r, c);
  const Complex phase = ratio / std::abs(ratio);
  return max_abs_diff(a, phase * b);
}

TempDir::TempDir() {
  std::string pattern = (std::filesystem::temp_directory_path() / "qinst-test-XXXXXX").string();
  if (mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void TempDir::write(const std::string &name, const std::string &text) const {
  std::ofstream out(file(name));
  out << text;
}

std::string read_text(const std::string &path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qinst::testing
