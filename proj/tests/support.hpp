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

#include <string>

#include "qinst/circuit.hpp"
#include "qinst/numerics.hpp"

namespace qinst::testing {

// u3 with uniformly random angles.
Gate random_u3(int qubit, Rng &rng);

// `gates` gates; each is a cx on a random ordered pair with probability
// cx_fraction (n >= 2), else a random u3.
Circuit random_circuit(int n, std::size_t gates, Rng &rng, double cx_fraction = 0.3);

// Layer of u3 on every qubit followed by cx on alternating neighbour
// pairs, repeated `layers` times.
Circuit brickwork(int n, std::size_t layers, Rng &rng);

// Entrywise embedding of a gate into n qubits: <r|G|c> = u[local(r),
// local(c)] when r and c agree off the gate's qubits, else 0.
ComplexMatrix embed_oracle(const ComplexMatrix &u, const std::vector<int> &loc, int n);

// Dense unitary as the product of embed_oracle matrices.
ComplexMatrix unitary_oracle(const Circuit &c);

// `blocks` repetitions of (u3 a, u3 b, cx a b), with (a, b) walking the
// neighbour pairs of a brickwork pattern. Every block costs the same, so
// gate work scales only with the register width.
Circuit brickwork_blocks(int n, std::size_t blocks, Rng &rng);

// Random complex matrix with N(0,1) entries.
ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng &rng);

// Max |a - b| entrywise.
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);

// min over phases of max |a - e^{i p} b|.
double diff_up_to_phase(const ComplexMatrix &a, const ComplexMatrix &b);

// Temporary directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::string &path() const { return path_; }
  std::string file(const std::string &name) const { return path_ + "/" + name; }
  void write(const std::string &name, const std::string &text) const;

 private:
  std::string path_;
};

std::string read_text(const std::string &path);

}  // namespace qinst::testing
