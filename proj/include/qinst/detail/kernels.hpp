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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "qinst/numerics.hpp"

namespace qinst::detail {

// Index offsets of the 2^k local basis states of a gate on `location`
// (sorted). Local bit p maps to qubit location[p].
inline std::vector<std::size_t> local_offsets(std::span<const int> location) {
  const std::size_t d = std::size_t{1} << location.size();
  std::vector<std::size_t> off(d, 0);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t p = 0; p < location.size(); ++p) {
      if ((a >> p) & 1U) off[a] |= std::size_t{1} << location[p];
    }
  }
  return off;
}

// t-th amplitude index whose bits on `location` are all zero.
inline std::size_t spread_index(std::size_t t, std::span<const int> location) {
  for (int q : location) {
    const std::size_t low = t & ((std::size_t{1} << q) - 1);
    t = ((t >> q) << (q + 1)) | low;
  }
  return t;
}

// psi <- (u on location) psi, for a single state of `num_qubits` qubits.
inline void apply_local(std::span<Complex> psi, int num_qubits,
                        std::span<const int> location,
                        std::span<const std::size_t> offsets,
                        const ComplexMatrix &u) {
  const std::size_t d = offsets.size();
  const std::size_t outer = std::size_t{1} << (num_qubits - location.size());
  std::array<Complex, kMaxSvdDim> in{};
  for (std::size_t t = 0; t < outer; ++t) {
    const std::size_t base = spread_index(t, location);
    for (std::size_t a = 0; a < d; ++a) in[a] = psi[base + offsets[a]];
    for (std::size_t b = 0; b < d; ++b) {
      Complex acc = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        acc += u(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) * in[a];
      }
      psi[base + offsets[b]] = acc;
    }
  }
}

}  // namespace qinst::detail
