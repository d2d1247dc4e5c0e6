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

#include <ostream>
#include <string>
#include <vector>

#include "qinst/optimizer.hpp"

namespace qinst {

inline constexpr int kExitConverged = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;  // plateau or max_iter
inline constexpr int kExitStatesExhausted = 3;

int exit_code(Termination termination);

/// Entry point of the qinst tool. `args` excludes the program name.
///
///   instantiate TARGET TEMPLATE   fit TEMPLATE (QASM) to TARGET (unitary
///                                 JSON, or QASM simulated on demand)
///   resynth INPUT --k K           partitioned gate deletion
///   bench DIR --sizes ...         success/counter dataset over sampled
///                                 partitions of the QASM files in DIR
///   partition-stats INPUT         coverage histogram per --k-list entry
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace qinst
