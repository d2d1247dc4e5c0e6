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
#include <string_view>

#include "qinst/circuit.hpp"

namespace qinst {

/// Parses the OpenQASM 2.0 subset used for benchmark partitions:
///
///   OPENQASM 2.0;
///   include "qelib1.inc";
///   qreg q[N];
///   u3(<expr>,<expr>,<expr>) q[i];
///   cx q[i],q[j];
///
/// Expressions are float literals combined with pi, unary minus, * and /
/// (+, - and parentheses are accepted as well). u3 gates become variable
/// gates, cx gates fixed CNOTs. Anything else is a ParseError carrying the
/// offending line number.
Circuit parse_qasm(std::string_view text);

/// Writes a circuit of single-qubit gates and fixed CNOTs. Single-qubit
/// unitaries are re-expressed as u3 through zyz_reparameterize; the dropped
/// global phase is kept in a trailing comment.
std::string write_qasm(const Circuit &circuit);

}  // namespace qinst
