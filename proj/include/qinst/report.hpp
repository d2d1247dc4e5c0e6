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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qinst/optimizer.hpp"
#include "qinst/resynth.hpp"
#include "qinst/simulator.hpp"

namespace qinst {

inline constexpr const char *kToolVersion = "0.3.0";

struct InstantiationSummary {
  int num_qubits = 0;
  std::size_t gates = 0;
  std::size_t variable_gates = 0;
  double c_train = 0.0;
  double c_val = 0.0;
  Termination termination = Termination::kMaxIter;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  std::size_t final_m = 0;
  std::size_t states_drawn = 0;
  std::size_t start_index = 0;
  // Normalized Frobenius distance of the result, when the target is small
  // enough to form densely.
  std::optional<double> frobenius_distance;
};

InstantiationSummary summarize(const InstantiationResult &result);

// Everything that legitimately varies between identical runs lives here.
struct ExecutionInfo {
  double wall_s = 0.0;
  std::size_t threads = 0;
  std::optional<double> resynth_runtime_s;
};

struct RunReport {
  std::string command;
  std::string tool_version = kToolVersion;
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  OptimizerConfig config;
  std::optional<InstantiationSummary> instantiation;
  std::optional<ResynthReport> resynth;
  OpCounters counters;
  ExecutionInfo execution;
};

nlohmann::ordered_json config_to_json(const OptimizerConfig &config);
OptimizerConfig config_from_json(const nlohmann::ordered_json &j);

nlohmann::ordered_json report_to_json(const RunReport &report);
RunReport report_from_json(const nlohmann::ordered_json &j);

// Pretty-printed JSON with a trailing newline.
std::string dump_report(const RunReport &report);
RunReport parse_report(const std::string &text);

// The report with the "execution" object removed, for run-to-run comparison.
std::string deterministic_section(const std::string &report_text);

}  // namespace qinst
