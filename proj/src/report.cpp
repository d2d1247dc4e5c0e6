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

#include "qinst/report.hpp"

#include "qinst/errors.hpp"

namespace qinst {

using Json = nlohmann::ordered_json;

InstantiationSummary summarize(const InstantiationResult &result) {
  InstantiationSummary s;
  s.num_qubits = result.circuit.num_qubits();
  s.gates = result.circuit.size();
  s.variable_gates = result.circuit.num_variable();
  s.c_train = result.c_train;
  s.c_val = result.c_val;
  s.termination = result.termination;
  s.iterations = result.iterations;
  s.restarts = result.restarts;
  s.final_m = result.final_m;
  s.states_drawn = result.states_drawn;
  s.start_index = result.start_index;
  return s;
}

Json config_to_json(const OptimizerConfig &c) {
  // threads is reported under "execution".
  return Json{{"dist_tol", c.dist_tol},
              {"diff_tol_r", c.diff_tol_r},
              {"plateau_window", c.plateau_window},
              {"beta", c.beta},
              {"num_training_states", c.num_training_states},
              {"overtrain_ratio", c.overtrain_ratio},
              {"min_iter", c.min_iter},
              {"max_iter", c.max_iter},
              {"multistarts", c.multistarts},
              {"seed", c.seed},
              {"distribution", to_string(c.distribution)},
              {"backend", to_string(c.backend)},
              {"multistart_batch", c.multistart_batch},
              {"max_training_states", c.max_training_states},
              {"op_budget", c.op_budget},
              {"warm_start", c.warm_start}};
}

OptimizerConfig config_from_json(const Json &j) {
  OptimizerConfig c;
  c.dist_tol = j.at("dist_tol").get<double>();
  c.diff_tol_r = j.at("diff_tol_r").get<double>();
  c.plateau_window = j.at("plateau_window").get<std::size_t>();
  c.beta = j.at("beta").get<double>();
  c.num_training_states = j.at("num_training_states").get<std::size_t>();
  c.overtrain_ratio = j.at("overtrain_ratio").get<double>();
  c.min_iter = j.at("min_iter").get<std::size_t>();
  c.max_iter = j.at("max_iter").get<std::size_t>();
  c.multistarts = j.at("multistarts").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.distribution = parse_distribution(j.at("distribution").get<std::string>());
  c.backend = parse_backend(j.at("backend").get<std::string>());
  c.multistart_batch = j.at("multistart_batch").get<std::size_t>();
  c.max_training_states = j.at("max_training_states").get<std::size_t>();
  c.op_budget = j.at("op_budget").get<std::uint64_t>();
  c.warm_start = j.at("warm_start").get<bool>();
  return c;
}

namespace {

Json counters_to_json(const OpCounters &c) {
  return Json{{"mult_adds", c.mult_adds},
              {"gate_applications", c.gate_applications},
              {"environments", c.environments},
              {"svds", c.svds}};
}

OpCounters counters_from_json(const Json &j) {
  OpCounters c;
  c.mult_adds = j.at("mult_adds").get<std::uint64_t>();
  c.gate_applications = j.at("gate_applications").get<std::uint64_t>();
  c.environments = j.at("environments").get<std::uint64_t>();
  c.svds = j.at("svds").get<std::uint64_t>();
  return c;
}

Json optional_number(const std::optional<double> &v) {
  return v ? Json(*v) : Json(nullptr);
}

std::optional<double> optional_number(const Json &j, const char *key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

Json summary_to_json(const InstantiationSummary &s) {
  return Json{{"num_qubits", s.num_qubits},
              {"gates", s.gates},
              {"variable_gates", s.variable_gates},
              {"c_train", s.c_train},
              {"c_val", s.c_val},
              {"termination", to_string(s.termination)},
              {"iterations", s.iterations},
              {"restarts", s.restarts},
              {"final_m", s.final_m},
              {"states_drawn", s.states_drawn},
              {"start_index", s.start_index},
              {"frobenius_distance", optional_number(s.frobenius_distance)}};
}

InstantiationSummary summary_from_json(const Json &j) {
  InstantiationSummary s;
  s.num_qubits = j.at("num_qubits").get<int>();
  s.gates = j.at("gates").get<std::size_t>();
  s.variable_gates = j.at("variable_gates").get<std::size_t>();
  s.c_train = j.at("c_train").get<double>();
  s.c_val = j.at("c_val").get<double>();
  s.termination = parse_termination(j.at("termination").get<std::string>());
  s.iterations = j.at("iterations").get<std::size_t>();
  s.restarts = j.at("restarts").get<std::size_t>();
  s.final_m = j.at("final_m").get<std::size_t>();
  s.states_drawn = j.at("states_drawn").get<std::size_t>();
  s.start_index = j.at("start_index").get<std::size_t>();
  s.frobenius_distance = optional_number(j, "frobenius_distance");
  return s;
}

Json coverage_to_json(const CoverageReport &c) {
  Json bins = Json::array();
  for (const CoverageBin &b : c.bins) {
    bins.push_back(Json{{"size", b.size},
                        {"partitions", b.partitions},
                        {"gates", b.gates},
                        {"fraction", b.fraction}});
  }
  return Json{{"total_gates", c.total_gates}, {"bins", bins}};
}

CoverageReport coverage_from_json(const Json &j) {
  CoverageReport c;
  c.total_gates = j.at("total_gates").get<std::size_t>();
  for (const Json &b : j.at("bins")) {
    c.bins.push_back(CoverageBin{b.at("size").get<std::size_t>(),
                                 b.at("partitions").get<std::size_t>(),
                                 b.at("gates").get<std::size_t>(),
                                 b.at("fraction").get<double>()});
  }
  return c;
}

// runtime_s is moved to the execution object by the caller.
Json resynth_to_json(const ResynthReport &r) {
  Json rows = Json::array();
  for (const PartitionRow &row : r.rows) {
    rows.push_back(Json{{"index", row.index},
                        {"qubits", row.qubits},
                        {"gates_before", row.gates_before},
                        {"gates_after", row.gates_after},
                        {"deletions", row.deletions},
                        {"distance", row.distance},
                        {"skipped", row.skipped},
                        {"message", row.message}});
  }
  return Json{{"k", r.k},
              {"u3_before", r.u3_before},
              {"u3_after", r.u3_after},
              {"cnot_before", r.cnot_before},
              {"cnot_after", r.cnot_after},
              {"partitions", r.partitions},
              {"partitions_modified", r.partitions_modified},
              {"deletions", r.deletions},
              {"final_distance", optional_number(r.final_distance)},
              {"coverage", coverage_to_json(r.coverage)},
              {"rows", rows},
              {"warnings", r.warnings}};
}

ResynthReport resynth_from_json(const Json &j) {
  ResynthReport r;
  r.k = j.at("k").get<int>();
  r.u3_before = j.at("u3_before").get<std::size_t>();
  r.u3_after = j.at("u3_after").get<std::size_t>();
  r.cnot_before = j.at("cnot_before").get<std::size_t>();
  r.cnot_after = j.at("cnot_after").get<std::size_t>();
  r.partitions = j.at("partitions").get<std::size_t>();
  r.partitions_modified = j.at("partitions_modified").get<std::size_t>();
  r.deletions = j.at("deletions").get<std::size_t>();
  r.final_distance = optional_number(j, "final_distance");
  r.coverage = coverage_from_json(j.at("coverage"));
  for (const Json &row : j.at("rows")) {
    PartitionRow p;
    p.index = row.at("index").get<std::size_t>();
    p.qubits = row.at("qubits").get<std::vector<int>>();
    p.gates_before = row.at("gates_before").get<std::size_t>();
    p.gates_after = row.at("gates_after").get<std::size_t>();
    p.deletions = row.at("deletions").get<std::size_t>();
    p.distance = row.at("distance").get<double>();
    p.skipped = row.at("skipped").get<bool>();
    p.message = row.at("message").get<std::string>();
    r.rows.push_back(std::move(p));
  }
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

}  // namespace

Json report_to_json(const RunReport &report) {
  Json j{{"command", report.command},
         {"tool_version", report.tool_version},
         {"seed", report.seed},
         {"inputs", report.inputs},
         {"config", config_to_json(report.config)}};
  if (report.instantiation) j["instantiation"] = summary_to_json(*report.instantiation);
  if (report.resynth) j["resynth"] = resynth_to_json(*report.resynth);
  j["counters"] = counters_to_json(report.counters);
  j["execution"] = Json{{"wall_s", report.execution.wall_s},
                        {"threads", report.execution.threads},
                        {"resynth_runtime_s", optional_number(report.execution.resynth_runtime_s)}};
  return j;
}

RunReport report_from_json(const Json &j) {
  try {
    RunReport r;
    r.command = j.at("command").get<std::string>();
    r.tool_version = j.at("tool_version").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.inputs = j.at("inputs").get<std::vector<std::string>>();
    r.config = config_from_json(j.at("config"));
    if (j.contains("instantiation")) r.instantiation = summary_from_json(j.at("instantiation"));
    if (j.contains("resynth")) r.resynth = resynth_from_json(j.at("resynth"));
    r.counters = counters_from_json(j.at("counters"));
    const Json &e = j.at("execution");
    r.execution.wall_s = e.at("wall_s").get<double>();
    r.execution.threads = e.at("threads").get<std::size_t>();
    r.execution.resynth_runtime_s = optional_number(e, "resynth_runtime_s");
    r.config.threads = r.execution.threads;
    if (r.resynth && r.execution.resynth_runtime_s) {
      r.resynth->runtime_s = *r.execution.resynth_runtime_s;
    }
    if (r.resynth) r.resynth->counters = r.counters;
    return r;
  } catch (const nlohmann::json::exception &e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

std::string dump_report(const RunReport &report) { return report_to_json(report).dump(2) + "\n"; }

RunReport parse_report(const std::string &text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
  return report_from_json(j);
}

std::string deterministic_section(const std::string &report_text) {
  Json j = Json::parse(report_text);
  j.erase("execution");
  return j.dump(2);
}

}  // namespace qinst
