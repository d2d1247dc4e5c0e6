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

#include "qinst/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "qinst/errors.hpp"
#include "qinst/qasm.hpp"
#include "qinst/report.hpp"
#include "qinst/resynth.hpp"
#include "qinst/simulator.hpp"

namespace qinst {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

int exit_code(Termination termination) {
  switch (termination) {
    case Termination::kConverged:
      return kExitConverged;
    case Termination::kPlateau:
    case Termination::kMaxIter:
      return kExitNotConverged;
    case Termination::kStatesExhausted:
      return kExitStatesExhausted;
  }
  return kExitError;
}

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

void emit(const std::string &path, const std::string &text, std::ostream &out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Optimizer flags; a flag given on the command line wins over --config.
struct ConfigFlags {
  std::string config_file;
  double dist_tol = 0, diff_tol_r = 0, beta = 0, overtrain_ratio = 0;
  std::size_t plateau_window = 0, train_states = 0, min_iter = 0, max_iter = 0;
  std::size_t multistarts = 0, multistart_batch = 0, threads = 0, max_train_states = 0;
  std::uint64_t seed = 0;
  std::string backend, state_dist;

  void add_to(CLI::App &app) {
    app.add_option("--config", config_file, "key = value optimizer config file")
        ->check(CLI::ExistingFile);
    app.add_option("--dist-tol", dist_tol, "convergence threshold on the cost");
    app.add_option("--diff-tol-r", diff_tol_r, "relative improvement plateau threshold");
    app.add_option("--plateau-window", plateau_window, "sweeps below diff-tol-r before stopping");
    app.add_option("--beta", beta, "update regularization in [0, 1]");
    app.add_option("--train-states", train_states, "initial number of training states");
    app.add_option("--overtrain-ratio", overtrain_ratio, "generalization error that doubles M");
    app.add_option("--min-iter", min_iter, "sweeps before any stopping check");
    app.add_option("--max-iter", max_iter, "sweep cap per start");
    app.add_option("--multistarts", multistarts, "independent random starts");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--backend", backend, "sample | full")->check(CLI::IsMember({"sample", "full"}));
    app.add_option("--state-dist", state_dist, "haar | basis")->check(CLI::IsMember({"haar", "basis"}));
    app.add_option("--multistart-batch", multistart_batch, "starts scheduled per batch");
    app.add_option("--threads", threads, "worker threads (0 = hardware)");
    app.add_option("--max-train-states", max_train_states, "cap on M (0 = 2^n)");
  }

  OptimizerConfig resolve(const CLI::App &app) const {
    OptimizerConfig c;
    if (!config_file.empty()) c = parse_config(read_file(config_file));
    auto given = [&](const char *name) { return app.count(name) > 0; };
    if (given("--dist-tol")) c.dist_tol = dist_tol;
    if (given("--diff-tol-r")) c.diff_tol_r = diff_tol_r;
    if (given("--plateau-window")) c.plateau_window = plateau_window;
    if (given("--beta")) c.beta = beta;
    if (given("--train-states")) c.num_training_states = train_states;
    if (given("--overtrain-ratio")) c.overtrain_ratio = overtrain_ratio;
    if (given("--min-iter")) c.min_iter = min_iter;
    if (given("--max-iter")) c.max_iter = max_iter;
    if (given("--multistarts")) c.multistarts = multistarts;
    if (given("--seed")) c.seed = seed;
    if (given("--backend")) c.backend = parse_backend(backend);
    if (given("--state-dist")) c.distribution = parse_distribution(state_dist);
    if (given("--multistart-batch")) c.multistart_batch = multistart_batch;
    if (given("--threads")) c.threads = threads;
    if (given("--max-train-states")) c.max_training_states = max_train_states;
    c.validate();
    return c;
  }
};

std::size_t effective_threads(const OptimizerConfig &c) {
  return c.threads != 0 ? c.threads : std::max(1U, std::thread::hardware_concurrency());
}

bool ends_with(const std::string &s, const std::string &suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct InstantiateArgs {
  std::string target, templ, out, qasm_out;
};

int cmd_instantiate(const InstantiateArgs &a, const OptimizerConfig &config, std::ostream &out) {
  const auto t0 = Clock::now();
  const Circuit templ = parse_qasm(read_file(a.templ));

  std::optional<ComplexMatrix> dense;
  std::optional<Target> target;
  if (ends_with(a.target, ".qasm")) {
    Circuit reference = parse_qasm(read_file(a.target));
    if (reference.num_qubits() <= kMaxVerifyQubits) dense = circuit_unitary(reference);
    target.emplace(std::move(reference));
  } else {
    dense = parse_unitary_json(read_file(a.target));
    target.emplace(*dense);
  }
  if (target->num_qubits() != templ.num_qubits()) {
    throw DimensionError("target acts on " + std::to_string(target->num_qubits()) +
                         " qubits, template on " + std::to_string(templ.num_qubits()));
  }

  const InstantiationResult result = multistart_instantiate(*target, templ, config);

  RunReport report;
  report.command = "instantiate";
  report.seed = config.seed;
  report.inputs = {a.target, a.templ};
  report.config = config;
  report.instantiation = summarize(result);
  if (dense) report.instantiation->frobenius_distance = frobenius_cost(*dense, result.circuit);
  report.counters = result.counters;
  report.execution.threads = effective_threads(config);
  if (!a.qasm_out.empty()) write_file(a.qasm_out, write_qasm(result.circuit));
  report.execution.wall_s = seconds_since(t0);
  emit(a.out, dump_report(report), out);
  return exit_code(result.termination);
}

struct ResynthArgs {
  std::string input, out, qasm_out;
  int k = 3;
  bool repeat = false;
};

int cmd_resynth(const ResynthArgs &a, const OptimizerConfig &config, bool max_iter_given,
                std::ostream &out) {
  const auto t0 = Clock::now();
  const Circuit circuit = parse_qasm(read_file(a.input));
  ResynthOptions options;
  options.k = a.k;
  options.repeat_until_fixpoint = a.repeat;
  if (max_iter_given) options.max_iter = config.max_iter;

  const ResynthOutput result = resynth_flow(circuit, config, options);

  RunReport report;
  report.command = "resynth";
  report.seed = config.seed;
  report.inputs = {a.input};
  report.config = config;
  report.resynth = result.report;
  report.counters = result.report.counters;
  report.execution.threads = effective_threads(config);
  report.execution.resynth_runtime_s = result.report.runtime_s;
  if (!a.qasm_out.empty()) write_file(a.qasm_out, write_qasm(result.circuit));
  report.execution.wall_s = seconds_since(t0);
  emit(a.out, dump_report(report), out);
  return kExitConverged;
}

// Bin edges on #u3 / 2^n.
constexpr double kBinEdges[] = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

std::string bin_label(double key) {
  const std::size_t count = std::size(kBinEdges);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    if (key < kBinEdges[i + 1]) {
      return "[" + format_double(kBinEdges[i]) + "," + format_double(kBinEdges[i + 1]) + ")";
    }
  }
  return "[" + format_double(kBinEdges[count - 1]) + ",inf)";
}

struct BenchArgs {
  std::string dir, csv, out;
  std::vector<int> sizes;
  std::size_t per_size = 10;
  std::vector<std::string> backends{"sample", "full"};
  std::uint64_t timeout = 0;
};

struct Candidate {
  std::string file;
  std::size_t partition_index;
  Circuit block;
};

int cmd_bench(const BenchArgs &a, const OptimizerConfig &config, std::ostream &out,
              std::ostream &err) {
  std::vector<fs::path> files;
  if (!fs::is_directory(a.dir)) throw Error("not a directory: " + a.dir);
  for (const auto &entry : fs::directory_iterator(a.dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".qasm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("no .qasm files in " + a.dir);

  std::vector<Circuit> circuits;
  for (const fs::path &f : files) circuits.push_back(parse_qasm(read_file(f.string())));

  std::ostringstream csv;
  csv << "file,size,sample,partition,n,u3,cx,bin_key,bin,backend,success,termination,"
         "iterations,restarts,final_m,c_train,frobenius_distance,mult_adds,"
         "mult_adds_per_sweep,wall_s\n";
  // (bin, backend) -> runs, successes
  std::map<std::pair<std::string, std::string>, std::pair<std::size_t, std::size_t>> agg;
  Rng pick(split_seed(config.seed, 0xbe7c4ULL));
  std::size_t row = 0;

  for (int size : a.sizes) {
    if (size < 1 || size > kMaxFullQubits) throw CapacityError("bench size out of range");
    std::vector<Candidate> pool;
    for (std::size_t f = 0; f < circuits.size(); ++f) {
      if (circuits[f].num_qubits() < size) continue;
      const PartitionPlan plan = partition(circuits[f], size);
      for (std::size_t p = 0; p < plan.partitions.size(); ++p) {
        if (static_cast<int>(plan.partitions[p].qubits.size()) == size) {
          pool.push_back({files[f].filename().string(), p, plan.partitions[p].block});
        }
      }
    }
    if (pool.empty()) {
      throw Error("no partitions of exactly " + std::to_string(size) + " qubits in " + a.dir);
    }
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), pick);

    for (std::size_t s = 0; s < a.per_size; ++s) {
      const Candidate &c = pool[order[s % order.size()]];
      const ComplexMatrix u = circuit_unitary(c.block);
      const Target target(u);
      const std::size_t u3 = c.block.count_label("u3");
      const double key = static_cast<double>(u3) / std::ldexp(1.0, size);
      for (const std::string &backend : a.backends) {
        OptimizerConfig cfg = config;
        cfg.backend = parse_backend(backend);
        cfg.seed = split_seed(config.seed, row);
        if (a.timeout != 0) cfg.op_budget = a.timeout;
        const auto t0 = Clock::now();
        const InstantiationResult r = multistart_instantiate(target, c.block, cfg);
        const double wall = seconds_since(t0);
        const bool success = r.termination == Termination::kConverged;
        const double per_sweep =
            r.iterations == 0 ? 0.0
                              : static_cast<double>(r.counters.mult_adds) /
                                    static_cast<double>(r.iterations);
        const std::string bin = bin_label(key);
        csv << c.file << ',' << size << ',' << s << ',' << c.partition_index << ','
            << c.block.num_qubits() << ',' << u3 << ',' << c.block.count_label("cx") << ','
            << format_double(key) << ",\"" << bin << "\"," << backend << ','
            << (success ? 1 : 0) << ',' << to_string(r.termination) << ',' << r.iterations
            << ',' << r.restarts << ',' << r.final_m << ',' << format_double(r.c_train) << ','
            << format_double(frobenius_cost(u, r.circuit)) << ',' << r.counters.mult_adds
            << ',' << format_double(per_sweep) << ',' << format_double(wall) << '\n';
        auto &cell = agg[{bin, backend}];
        cell.first += 1;
        cell.second += success ? 1 : 0;
        ++row;
      }
    }
  }
  emit(a.csv, csv.str(), out);

  Json bins = Json::array();
  for (const auto &[k, v] : agg) {
    bins.push_back(Json{{"bin", k.first},
                        {"backend", k.second},
                        {"runs", v.first},
                        {"successes", v.second},
                        {"success_rate", static_cast<double>(v.second) / static_cast<double>(v.first)}});
  }
  const Json summary{{"command", "bench"},
                     {"tool_version", kToolVersion},
                     {"seed", config.seed},
                     {"config", config_to_json(config)},
                     {"rows", row},
                     {"bins", bins}};
  if (!a.out.empty()) {
    write_file(a.out, summary.dump(2) + "\n");
  } else if (!a.csv.empty()) {
    out << summary.dump(2) << '\n';
  } else {
    err << summary.dump(2) << '\n';
  }
  return kExitConverged;
}

int cmd_partition_stats(const std::string &input, const std::vector<int> &ks,
                        const std::string &csv_path, std::ostream &out) {
  const Circuit circuit = parse_qasm(read_file(input));
  std::ostringstream csv;
  csv << "k,size,partitions,gates,fraction\n";
  for (int k : ks) {
    const PartitionPlan plan = partition(circuit, k);
    for (const CoverageBin &b : plan.coverage.bins) {
      csv << k << ',' << b.size << ',' << b.partitions << ',' << b.gates << ','
          << format_double(b.fraction) << '\n';
    }
  }
  emit(csv_path, csv.str(), out);
  return kExitConverged;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"qinst: circuit instantiation and resynthesis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  InstantiateArgs ia;
  ConfigFlags iflags;
  CLI::App *inst = app.add_subcommand("instantiate", "fit a template circuit to a target");
  inst->add_option("target", ia.target, "unitary JSON or QASM file")->required();
  inst->add_option("template", ia.templ, "QASM template")->required();
  inst->add_option("--out", ia.out, "report path (default stdout)");
  inst->add_option("--qasm-out", ia.qasm_out, "write the instantiated circuit");
  iflags.add_to(*inst);

  ResynthArgs ra;
  ConfigFlags rflags;
  CLI::App *res = app.add_subcommand("resynth", "partitioned gate deletion");
  res->add_option("input", ra.input, "QASM circuit")->required();
  res->add_option("--k", ra.k, "partition width")->check(CLI::PositiveNumber);
  res->add_option("--out", ra.out, "report path (default stdout)");
  res->add_option("--qasm-out", ra.qasm_out, "write the optimized circuit");
  res->add_flag("--repeat", ra.repeat, "repeat deletion passes until nothing changes");
  rflags.add_to(*res);

  BenchArgs ba;
  ConfigFlags bflags;
  CLI::App *bench = app.add_subcommand("bench", "instantiate sampled partitions of a corpus");
  bench->add_option("dir", ba.dir, "directory of QASM files")->required();
  bench->add_option("--sizes", ba.sizes, "partition widths")->required()->delimiter(',');
  bench->add_option("--per-size", ba.per_size, "partitions sampled per width");
  bench->add_option("--backends", ba.backends, "sample,full")
      ->delimiter(',')
      ->check(CLI::IsMember({"sample", "full"}));
  bench->add_option("--timeout", ba.timeout, "multiply-add budget per start (0 = none)");
  bench->add_option("--csv", ba.csv, "dataset path (default stdout)");
  bench->add_option("--out", ba.out, "per-bin success summary (JSON)");
  bflags.add_to(*bench);

  std::string stats_input, stats_csv;
  std::vector<int> k_list{2, 3, 4};
  CLI::App *stats = app.add_subcommand("partition-stats", "partition coverage histogram");
  stats->add_option("input", stats_input, "QASM circuit")->required();
  stats->add_option("--k-list", k_list, "partition widths")->delimiter(',');
  stats->add_option("--csv", stats_csv, "output path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kExitError;
  }

  try {
    if (inst->parsed()) return cmd_instantiate(ia, iflags.resolve(*inst), out);
    if (res->parsed()) {
      return cmd_resynth(ra, rflags.resolve(*res), res->count("--max-iter") > 0, out);
    }
    if (bench->parsed()) return cmd_bench(ba, bflags.resolve(*bench), out, err);
    if (stats->parsed()) return cmd_partition_stats(stats_input, k_list, stats_csv, out);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace qinst
