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

#include "qinst/resynth.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include "qinst/errors.hpp"
#include "qinst/simulator.hpp"

namespace qinst {

namespace {

struct OpenBlock {
  std::vector<int> support;  // sorted
  std::vector<std::size_t> gates;
  bool open = true;
};

std::vector<int> merge_support(const std::vector<int> &a, const std::vector<int> &b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Circuit relabel(const Circuit &circuit, const std::vector<int> &qubits,
                const std::vector<std::size_t> &gates) {
  Circuit block(static_cast<int>(qubits.size()));
  for (std::size_t gi : gates) {
    Gate g = circuit.gate(gi);
    for (int &q : g.location) {
      q = static_cast<int>(std::lower_bound(qubits.begin(), qubits.end(), q) -
                           qubits.begin());
    }
    block.append(std::move(g));
  }
  return block;
}

}  // namespace

namespace {

struct Block {
  std::vector<int> support;  // sorted
  std::vector<std::size_t> gates;
};

// Greedy open-block sweep; blocks come back in a valid emission order.
std::vector<Block> greedy_blocks(const Circuit &circuit, int k) {
  std::vector<OpenBlock> blocks;
  std::vector<int> holder(static_cast<std::size_t>(circuit.num_qubits()), -1);
  std::vector<std::size_t> emission;

  auto close = [&](int id) {
    OpenBlock &b = blocks[static_cast<std::size_t>(id)];
    for (int q : b.support) holder[static_cast<std::size_t>(q)] = -1;
    b.open = false;
    emission.push_back(static_cast<std::size_t>(id));
  };
  auto add = [&](int id, std::size_t gi, const std::vector<int> &loc) {
    OpenBlock &b = blocks[static_cast<std::size_t>(id)];
    b.support = merge_support(b.support, loc);
    b.gates.push_back(gi);
    for (int q : b.support) holder[static_cast<std::size_t>(q)] = id;
  };

  for (std::size_t gi = 0; gi < circuit.size(); ++gi) {
    const std::vector<int> &loc = circuit.gate(gi).location;
    std::vector<int> owners;
    for (int q : loc) {
      const int h = holder[static_cast<std::size_t>(q)];
      if (h >= 0 && std::find(owners.begin(), owners.end(), h) == owners.end()) {
        owners.push_back(h);
      }
    }
    std::sort(owners.begin(), owners.end());

    std::vector<int> joined = loc;
    for (int o : owners) joined = merge_support(joined, blocks[static_cast<std::size_t>(o)].support);

    if (!owners.empty() && joined.size() <= static_cast<std::size_t>(k)) {
      const int keep = owners.front();
      for (std::size_t oi = 1; oi < owners.size(); ++oi) {
        OpenBlock &other = blocks[static_cast<std::size_t>(owners[oi])];
        OpenBlock &dest = blocks[static_cast<std::size_t>(keep)];
        dest.support = merge_support(dest.support, other.support);
        dest.gates.insert(dest.gates.end(), other.gates.begin(), other.gates.end());
        std::sort(dest.gates.begin(), dest.gates.end());
        other.gates.clear();
        other.support.clear();
        other.open = false;
      }
      add(keep, gi, loc);
      continue;
    }

    for (int o : owners) close(o);
    int best = -1;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (!blocks[b].open) continue;
      if (blocks[b].support.size() + loc.size() > static_cast<std::size_t>(k)) continue;
      if (best < 0 ||
          blocks[b].support.size() > blocks[static_cast<std::size_t>(best)].support.size()) {
        best = static_cast<int>(b);
      }
    }
    if (best < 0) {
      blocks.push_back({});
      best = static_cast<int>(blocks.size() - 1);
    }
    add(best, gi, loc);
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].open) close(static_cast<int>(b));
  }

  std::vector<Block> out;
  for (std::size_t id : emission) {
    if (!blocks[id].gates.empty()) out.push_back({blocks[id].support, blocks[id].gates});
  }
  return out;
}

// Fuses neighbours in emission order while the union fits in k qubits.
// Gates keep circuit order inside a fused block, which stays valid because
// the concatenation of two consecutive blocks already was.
std::vector<Block> merge_adjacent(const std::vector<Block> &blocks, int k) {
  std::vector<Block> out;
  for (const Block &b : blocks) {
    if (!out.empty()) {
      std::vector<int> joined = merge_support(out.back().support, b.support);
      if (joined.size() <= static_cast<std::size_t>(k)) {
        out.back().support = std::move(joined);
        out.back().gates.insert(out.back().gates.end(), b.gates.begin(), b.gates.end());
        std::sort(out.back().gates.begin(), out.back().gates.end());
        continue;
      }
    }
    out.push_back(b);
  }
  return out;
}

std::size_t gates_at_least(const std::vector<Block> &blocks, std::size_t width) {
  std::size_t n = 0;
  for (const Block &b : blocks) {
    if (b.support.size() >= width) n += b.gates.size();
  }
  return n;
}

}  // namespace

PartitionPlan partition(const Circuit &circuit, int k) {
  if (k < 1) throw InfeasiblePartitionError("partition size must be at least 1");
  int widest = 1;
  for (std::size_t i = 0; i < circuit.size(); ++i) {
    const int arity = static_cast<int>(circuit.gate(i).arity());
    if (arity > k) {
      throw InfeasiblePartitionError("gate " + std::to_string(i) + " acts on " +
                                     std::to_string(arity) +
                                     " qubits, more than the partition size " +
                                     std::to_string(k));
    }
    widest = std::max(widest, arity);
  }

  // Each size also considers the previous size's plan with neighbours fused,
  // so growing k never lowers the gate share held by blocks of width >= k - 1.
  std::vector<Block> blocks = greedy_blocks(circuit, widest);
  for (int j = widest + 1; j <= k; ++j) {
    std::vector<Block> fresh = greedy_blocks(circuit, j);
    std::vector<Block> fused = merge_adjacent(blocks, j);
    const auto w = static_cast<std::size_t>(j - 1);
    blocks = gates_at_least(fused, w) > gates_at_least(fresh, w) ? std::move(fused)
                                                                  : std::move(fresh);
  }

  PartitionPlan plan;
  plan.k = k;
  plan.coverage.total_gates = circuit.size();
  plan.coverage.bins.resize(static_cast<std::size_t>(k));
  for (int s = 1; s <= k; ++s) plan.coverage.bins[static_cast<std::size_t>(s - 1)].size = s;
  for (const Block &b : blocks) {
    CoverageBin &bin = plan.coverage.bins[b.support.size() - 1];
    bin.partitions += 1;
    bin.gates += b.gates.size();
    plan.partitions.push_back({b.support, b.gates, relabel(circuit, b.support, b.gates)});
  }
  for (CoverageBin &bin : plan.coverage.bins) {
    bin.fraction = circuit.empty() ? 0.0
                                   : static_cast<double>(bin.gates) /
                                         static_cast<double>(circuit.size());
  }
  return plan;
}

Circuit reassemble(int num_qubits, const std::vector<Partition> &partitions) {
  Circuit out(num_qubits);
  for (const Partition &p : partitions) {
    for (const Gate &g : p.block.gates()) {
      Gate placed = g;
      for (int &q : placed.location) q = p.qubits[static_cast<std::size_t>(q)];
      out.append(std::move(placed));
    }
  }
  return out;
}

namespace {

struct Attempt {
  bool accepted = false;
  Circuit circuit;
  double distance = 0.0;
};

class DeletionRunner {
 public:
  DeletionRunner(const Circuit &original, const OptimizerConfig &config)
      : target_matrix_(circuit_unitary(original)), target_(target_matrix_), config_(config) {
    config_.warm_start = true;
  }

  Attempt try_without(const Circuit &current, std::vector<std::size_t> drop) {
    std::sort(drop.begin(), drop.end());
    Circuit candidate = current;
    for (auto it = drop.rbegin(); it != drop.rend(); ++it) candidate.erase(*it);
    const double limit = config_.dist_tol * (1.0 + config_.overtrain_ratio);

    Attempt out;
    if (candidate.num_variable() == 0) {
      out.distance = frobenius_cost(target_matrix_, candidate);
      out.accepted = out.distance <= limit;
      out.circuit = std::move(candidate);
      return out;
    }
    OptimizerConfig cfg = config_;
    cfg.seed = split_seed(config_.seed, attempts_);
    ++attempts_;
    InstantiationResult r = multistart_instantiate(target_, candidate, cfg);
    counters_ += r.counters;
    out.distance = frobenius_cost(target_matrix_, r.circuit);
    out.accepted = r.termination == Termination::kConverged && out.distance <= limit;
    out.circuit = std::move(r.circuit);
    return out;
  }

  const ComplexMatrix &target_matrix() const { return target_matrix_; }
  std::size_t attempts() const { return attempts_; }
  const OpCounters &counters() const { return counters_; }

 private:
  ComplexMatrix target_matrix_;
  Target target_;
  OptimizerConfig config_;
  std::size_t attempts_ = 0;
  OpCounters counters_;
};

// Next gate after i that shares a qubit with gate i.
std::optional<std::size_t> next_on_same_qubits(const Circuit &c, std::size_t i) {
  const auto &loc = c.gate(i).location;
  for (std::size_t j = i + 1; j < c.size(); ++j) {
    const auto &other = c.gate(j).location;
    const bool touches = std::any_of(other.begin(), other.end(), [&](int q) {
      return std::find(loc.begin(), loc.end(), q) != loc.end();
    });
    if (touches) return j;
  }
  return std::nullopt;
}

}  // namespace

DeletionOutcome delete_gates_pass(const Partition &part, const OptimizerConfig &config,
                                  const ResynthOptions &options) {
  DeletionOutcome out;
  out.block = part.block;
  if (part.block.num_qubits() > kMaxBlockQubits) {
    out.skipped = true;
    out.warning = "partition of " + std::to_string(part.block.num_qubits()) +
                  " qubits exceeds the verification limit of " +
                  std::to_string(kMaxBlockQubits) + "; skipped";
    return out;
  }
  OptimizerConfig cfg = config;
  cfg.max_iter = std::max(cfg.min_iter, std::min(cfg.max_iter, options.max_iter));
  DeletionRunner runner(part.block, cfg);

  Circuit current = part.block;
  bool changed = true;
  while (changed) {
    changed = false;
    std::size_t i = 0;
    while (i < current.size()) {
      Attempt a = runner.try_without(current, {i});
      std::size_t removed = 1;
      const Gate &g = current.gate(i);
      if (!a.accepted && !g.is_variable() && g.arity() >= 2) {
        const auto j = next_on_same_qubits(current, i);
        if (j && !current.gate(*j).is_variable() &&
            current.gate(*j).location == g.location) {
          a = runner.try_without(current, {i, *j});
          removed = 2;
        }
      }
      if (a.accepted) {
        current = std::move(a.circuit);
        out.deletions += removed;
        changed = true;
      } else {
        ++i;
      }
    }
    if (!options.repeat_until_fixpoint) break;
  }
  out.attempts = runner.attempts();
  out.counters = runner.counters();
  out.distance = frobenius_cost(runner.target_matrix(), current);
  out.block = std::move(current);
  return out;
}

ResynthOutput resynth_flow(const Circuit &circuit, const OptimizerConfig &config,
                           const ResynthOptions &options) {
  const auto t0 = std::chrono::steady_clock::now();
  config.validate();
  ResynthOutput out;
  ResynthReport &report = out.report;

  int k = options.k;
  if (k > kMaxBlockQubits) {
    report.warnings.push_back("partition size " + std::to_string(k) + " clamped to " +
                              std::to_string(kMaxBlockQubits));
    k = kMaxBlockQubits;
  }
  report.k = k;
  PartitionPlan plan = partition(circuit, k);
  report.coverage = plan.coverage;
  report.partitions = plan.partitions.size();
  report.u3_before = circuit.count_label("u3");
  report.cnot_before = circuit.count_label("cx");

  const std::size_t count = plan.partitions.size();
  std::vector<DeletionOutcome> outcomes(count);
  std::vector<std::string> errors(count);

  // Partitions run in parallel; each multistart stays single-threaded.
  OptimizerConfig inner = config;
  inner.threads = 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t p = next++; p < count; p = next++) {
      OptimizerConfig cfg = inner;
      cfg.seed = split_seed(config.seed, 0x5eed0000ULL + p);
      try {
        outcomes[p] = delete_gates_pass(plan.partitions[p], cfg, options);
      } catch (const std::exception &e) {
        errors[p] = e.what();
        outcomes[p] = DeletionOutcome{};
        outcomes[p].block = plan.partitions[p].block;
        outcomes[p].skipped = true;
      }
    }
  };
  std::size_t workers = config.threads;
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::vector<Partition> rebuilt = plan.partitions;
  for (std::size_t p = 0; p < count; ++p) {
    const DeletionOutcome &o = outcomes[p];
    PartitionRow row;
    row.index = p;
    row.qubits = plan.partitions[p].qubits;
    row.gates_before = plan.partitions[p].block.size();
    row.gates_after = o.block.size();
    row.deletions = o.deletions;
    row.distance = o.distance;
    row.skipped = o.skipped;
    row.message = errors[p].empty() ? o.warning : errors[p];
    if (!row.message.empty()) {
      report.warnings.push_back("partition " + std::to_string(p) + ": " + row.message);
    }
    if (o.deletions > 0) ++report.partitions_modified;
    report.deletions += o.deletions;
    report.counters += o.counters;
    rebuilt[p].block = o.block;
    report.rows.push_back(std::move(row));
  }
  out.circuit = reassemble(circuit.num_qubits(), rebuilt);
  report.u3_after = out.circuit.count_label("u3");
  report.cnot_after = out.circuit.count_label("cx");
  if (circuit.num_qubits() <= kMaxVerifyQubits) {
    report.final_distance = frobenius_cost(circuit_unitary(circuit), out.circuit);
  }
  report.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace qinst
