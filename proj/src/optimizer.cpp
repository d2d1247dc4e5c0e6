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

#include "qinst/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qinst/errors.hpp"

namespace qinst {

std::string to_string(StateDistribution d) {
  return d == StateDistribution::kHaar ? "haar" : "basis";
}

std::string to_string(Backend b) { return b == Backend::kSample ? "sample" : "full"; }

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kConverged:
      return "converged";
    case Termination::kPlateau:
      return "plateau";
    case Termination::kMaxIter:
      return "max_iter";
    case Termination::kStatesExhausted:
      return "states_exhausted";
  }
  return "unknown";
}

StateDistribution parse_distribution(std::string_view s) {
  if (s == "haar") return StateDistribution::kHaar;
  if (s == "basis") return StateDistribution::kBasis;
  throw std::invalid_argument("unknown state distribution '" + std::string(s) + "'");
}

Backend parse_backend(std::string_view s) {
  if (s == "sample") return Backend::kSample;
  if (s == "full") return Backend::kFull;
  throw std::invalid_argument("unknown backend '" + std::string(s) + "'");
}

Termination parse_termination(std::string_view s) {
  for (auto t : {Termination::kConverged, Termination::kPlateau, Termination::kMaxIter,
                 Termination::kStatesExhausted}) {
    if (s == to_string(t)) return t;
  }
  throw std::invalid_argument("unknown termination '" + std::string(s) + "'");
}

void OptimizerConfig::validate() const {
  if (!(dist_tol >= 0.0)) throw std::invalid_argument("dist_tol must be >= 0");
  if (!(diff_tol_r >= 0.0)) throw std::invalid_argument("diff_tol_r must be >= 0");
  if (plateau_window < 1) throw std::invalid_argument("plateau_window must be >= 1");
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must be in [0, 1]");
  if (num_training_states < 1) {
    throw std::invalid_argument("num_training_states must be >= 1");
  }
  if (!(overtrain_ratio >= 0.0)) {
    throw std::invalid_argument("overtrain_ratio must be >= 0");
  }
  if (min_iter > max_iter) throw std::invalid_argument("min_iter must be <= max_iter");
  if (multistarts < 1) throw std::invalid_argument("multistarts must be >= 1");
  if (multistart_batch < 1) throw std::invalid_argument("multistart_batch must be >= 1");
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

template <typename T>
T parse_number(const std::string &v, std::size_t line) {
  T out{};
  const char *end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, "invalid numeric value '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string &v, std::size_t line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError(line, "invalid boolean '" + v + "'");
}

}  // namespace

OptimizerConfig parse_config(std::string_view text, OptimizerConfig config) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view sv = raw;
    if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
    const std::string stripped = trim(sv);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key = value");
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    try {
      if (key == "dist_tol") {
        config.dist_tol = parse_number<double>(value, line);
      } else if (key == "diff_tol_r") {
        config.diff_tol_r = parse_number<double>(value, line);
      } else if (key == "plateau_window") {
        config.plateau_window = parse_number<std::size_t>(value, line);
      } else if (key == "beta") {
        config.beta = parse_number<double>(value, line);
      } else if (key == "num_training_states") {
        config.num_training_states = parse_number<std::size_t>(value, line);
      } else if (key == "overtrain_ratio") {
        config.overtrain_ratio = parse_number<double>(value, line);
      } else if (key == "min_iter") {
        config.min_iter = parse_number<std::size_t>(value, line);
      } else if (key == "max_iter") {
        config.max_iter = parse_number<std::size_t>(value, line);
      } else if (key == "multistarts") {
        config.multistarts = parse_number<std::size_t>(value, line);
      } else if (key == "seed") {
        config.seed = parse_number<std::uint64_t>(value, line);
      } else if (key == "distribution") {
        config.distribution = parse_distribution(value);
      } else if (key == "backend") {
        config.backend = parse_backend(value);
      } else if (key == "multistart_batch") {
        config.multistart_batch = parse_number<std::size_t>(value, line);
      } else if (key == "threads") {
        config.threads = parse_number<std::size_t>(value, line);
      } else if (key == "max_training_states") {
        config.max_training_states = parse_number<std::size_t>(value, line);
      } else if (key == "op_budget") {
        config.op_budget = parse_number<std::uint64_t>(value, line);
      } else if (key == "warm_start") {
        config.warm_start = parse_bool(value, line);
      } else {
        throw ParseError(line, "unknown config key '" + key + "'");
      }
    } catch (const std::invalid_argument &e) {
      throw ParseError(line, e.what());
    }
  }
  return config;
}

std::string config_to_text(const OptimizerConfig &c) {
  std::ostringstream out;
  out.precision(17);
  out << "dist_tol = " << c.dist_tol << "\n"
      << "diff_tol_r = " << c.diff_tol_r << "\n"
      << "plateau_window = " << c.plateau_window << "\n"
      << "beta = " << c.beta << "\n"
      << "num_training_states = " << c.num_training_states << "\n"
      << "overtrain_ratio = " << c.overtrain_ratio << "\n"
      << "min_iter = " << c.min_iter << "\n"
      << "max_iter = " << c.max_iter << "\n"
      << "multistarts = " << c.multistarts << "\n"
      << "seed = " << c.seed << "\n"
      << "distribution = \"" << to_string(c.distribution) << "\"\n"
      << "backend = \"" << to_string(c.backend) << "\"\n"
      << "multistart_batch = " << c.multistart_batch << "\n"
      << "threads = " << c.threads << "\n"
      << "max_training_states = " << c.max_training_states << "\n"
      << "op_budget = " << c.op_budget << "\n"
      << "warm_start = " << (c.warm_start ? "true" : "false") << "\n";
  return out.str();
}

ComplexMatrix svd_update(const ComplexMatrix &e, const ComplexMatrix &u_prev, double beta,
                         OpCounters *counters) {
  if (e.rows() != e.cols() || e.rows() != u_prev.rows() || e.cols() != u_prev.cols()) {
    throw DimensionError("svd_update: environment and gate dimensions differ");
  }
  if (beta >= 1.0) return u_prev;
  const ComplexMatrix mixed =
      beta == 0.0 ? e : ComplexMatrix((1.0 - beta) * e + beta * u_prev.adjoint());
  const SvdResult f = svd(mixed);
  if (counters != nullptr) {
    const auto d = static_cast<std::uint64_t>(e.rows());
    counters->svds += 1;
    counters->mult_adds += d * d * d;
  }
  return f.y * f.x.adjoint();
}

double sweep(Circuit &circuit, SimCaches &caches, double beta, OpCounters *counters,
             std::vector<double> *update_costs) {
  caches.refresh(circuit);
  StateSet right = caches.outputs();
  const double m = static_cast<double>(caches.num_states());
  std::size_t since_norm = 0;
  for (std::size_t k = circuit.size(); k-- > 0;) {
    if (circuit.gate(k).is_variable()) {
      const EnvironmentMatrix env = environment_sample(caches, circuit, k, right, counters);
      ComplexMatrix updated = svd_update(env.e, circuit.gate(k).unitary, beta, counters);
      if (update_costs != nullptr) {
        const double re_trace = (env.e * updated).trace().real();
        update_costs->push_back(2.0 - 2.0 * re_trace / m);
      }
      circuit.set_unitary(k, std::move(updated));
      caches.invalidate_from(k + 1);
    }
    const Gate &g = circuit.gate(k);
    apply_unitary_inplace(right, g.location, g.unitary.adjoint(), counters);
    if (++since_norm == kRenormalizeEvery) {
      right.normalize();
      since_norm = 0;
    }
  }
  // right = C^dagger U |psi_j>, and ||U psi - C psi|| = ||C^dagger U psi - psi||.
  return mean_squared_distance(right, caches.inputs());
}

double validation_check(double c_train, double c_val, double dist_tol) {
  if (c_train < 1e-14) return c_val < dist_tol ? 0.0 : kOvertrainSentinel;
  return c_val / c_train - 1.0;
}

double validation_check(const SimCaches &train, const SimCaches &validation,
                        const Circuit &circuit, double dist_tol) {
  return validation_check(sample_cost(train, circuit), sample_cost(validation, circuit),
                          dist_tol);
}

namespace {

StateSet draw_training(int n, std::size_t m, StateDistribution dist, Rng &rng) {
  return dist == StateDistribution::kHaar ? haar_random_states(n, m, rng)
                                          : basis_states(n, m, rng);
}

}  // namespace

InstantiationResult instantiate(const Target &target, const Circuit &templ,
                                const OptimizerConfig &config, Rng &rng,
                                std::stop_token stop) {
  config.validate();
  const int n = target.num_qubits();
  if (templ.num_qubits() != n) {
    throw DimensionError("template has " + std::to_string(templ.num_qubits()) +
                         " qubits, target has " + std::to_string(n));
  }
  const bool full = config.backend == Backend::kFull;
  if (full && n > kMaxFullQubits) {
    throw CapacityError("full backend is limited to " + std::to_string(kMaxFullQubits) +
                        " qubits");
  }
  const std::size_t dim = target.dim();
  const std::size_t cap = config.max_training_states == 0
                              ? dim
                              : std::min(config.max_training_states, dim);

  InstantiationResult result;
  result.circuit = templ;
  Circuit &circuit = result.circuit;
  OpCounters &counters = result.counters;

  std::size_t m = full ? dim : std::min(config.num_training_states, cap);
  StateSet inputs = full ? full_basis(n) : draw_training(n, m, config.distribution, rng);
  result.states_drawn = m;
  std::optional<SimCaches> train;
  train.emplace(target, circuit, std::move(inputs), &counters);

  // Validation inputs are Haar states drawn independently of the training set.
  StateSet val_inputs;
  StateSet val_outputs;
  auto draw_validation = [&] {
    val_inputs = haar_random_states(n, m, rng);
    val_outputs = target.apply(val_inputs, &counters);
  };
  auto validating = [&] { return !full && m < dim; };
  if (validating()) draw_validation();

  // Full backend reports the normalized Frobenius distance, i.e. half the
  // mean squared distance over the complete basis.
  const double cost_scale = full ? 0.5 : 1.0;
  double prev = std::numeric_limits<double>::infinity();
  std::size_t failing = 0;

  for (;;) {
    if (stop.stop_requested()) {
      result.cancelled = true;
      result.termination = Termination::kMaxIter;
      break;
    }
    if (result.iterations >= config.max_iter ||
        (config.op_budget != 0 && result.iterations > 0 &&
         counters.mult_adds >= config.op_budget)) {
      result.termination = Termination::kMaxIter;
      break;
    }
    const double c = cost_scale * sweep(circuit, *train, config.beta, &counters);
    ++result.iterations;
    result.c_train = c;
    result.c_val = c;
    if (result.iterations < config.min_iter) {
      prev = c;
      continue;
    }

    // Plateau progress is judged on a fixed training set; after a restart
    // the reference cost is re-evaluated on the new set, and the window
    // carries over.
    if (result.iterations > config.min_iter) {
      const bool improved = std::abs(prev) - std::abs(c) > config.diff_tol_r * std::abs(c);
      failing = improved ? 0 : failing + 1;
    }

    bool overtrained = false;
    if (validating()) {
      const StateSet produced = simulate(circuit, val_inputs, &counters);
      result.c_val = mean_squared_distance(val_outputs, produced);
      overtrained = validation_check(c, result.c_val, config.dist_tol) > config.overtrain_ratio;
    }
    if (!overtrained && c < config.dist_tol) {
      result.termination = Termination::kConverged;
      break;
    }
    if (failing >= config.plateau_window) {
      result.termination = Termination::kPlateau;
      break;
    }
    if (overtrained) {
      if (m >= cap) {
        result.termination = Termination::kStatesExhausted;
        break;
      }
      // Double and restart; gate unitaries are kept as they are.
      m = std::min(2 * m, cap);
      ++result.restarts;
      result.states_drawn += m;
      train.emplace(target, circuit, draw_training(n, m, config.distribution, rng), &counters);
      if (validating()) draw_validation();
      train->refresh(circuit);
      prev = cost_scale * sample_cost(*train, circuit);
      continue;
    }
    prev = c;
  }
  result.final_m = m;
  return result;
}

std::uint64_t start_seed(std::uint64_t seed, std::size_t index) {
  return split_seed(seed, static_cast<std::uint64_t>(index));
}

void randomize_variable_gates(Circuit &circuit, Rng &rng) {
  for (std::size_t i = 0; i < circuit.size(); ++i) {
    if (circuit.gate(i).is_variable()) {
      circuit.set_unitary(i, haar_random_unitary(circuit.gate(i).dim(), rng));
    }
  }
}

InstantiationResult multistart_instantiate(const Target &target, const Circuit &templ,
                                           const OptimizerConfig &config) {
  config.validate();
  const std::size_t starts = config.multistarts;
  std::vector<std::optional<InstantiationResult>> results(starts);
  std::vector<std::stop_source> stops(starts);
  std::mutex mu;
  std::exception_ptr failure;
  std::size_t first_converged = starts;

  auto run_start = [&](std::size_t s) {
    Rng rng(start_seed(config.seed, s));
    Circuit start = templ;
    if (!(config.warm_start && s == 0)) randomize_variable_gates(start, rng);
    InstantiationResult r = instantiate(target, start, config, rng, stops[s].get_token());
    r.start_index = s;
    std::lock_guard lock(mu);
    if (r.termination == Termination::kConverged && !r.cancelled && s < first_converged) {
      first_converged = s;
      // Higher starts can no longer win.
      for (std::size_t t = s + 1; t < starts; ++t) stops[t].request_stop();
    }
    results[s] = std::move(r);
  };

  std::size_t workers = config.threads;
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());

  for (std::size_t begin = 0; begin < starts; begin += config.multistart_batch) {
    const std::size_t end = std::min(starts, begin + config.multistart_batch);
    std::atomic<std::size_t> next{begin};
    auto worker = [&] {
      for (std::size_t s = next++; s < end; s = next++) {
        if (stops[s].stop_requested()) continue;
        try {
          run_start(s);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    const std::size_t count = std::min(workers, end - begin);
    if (count <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(count);
      for (std::size_t w = 0; w < count; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    if (first_converged < starts) break;
  }

  if (first_converged < starts) return std::move(*results[first_converged]);
  std::optional<std::size_t> best;
  for (std::size_t s = 0; s < starts; ++s) {
    if (!results[s] || results[s]->cancelled) continue;
    if (!best || results[s]->c_train < results[*best]->c_train) best = s;
  }
  if (!best) throw InternalError("no multistart run completed");
  return std::move(*results[*best]);
}

}  // namespace qinst
