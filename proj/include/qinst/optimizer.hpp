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

#include <cstddef>
#include <cstdint>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "qinst/circuit.hpp"
#include "qinst/numerics.hpp"
#include "qinst/simulator.hpp"

namespace qinst {

enum class StateDistribution { kHaar, kBasis };
enum class Backend { kSample, kFull };
enum class Termination { kConverged, kPlateau, kMaxIter, kStatesExhausted };

std::string to_string(StateDistribution d);
std::string to_string(Backend b);
std::string to_string(Termination t);
StateDistribution parse_distribution(std::string_view s);
Backend parse_backend(std::string_view s);
Termination parse_termination(std::string_view s);

/// Hyperparameters of one instantiation.
///
/// Defaults are the evaluation settings (dist_tol 1e-10, diff_tol_r 1e-3,
/// window 5, beta 0, 2 training states, min_iter 6, overtrain 0.1,
/// max_iter 1e6, 32 multistarts).
struct OptimizerConfig {
  double dist_tol = 1e-10;
  double diff_tol_r = 1e-3;
  std::size_t plateau_window = 5;
  double beta = 0.0;
  std::size_t num_training_states = 2;
  double overtrain_ratio = 0.1;
  std::size_t min_iter = 6;
  std::size_t max_iter = 1000000;
  std::size_t multistarts = 32;
  std::uint64_t seed = 0;
  StateDistribution distribution = StateDistribution::kHaar;
  Backend backend = Backend::kSample;
  // Upper bound on concurrently scheduled starts.
  std::size_t multistart_batch = 8;
  // Worker threads for multistarts; 0 picks the hardware concurrency.
  std::size_t threads = 0;
  // Cap on the training-set size; 0 means 2^n.
  std::size_t max_training_states = 0;
  // Per-run multiply-add budget (cooperative timeout); 0 disables it.
  std::uint64_t op_budget = 0;
  // Start 0 keeps the template's unitaries instead of drawing random ones.
  bool warm_start = false;

  // Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

// Flat `key = value` text (TOML-style, '#' comments). Keys are the field
// names above. Unknown keys are a ParseError.
OptimizerConfig parse_config(std::string_view text, OptimizerConfig base = {});
std::string config_to_text(const OptimizerConfig &config);

struct InstantiationResult {
  Circuit circuit;
  double c_train = 0.0;
  // Last validation cost; equals c_train when validation is skipped
  // (full backend, or the training set spans the whole space).
  double c_val = 0.0;
  Termination termination = Termination::kMaxIter;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  std::size_t final_m = 0;
  // Training states drawn across all restarts.
  std::size_t states_drawn = 0;
  OpCounters counters;
  std::size_t start_index = 0;
  // Set when a multistart run was stopped because a lower start converged.
  bool cancelled = false;
};

/// Maximizes Re Tr(((1-beta) e + beta u_prev^dagger) u) over unitaries:
/// with SVD x d y^dagger of that matrix the maximizer is y x^dagger.
/// beta = 1 returns u_prev unchanged.
ComplexMatrix svd_update(const ComplexMatrix &e, const ComplexMatrix &u_prev,
                         double beta, OpCounters *counters = nullptr);

/// One right-to-left pass: each variable gate is replaced by the optimum of
/// its environment, then folded into the right accumulator. Returns the
/// post-sweep cost on the caches' states (scale [0, 4]).
///
/// When `update_costs` is given, the cost after every variable-gate update
/// is appended to it.
double sweep(Circuit &circuit, SimCaches &caches, double beta,
             OpCounters *counters = nullptr,
             std::vector<double> *update_costs = nullptr);

/// Normalized generalization error c_val / c_train - 1. When c_train is
/// below 1e-14 the ratio is meaningless: returns 0 if c_val < dist_tol and
/// kOvertrainSentinel otherwise.
double validation_check(double c_train, double c_val, double dist_tol);
double validation_check(const SimCaches &train, const SimCaches &validation,
                        const Circuit &circuit, double dist_tol);

inline constexpr double kOvertrainSentinel = 1.0e300;

/// Sweeps until converged, plateau, max_iter, or training states run out.
/// Uses the template's gate unitaries as the starting point.
InstantiationResult instantiate(const Target &target, const Circuit &templ,
                                const OptimizerConfig &config, Rng &rng,
                                std::stop_token stop = {});

// Seed of multistart run `index`.
std::uint64_t start_seed(std::uint64_t seed, std::size_t index);

// Replaces every variable gate's unitary with a Haar-random one.
void randomize_variable_gates(Circuit &circuit, Rng &rng);

/// Runs config.multistarts independent starts (start s uses
/// Rng(start_seed(seed, s))). The winner is the lowest-index converged
/// start, or else the lowest c_train (ties to the lower index); the choice
/// does not depend on thread count or scheduling.
InstantiationResult multistart_instantiate(const Target &target, const Circuit &templ,
                                           const OptimizerConfig &config);

}  // namespace qinst
