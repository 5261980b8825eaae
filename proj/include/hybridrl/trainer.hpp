// Copyright 2026 The hybridrl Authors
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
#include <functional>
#include <vector>

#include "hybridrl/envs.hpp"
#include "hybridrl/policy.hpp"

namespace hybridrl::trainer {

struct TrainConfig {
  int population = 32;
  double elite_fraction = 0.25;
  // Initial sampling std of the RBF output weights.
  double init_std = 1.0;
  // Initial sampling std of log(lambda_i).
  double lambda_std = 0.5;
  // Initial sampling std of the centres, as a fraction of the box width.
  double center_std = 0.05;
  // Extra exploration noise init_std * std_decay^k is added to the elite
  // spread at iteration k.
  double std_decay = 0.9;
  int max_iterations = 60;
  int episodes_per_candidate = 2;
  int horizon = 400;
  std::uint64_t seed = 0;
  bool train_lambda = true;
  bool train_centers = false;
  // Half-width of the uniform start-state jitter for episodes after the first.
  double init_jitter = 0.05;
  // 0 = hardware concurrency.
  int threads = 0;

  void validate() const;
};

struct IterationStats {
  int iter = 0;
  double best_return = 0.0;
  double mean_return = 0.0;
  double sim_time_s = 0.0;
};

struct TrainReport {
  std::vector<IterationStats> iterations;
  double wall_clock_s = 0.0;
  double sim_time_s = 0.0;
  long long episodes = 0;
  int improvements = 0;
};

struct TrainResult {
  policy::HybridPolicy policy;
  TrainReport report;
};

// Returns assigned to a candidate whose rollout diverged.
inline constexpr double kDivergedReturn = -1e12;

/// Sum of rewards over `horizon` steps from `start`. With jitter > 0 each
/// state component is offset by Uniform(-jitter, jitter) drawn from `seed`;
/// the seed has no other effect. DivergenceError propagates.
double rollout_return(const policy::HybridPolicy& p, const envs::EnvParams& params,
                      const envs::CostSpec& cost, const StateVec& start, int horizon,
                      std::uint64_t seed = 0, double jitter = 0.0);

// Start states shared by every candidate of a run: the nominal start, then
// jittered copies.
std::vector<StateVec> training_starts(envs::EnvKind kind, int episodes, double jitter,
                                      std::uint64_t seed);

using ImprovementCallback = std::function<void(int iter, const policy::HybridPolicy&, double)>;

/// Cross-entropy policy search over the RBF output weights, log(lambda)
/// (hybrid mode, when enabled) and optionally the centres. W, b and a are
/// never touched. Returns the best policy seen; best_return in the report is
/// non-decreasing. Candidates are evaluated in parallel but reduced in
/// candidate order, so the result depends only on the config and seed.
TrainResult train(const policy::HybridPolicy& initial, const TrainConfig& config,
                  const envs::EnvParams& params, const envs::CostSpec& cost,
                  const ImprovementCallback& on_improvement = {});

/// Swing-up-and-hold check: the pole angle (cart-pole) or the monitored
/// coordinate (otherwise) stays within
/// `tolerance` (degrees for angles, metres otherwise) over the final
/// `tail_fraction` of a `horizon`-step episode from the nominal start.
struct HoldCheck {
  bool reached = false;
  double worst_tail_error = 0.0;
};

HoldCheck check_hold(const policy::HybridPolicy& p, const envs::EnvParams& params, int horizon = 400,
                     double tail_fraction = 0.2, double tolerance = 5.0);

// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace hybridrl::trainer
