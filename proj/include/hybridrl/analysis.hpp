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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridrl/envs.hpp"
#include "hybridrl/policy.hpp"

namespace hybridrl::analysis {

/// Closed-loop trajectory. states has one more entry than u/reward/relevance
/// (the state after the last step).
struct Trajectory {
  envs::EnvKind kind = envs::EnvKind::Pendulum;
  double dt = 0.0;
  std::vector<StateVec> states;
  std::vector<ObsVec> obs;
  std::vector<double> u;           // actuator command after saturation
  std::vector<double> disturbance;
  std::vector<double> reward;
  std::vector<double> relevance;   // r(x); 1 for linear-only, 0 for nonlinear-only
  bool diverged = false;

  // Monitored coordinate per state, in report units (degrees for angles).
  std::vector<double> monitored() const;
};

struct ResponseMetrics {
  double steady_state_error = 0.0;
  // Largest excursion past the target against the initial deviation; 0 when
  // the target is never crossed (crossed_target == false).
  double overshoot = 0.0;
  bool crossed_target = false;
  int settling_time = 0;  // timesteps
  bool settled = true;
  bool diverged = false;
  double band = 0.0;
  std::string units;
};

/// steady_state_error = mean of the last 10% of samples minus target;
/// overshoot against the direction of the first sample deviating by at least
/// 10% of the peak deviation; settling_time = first index after which every
/// sample stays within `band` of the target. Throws ParameterError on an
/// empty signal.
ResponseMetrics extract_metrics(std::span<const double> signal, double target, double band);

// Settling band: 2% of the peak deviation, floored at 0.1 degree or 1 mm.
double settling_band(std::span<const double> signal, double target, bool angle);

struct Response {
  Trajectory trajectory;
  ResponseMetrics metrics;
};

// Additive disturbance of `magnitude` (control units) during step 0 only,
// starting exactly at the operating point. Divergence is flagged, not thrown.
Response impulse_response(const policy::HybridPolicy& p, const envs::EnvParams& params,
                          const envs::CostSpec& cost, double magnitude, int horizon);

// Constant additive disturbance from step 0 on. Overshoot and settling are
// measured about the new steady value; steady_state_error is that value's
// offset from the operating point.
Response step_response(const policy::HybridPolicy& p, const envs::EnvParams& params,
                       const envs::CostSpec& cost, double magnitude, int horizon);

// Default disturbance sizes and horizons used by the CLI and acceptance runs.
double default_impulse(const envs::EnvParams& params);
double default_step(const envs::EnvParams& params);
int default_response_horizon(envs::EnvKind kind);

enum class SweepParameter { Mass, Gravity };

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view name);

// Pendulum: pole mass m. Cart-pole and mountain car: cart mass M.
envs::EnvParams scale_parameter(envs::EnvParams params, SweepParameter which, double factor);

struct RobustnessCurve {
  std::string parameter;
  std::vector<double> factors;
  std::vector<double> mean_reward;
  std::vector<double> std_reward;  // population std over seeds
  int seeds = 0;
};

// Half-width of the start jitter around the operating point.
inline constexpr double kOperatingJitter = 0.02;
inline constexpr int kRobustnessHorizon = 200;

/// Cumulative reward from operating_state + Uniform(-jitter, jitter) (drawn
/// from `seed`). A rollout that diverges keeps the reward accumulated so far.
double operating_region_return(const policy::HybridPolicy& p, const envs::EnvParams& params,
                               const envs::CostSpec& cost, std::uint64_t seed,
                               int horizon = kRobustnessHorizon, double jitter = kOperatingJitter);

// Validates factors: strictly increasing within [0.5, 5].
void validate_factors(std::span<const double> factors);

/// For each factor, scales the parameter and averages operating_region_return
/// over seeds base_seed, base_seed + 1, ..., base_seed + seeds - 1.
RobustnessCurve robustness_sweep(const policy::HybridPolicy& p, const envs::EnvParams& params,
                                 const envs::CostSpec& cost, SweepParameter which,
                                 std::span<const double> factors, int seeds,
                                 std::uint64_t base_seed = 0, int horizon = kRobustnessHorizon,
                                 double jitter = kOperatingJitter, int threads = 1);

/// "lo:hi:n" -> n log-spaced factors; "a,b,c" -> the listed factors. The
/// result is validated with validate_factors. Throws ParameterError.
std::vector<double> parse_factors(std::string_view spec);

}  // namespace hybridrl::analysis
