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

#include "hybridrl/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>

#include "hybridrl/errors.hpp"
#include "hybridrl/trainer.hpp"

namespace hybridrl::analysis {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double mode_relevance(const ObsVec& obs, const policy::HybridPolicy& p) {
  switch (p.mode) {
    case policy::Mode::Linear:
      return 1.0;
    case policy::Mode::Nonlinear:
      return 0.0;
    case policy::Mode::Hybrid:
      break;
  }
  return policy::relevance(obs, p.relevance);
}

// Runs the closed loop from the operating point with disturbance w(t) added
// to the saturated command.
template <typename Disturbance>
Trajectory simulate(const policy::HybridPolicy& p, const envs::EnvParams& params,
                    const envs::CostSpec& cost, int horizon, Disturbance w) {
  if (horizon < 1) throw ParameterError("horizon must be positive");
  params.validate();
  Trajectory traj;
  traj.kind = params.kind;
  traj.dt = params.dt;
  StateVec state = envs::operating_state(params.kind);
  traj.states.push_back(state);
  for (int t = 0; t < horizon; ++t) {
    const ObsVec obs = envs::observe(params.kind, state);
    const double u = envs::clip_control(policy::hybrid_action(obs, p)[0], params);
    const double d = w(t);
    traj.obs.push_back(obs);
    traj.u.push_back(u);
    traj.disturbance.push_back(d);
    traj.reward.push_back(envs::reward(obs, u, cost));
    traj.relevance.push_back(mode_relevance(obs, p));
    try {
      state = envs::advance(state, u + d, params);
    } catch (const DivergenceError&) {
      traj.diverged = true;
      break;
    }
    traj.states.push_back(state);
  }
  return traj;
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<double> Trajectory::monitored() const {
  const Eigen::Index idx = envs::monitored_index(kind);
  const double unit = envs::monitored_is_angle(kind) ? kRadToDeg : 1.0;
  std::vector<double> out;
  out.reserve(states.size());
  for (const StateVec& s : states) out.push_back(s[idx] * unit);
  return out;
}

ResponseMetrics extract_metrics(std::span<const double> signal, double target, double band) {
  if (signal.empty()) throw ParameterError("cannot extract metrics from an empty signal");
  if (!(band >= 0.0)) throw ParameterError("settling band must be non-negative");
  ResponseMetrics m;
  m.band = band;
  const auto n = signal.size();
  if (!std::all_of(signal.begin(), signal.end(), [](double v) { return std::isfinite(v); })) {
    m.diverged = true;
    m.settled = false;
    m.settling_time = static_cast<int>(n);
    m.steady_state_error = std::numeric_limits<double>::infinity();
    return m;
  }

  const std::size_t tail = std::max<std::size_t>(1, (n + 9) / 10);
  m.steady_state_error = mean(signal.subspan(n - tail)) - target;

  double peak = 0.0;
  for (double v : signal) peak = std::max(peak, std::abs(v - target));
  if (peak > 0.0) {
    double direction = 0.0;
    for (double v : signal) {
      if (std::abs(v - target) >= 0.1 * peak) {
        direction = v > target ? 1.0 : -1.0;
        break;
      }
    }
    double beyond = 0.0;
    for (double v : signal) beyond = std::max(beyond, -direction * (v - target));
    m.crossed_target = beyond > 0.0;
    m.overshoot = beyond;
  }

  std::size_t last_out = n;  // sentinel: never outside the band
  for (std::size_t i = n; i-- > 0;) {
    if (std::abs(signal[i] - target) > band) {
      last_out = i;
      break;
    }
  }
  if (last_out == n) {
    m.settling_time = 0;
  } else {
    m.settling_time = static_cast<int>(last_out + 1);
    m.settled = last_out + 1 < n;
  }
  return m;
}

double settling_band(std::span<const double> signal, double target, bool angle) {
  double peak = 0.0;
  for (double v : signal) {
    if (std::isfinite(v)) peak = std::max(peak, std::abs(v - target));
  }
  return std::max(0.02 * peak, angle ? 0.1 : 0.001);
}

Response impulse_response(const policy::HybridPolicy& p, const envs::EnvParams& params,
                          const envs::CostSpec& cost, double magnitude, int horizon) {
  Response r;
  r.trajectory = simulate(p, params, cost, horizon, [&](int t) { return t == 0 ? magnitude : 0.0; });
  const std::vector<double> y = r.trajectory.monitored();
  const bool angle = envs::monitored_is_angle(params.kind);
  const double target = envs::operating_state(params.kind)[envs::monitored_index(params.kind)];
  r.metrics = extract_metrics(y, target, settling_band(y, target, angle));
  if (r.trajectory.diverged) {
    r.metrics.diverged = true;
    r.metrics.settled = false;
  }
  r.metrics.units = angle ? "deg" : "m";
  return r;
}

Response step_response(const policy::HybridPolicy& p, const envs::EnvParams& params,
                       const envs::CostSpec& cost, double magnitude, int horizon) {
  Response r;
  r.trajectory = simulate(p, params, cost, horizon, [&](int) { return magnitude; });
  const std::vector<double> y = r.trajectory.monitored();
  const bool angle = envs::monitored_is_angle(params.kind);
  const double origin = envs::operating_state(params.kind)[envs::monitored_index(params.kind)];
  const std::size_t tail = std::max<std::size_t>(1, (y.size() + 9) / 10);
  const double final_value = mean(std::span<const double>(y).subspan(y.size() - tail));
  r.metrics = extract_metrics(y, final_value, settling_band(y, final_value, angle));
  r.metrics.steady_state_error = final_value - origin;
  if (r.trajectory.diverged || !std::isfinite(final_value)) {
    r.metrics.diverged = true;
    r.metrics.settled = false;
  }
  r.metrics.units = angle ? "deg" : "m";
  return r;
}

double default_impulse(const envs::EnvParams& params) { return params.u_max; }

double default_step(const envs::EnvParams& params) { return 0.1 * params.u_max; }

int default_response_horizon(envs::EnvKind kind) {
  switch (kind) {
    case envs::EnvKind::Pendulum:
      return 200;
    case envs::EnvKind::CartPole:
      return 1500;
    case envs::EnvKind::MountainCar:
      return 500;
  }
  return 200;
}

std::string_view to_string(SweepParameter p) {
  return p == SweepParameter::Mass ? "mass" : "gravity";
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "mass" || name == "m") return SweepParameter::Mass;
  if (name == "gravity" || name == "g") return SweepParameter::Gravity;
  throw ParameterError("unknown sweep parameter '" + std::string(name) +
                       "' (expected mass or gravity)");
}

envs::EnvParams scale_parameter(envs::EnvParams params, SweepParameter which, double factor) {
  if (which == SweepParameter::Gravity) {
    params.g *= factor;
  } else if (params.kind == envs::EnvKind::Pendulum) {
    params.m *= factor;
  } else {
    params.M *= factor;
  }
  return params;
}

double operating_region_return(const policy::HybridPolicy& p, const envs::EnvParams& params,
                               const envs::CostSpec& cost, std::uint64_t seed, int horizon,
                               double jitter) {
  StateVec state = envs::operating_state(params.kind);
  if (jitter > 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> offset(-jitter, jitter);
    for (Eigen::Index i = 0; i < state.size(); ++i) state[i] += offset(rng);
    state = envs::wrap(params.kind, std::move(state));
  }
  double total = 0.0;
  for (int t = 0; t < horizon; ++t) {
    const ObsVec obs = envs::observe(params.kind, state);
    const double u = envs::clip_control(policy::hybrid_action(obs, p)[0], params);
    total += envs::reward(obs, u, cost);
    try {
      state = envs::step(state, u, params);
    } catch (const DivergenceError&) {
      break;
    }
  }
  return total;
}

void validate_factors(std::span<const double> factors) {
  if (factors.empty()) throw ParameterError("factor list is empty");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const double f = factors[i];
    if (!(f >= 0.5 && f <= 5.0)) {
      throw ParameterError("factor " + std::to_string(f) + " outside [0.5, 5]");
    }
    if (i > 0 && !(f > factors[i - 1])) throw ParameterError("factors must be strictly increasing");
  }
}

RobustnessCurve robustness_sweep(const policy::HybridPolicy& p, const envs::EnvParams& params,
                                 const envs::CostSpec& cost, SweepParameter which,
                                 std::span<const double> factors, int seeds,
                                 std::uint64_t base_seed, int horizon, double jitter,
                                 int threads) {
  validate_factors(factors);
  if (seeds < 1) throw ParameterError("seed count must be positive");
  if (horizon < 1) throw ParameterError("horizon must be positive");
  p.validate();
  params.validate();
  cost.validate();

  RobustnessCurve curve;
  curve.parameter = std::string(to_string(which));
  curve.seeds = seeds;
  curve.factors.assign(factors.begin(), factors.end());
  const int nf = static_cast<int>(factors.size());
  std::vector<double> returns(static_cast<std::size_t>(nf * seeds));
  trainer::parallel_for(nf * seeds, threads, [&](int k) {
    const envs::EnvParams scaled = scale_parameter(params, which, factors[static_cast<std::size_t>(k / seeds)]);
    returns[static_cast<std::size_t>(k)] = operating_region_return(
        p, scaled, cost, base_seed + static_cast<std::uint64_t>(k % seeds), horizon, jitter);
  });
  for (int f = 0; f < nf; ++f) {
    const std::span<const double> row(returns.data() + static_cast<std::ptrdiff_t>(f) * seeds,
                                      static_cast<std::size_t>(seeds));
    const double mu = mean(row);
    double var = 0.0;
    for (double v : row) var += (v - mu) * (v - mu);
    curve.mean_reward.push_back(mu);
    curve.std_reward.push_back(std::sqrt(var / seeds));
  }
  return curve;
}

std::vector<double> parse_factors(std::string_view spec) {
  auto number = [](std::string_view s) {
    double v = 0.0;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      throw ParameterError("bad number '" + std::string(s) + "' in factor list");
    }
    return v;
  };
  std::vector<double> out;
  if (const auto c1 = spec.find(':'); c1 != std::string_view::npos) {
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw ParameterError("factor range must be lo:hi:n");
    const double lo = number(spec.substr(0, c1));
    const double hi = number(spec.substr(c1 + 1, c2 - c1 - 1));
    const double n = number(spec.substr(c2 + 1));
    if (!(n >= 1.0) || n != std::floor(n)) throw ParameterError("factor count must be a positive integer");
    if (!(lo > 0.0) || !(hi > 0.0)) throw ParameterError("factor range must be positive");
    const int count = static_cast<int>(n);
    for (int i = 0; i < count; ++i) {
      if (count == 1) {
        out.push_back(lo);
      } else if (i == count - 1) {
        out.push_back(hi);
      } else {
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
      }
    }
  } else {
    std::size_t start = 0;
    while (start <= spec.size()) {
      const auto comma = spec.find(',', start);
      const auto end = comma == std::string_view::npos ? spec.size() : comma;
      out.push_back(number(spec.substr(start, end - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  validate_factors(out);
  return out;
}

}  // namespace hybridrl::analysis
