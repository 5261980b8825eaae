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

#include "hybridrl/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include "hybridrl/errors.hpp"

namespace hybridrl::trainer {

namespace {

// Flat view of the trainable parameters of a policy.
class ParameterPacking {
 public:
  ParameterPacking(const policy::HybridPolicy& p, const TrainConfig& c)
      : n_weights_(p.nonlinear.weights.size()),
        n_lambda_(c.train_lambda && p.mode == policy::Mode::Hybrid ? p.obs_dim() : 0),
        n_centers_(c.train_centers ? p.nonlinear.centers.size() : 0) {}

  Eigen::Index size() const { return n_weights_ + n_lambda_ + n_centers_; }

  Eigen::VectorXd pack(const policy::HybridPolicy& p) const {
    Eigen::VectorXd v(size());
    v.head(n_weights_) = p.nonlinear.weights.reshaped();
    if (n_lambda_) v.segment(n_weights_, n_lambda_) = p.relevance.lambda.array().log().matrix();
    if (n_centers_) v.tail(n_centers_) = p.nonlinear.centers.reshaped();
    return v;
  }

  void unpack(const Eigen::VectorXd& v, policy::HybridPolicy& p) const {
    p.nonlinear.weights.reshaped() = v.head(n_weights_);
    if (n_lambda_) p.relevance.lambda = v.segment(n_weights_, n_lambda_).array().exp().matrix();
    if (n_centers_) p.nonlinear.centers.reshaped() = v.tail(n_centers_);
  }

  Eigen::VectorXd initial_std(const policy::HybridPolicy& p, const TrainConfig& c) const {
    Eigen::VectorXd s(size());
    s.head(n_weights_).setConstant(c.init_std);
    if (n_lambda_) s.segment(n_weights_, n_lambda_).setConstant(c.lambda_std);
    if (n_centers_) {
      // Centre spread proportional to the length-scale of each dimension.
      Eigen::MatrixXd cs(p.nonlinear.centers.rows(), p.nonlinear.centers.cols());
      for (Eigen::Index j = 0; j < cs.cols(); ++j) {
        cs.col(j).setConstant(c.center_std * 4.0 / p.nonlinear.scales[j]);
      }
      s.tail(n_centers_) = cs.reshaped();
    }
    return s;
  }

 private:
  Eigen::Index n_weights_;
  Eigen::Index n_lambda_;
  Eigen::Index n_centers_;
};

double mean_return(const policy::HybridPolicy& p, const envs::EnvParams& params,
                   const envs::CostSpec& cost, const std::vector<StateVec>& starts, int horizon) {
  double total = 0.0;
  for (const StateVec& s : starts) {
    try {
      total += rollout_return(p, params, cost, s, horizon);
    } catch (const DivergenceError&) {
      return kDivergedReturn;
    }
  }
  return total / static_cast<double>(starts.size());
}

}  // namespace

void TrainConfig::validate() const {
  if (population < 4) throw ParameterError("population must be at least 4");
  if (!(elite_fraction > 0.0 && elite_fraction < 1.0)) {
    throw ParameterError("elite fraction must lie in (0, 1)");
  }
  if (!(init_std > 0.0) || !(lambda_std > 0.0) || !(center_std > 0.0)) {
    throw ParameterError("sampling std must be positive");
  }
  if (!(std_decay > 0.0 && std_decay <= 1.0)) throw ParameterError("std decay must lie in (0, 1]");
  if (max_iterations < 1) throw ParameterError("max iterations must be positive");
  if (episodes_per_candidate < 1) throw ParameterError("episodes per candidate must be positive");
  if (horizon < 1) throw ParameterError("horizon must be positive");
  if (!(init_jitter >= 0.0)) throw ParameterError("jitter must be non-negative");
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(count, 1));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

double rollout_return(const policy::HybridPolicy& p, const envs::EnvParams& params,
                      const envs::CostSpec& cost, const StateVec& start, int horizon,
                      std::uint64_t seed, double jitter) {
  StateVec state = start;
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
    state = envs::step(state, u, params);
  }
  return total;
}

std::vector<StateVec> training_starts(envs::EnvKind kind, int episodes, double jitter,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> offset(-1.0, 1.0);
  std::vector<StateVec> starts;
  starts.reserve(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e) {
    StateVec s = envs::initial_state(kind);
    if (e > 0) {
      for (Eigen::Index i = 0; i < s.size(); ++i) s[i] += jitter * offset(rng);
    }
    starts.push_back(envs::wrap(kind, std::move(s)));
  }
  return starts;
}

TrainResult train(const policy::HybridPolicy& initial, const TrainConfig& config,
                  const envs::EnvParams& params, const envs::CostSpec& cost,
                  const ImprovementCallback& on_improvement) {
  config.validate();
  params.validate();
  cost.validate();
  initial.validate();
  if (initial.mode == policy::Mode::Linear) {
    throw ParameterError("a linear-only policy has no trainable parameters");
  }
  const auto wall_start = std::chrono::steady_clock::now();

  const ParameterPacking packing(initial, config);
  const Eigen::Index dim = packing.size();
  const std::vector<StateVec> starts =
      training_starts(params.kind, config.episodes_per_candidate, config.init_jitter, config.seed);
  const int n_elite =
      std::max(1, static_cast<int>(std::ceil(config.elite_fraction * config.population)));

  Eigen::VectorXd mean = packing.pack(initial);
  const Eigen::VectorXd std0 = packing.initial_std(initial, config);
  Eigen::VectorXd stddev = std0;

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  TrainResult result{initial, {}};
  double best = mean_return(initial, params, cost, starts, config.horizon);
  long long episodes = static_cast<long long>(starts.size());
  const double episode_time = config.horizon * params.dt;

  std::vector<Eigen::VectorXd> samples(static_cast<std::size_t>(config.population));
  std::vector<double> returns(static_cast<std::size_t>(config.population));
  std::vector<policy::HybridPolicy> candidates(static_cast<std::size_t>(config.population), initial);

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    for (int k = 0; k < config.population; ++k) {
      Eigen::VectorXd eps(dim);
      for (Eigen::Index i = 0; i < dim; ++i) eps[i] = normal(rng);
      samples[static_cast<std::size_t>(k)] = mean + stddev.cwiseProduct(eps);
      packing.unpack(samples[static_cast<std::size_t>(k)], candidates[static_cast<std::size_t>(k)]);
    }
    parallel_for(config.population, config.threads, [&](int k) {
      returns[static_cast<std::size_t>(k)] = mean_return(candidates[static_cast<std::size_t>(k)],
                                                         params, cost, starts, config.horizon);
    });
    episodes += static_cast<long long>(config.population) * static_cast<long long>(starts.size());

    std::vector<int> order(static_cast<std::size_t>(config.population));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return returns[static_cast<std::size_t>(a)] > returns[static_cast<std::size_t>(b)];
    });

    const int top = order.front();
    if (returns[static_cast<std::size_t>(top)] > best) {
      best = returns[static_cast<std::size_t>(top)];
      result.policy = candidates[static_cast<std::size_t>(top)];
      ++result.report.improvements;
      if (on_improvement) on_improvement(iter, result.policy, best);
    }

    Eigen::VectorXd elite_mean = Eigen::VectorXd::Zero(dim);
    for (int e = 0; e < n_elite; ++e) elite_mean += samples[static_cast<std::size_t>(order[e])];
    elite_mean /= n_elite;
    Eigen::VectorXd elite_var = Eigen::VectorXd::Zero(dim);
    for (int e = 0; e < n_elite; ++e) {
      elite_var += (samples[static_cast<std::size_t>(order[e])] - elite_mean).array().square().matrix();
    }
    elite_var /= n_elite;
    const double extra = std::pow(config.std_decay, iter);
    mean = elite_mean;
    stddev = (elite_var.array() + (std0.array() * extra).square()).sqrt().matrix();

    double pop_mean = 0.0;
    for (double r : returns) pop_mean += r;
    pop_mean /= config.population;
    result.report.iterations.push_back(
        IterationStats{iter, best, pop_mean, static_cast<double>(episodes) * episode_time});
  }

  result.report.episodes = episodes;
  result.report.sim_time_s = static_cast<double>(episodes) * episode_time;
  result.report.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return result;
}

HoldCheck check_hold(const policy::HybridPolicy& p, const envs::EnvParams& params, int horizon,
                     double tail_fraction, double tolerance) {
  StateVec state = envs::initial_state(params.kind);
  // The cart-pole target is the upright pole, not the cart position.
  const bool cartpole = params.kind == envs::EnvKind::CartPole;
  const Eigen::Index idx = cartpole ? 2 : envs::monitored_index(params.kind);
  const double unit =
      cartpole || envs::monitored_is_angle(params.kind) ? 180.0 / std::numbers::pi : 1.0;
  const int tail_start = horizon - static_cast<int>(std::ceil(tail_fraction * horizon));
  HoldCheck check;
  try {
    for (int t = 0; t < horizon; ++t) {
      if (t >= tail_start) {
        check.worst_tail_error = std::max(check.worst_tail_error, std::abs(state[idx]) * unit);
      }
      const ObsVec obs = envs::observe(params.kind, state);
      state = envs::step(state, policy::hybrid_action(obs, p)[0], params);
    }
    check.worst_tail_error = std::max(check.worst_tail_error, std::abs(state[idx]) * unit);
  } catch (const DivergenceError&) {
    check.worst_tail_error = std::numeric_limits<double>::infinity();
  }
  check.reached = check.worst_tail_error < tolerance;
  return check;
}

}  // namespace hybridrl::trainer
