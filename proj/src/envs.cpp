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

#include "hybridrl/envs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hybridrl/errors.hpp"

namespace hybridrl::envs {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw ParameterError(what);
}

Eigen::VectorXd vec(std::initializer_list<double> v) { return StateVec(v).vec(); }

}  // namespace

std::string_view to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::Pendulum:
      return "pendulum";
    case EnvKind::CartPole:
      return "cartpole";
    case EnvKind::MountainCar:
      return "mountaincar";
  }
  return "unknown";
}

EnvKind parse_env_kind(std::string_view name) {
  if (name == "pendulum") return EnvKind::Pendulum;
  if (name == "cartpole") return EnvKind::CartPole;
  if (name == "mountaincar") return EnvKind::MountainCar;
  throw ParameterError("unknown environment '" + std::string(name) +
                       "' (expected pendulum, cartpole or mountaincar)");
}

void EnvParams::validate() const {
  require(std::isfinite(m) && m > 0.0, "mass m must be positive");
  require(std::isfinite(M) && M > 0.0, "cart mass M must be positive");
  require(std::isfinite(l) && l > 0.0, "length l must be positive");
  require(std::isfinite(g) && g >= 0.0, "gravity g must be non-negative");
  require(std::isfinite(dt) && dt > 0.0, "timestep dt must be positive");
  require(std::isfinite(u_max) && u_max > 0.0, "u_max must be positive");
  require(horizon > 0, "horizon must be positive");
}

EnvParams default_params(EnvKind kind) {
  EnvParams p;
  p.kind = kind;
  switch (kind) {
    case EnvKind::Pendulum:
      // Rod of full length 1 m: same dynamics as the gym pendulum.
      p.m = 1.0;
      p.M = 1.0;
      p.l = 0.5;
      p.g = 10.0;
      p.dt = 0.05;
      p.u_max = 2.0;
      p.horizon = 200;
      break;
    case EnvKind::CartPole:
      p.m = 0.1;
      p.M = 1.0;
      p.l = 0.5;
      p.g = 9.8;
      p.dt = 0.02;
      p.u_max = 10.0;
      p.horizon = 500;
      break;
    case EnvKind::MountainCar:
      // Peak force is 0.6 of the peak gravity pull, as in the gym car, so the
      // hill cannot be climbed directly.
      p.m = 1.0;
      p.M = 1.0;
      p.l = 1.0;
      p.g = 9.8;
      p.dt = 0.02;
      p.u_max = 6.0;
      p.horizon = 500;
      break;
  }
  return p;
}

void CostSpec::validate() const {
  require(target.size() == weights.size(), "cost target and weights differ in size");
  require(target.all_finite(), "cost target must be finite");
  require(weights.allFinite() && (weights.array() >= 0.0).all(),
          "cost weights must be finite and non-negative");
  require(std::isfinite(control_weight) && control_weight >= 0.0,
          "control weight must be non-negative");
}

CostSpec default_cost(EnvKind kind) {
  CostSpec c;
  switch (kind) {
    case EnvKind::Pendulum:
      c.target = ObsVec{1.0, 0.0, 0.0};
      c.weights = vec({0.5, 0.5, 0.1});
      c.control_weight = 0.005;
      break;
    case EnvKind::CartPole:
      c.target = ObsVec{0.0, 0.0, 1.0, 0.0, 0.0};
      c.weights = vec({0.1, 0.0, 0.5, 0.5, 0.0});
      c.control_weight = 0.001;
      break;
    case EnvKind::MountainCar:
      c.target = ObsVec{0.0, 0.0};
      c.weights = vec({1.0, 0.1});
      c.control_weight = 0.005;
      break;
  }
  return c;
}

Eigen::Index state_dim(EnvKind kind) { return kind == EnvKind::CartPole ? 4 : 2; }

Eigen::Index obs_dim(EnvKind kind) {
  switch (kind) {
    case EnvKind::Pendulum:
      return 3;
    case EnvKind::CartPole:
      return 5;
    case EnvKind::MountainCar:
      return 2;
  }
  return 0;
}

std::vector<std::string> state_names(EnvKind kind) {
  switch (kind) {
    case EnvKind::Pendulum:
      return {"theta", "theta_dot"};
    case EnvKind::CartPole:
      return {"x", "x_dot", "theta", "theta_dot"};
    case EnvKind::MountainCar:
      return {"x", "x_dot"};
  }
  return {};
}

std::vector<std::string> obs_names(EnvKind kind) {
  switch (kind) {
    case EnvKind::Pendulum:
      return {"obs_cos_theta", "obs_sin_theta", "obs_theta_dot"};
    case EnvKind::CartPole:
      return {"obs_x", "obs_x_dot", "obs_cos_theta", "obs_sin_theta", "obs_theta_dot"};
    case EnvKind::MountainCar:
      return {"obs_x", "obs_x_dot"};
  }
  return {};
}

StateVec operating_state(EnvKind kind) {
  return StateVec(Eigen::VectorXd::Zero(state_dim(kind)));
}

StateVec initial_state(EnvKind kind) {
  switch (kind) {
    case EnvKind::Pendulum:
      return StateVec{kPi, 0.0};
    case EnvKind::CartPole:
      return StateVec{0.0, 0.0, kPi, 0.0};
    case EnvKind::MountainCar:
      return StateVec{-kPi, 0.0};
  }
  return {};
}

Eigen::Index monitored_index(EnvKind kind) {
  switch (kind) {
    case EnvKind::Pendulum:
      return 0;
    case EnvKind::CartPole:
      return 2;
    case EnvKind::MountainCar:
      return 0;
  }
  return 0;
}

bool monitored_is_angle(EnvKind kind) { return kind != EnvKind::MountainCar; }

double wrap_angle(double theta) {
  double w = std::remainder(theta, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

StateVec wrap(EnvKind kind, StateVec state) {
  switch (kind) {
    case EnvKind::Pendulum:
      state[0] = wrap_angle(state[0]);
      break;
    case EnvKind::CartPole:
      state[2] = wrap_angle(state[2]);
      break;
    case EnvKind::MountainCar:
      break;
  }
  return state;
}

ObsVec observe(EnvKind kind, const StateVec& state) {
  switch (kind) {
    case EnvKind::Pendulum: {
      const double th = wrap_angle(state[0]);
      return ObsVec{std::cos(th), std::sin(th), state[1]};
    }
    case EnvKind::CartPole: {
      const double th = wrap_angle(state[2]);
      return ObsVec{state[0], state[1], std::cos(th), std::sin(th), state[3]};
    }
    case EnvKind::MountainCar:
      return ObsVec{state[0], state[1]};
  }
  return {};
}

Eigen::VectorXd derivative(const EnvParams& p, const Eigen::VectorXd& x, double u) {
  Eigen::VectorXd dx(x.size());
  switch (p.kind) {
    case EnvKind::Pendulum: {
      // Torque about the pivot; theta = 0 is upright.
      const double J = p.m * p.l * p.l + p.inertia();
      dx[0] = x[1];
      dx[1] = (p.m * p.l * p.g * std::sin(x[0]) - u) / J;
      break;
    }
    case EnvKind::CartPole: {
      // Frictionless cart with a rigid pole; theta > 0 tilts the pole toward
      // +x and the applied cart force is F = -u.
      const double F = -u;
      const double s = std::sin(x[2]);
      const double c = std::cos(x[2]);
      const double J = p.inertia() + p.m * p.l * p.l;
      const double ml = p.m * p.l;
      const double den = J * (p.M + p.m) - ml * ml * c * c;
      const double push = F + ml * s * x[3] * x[3];
      dx[0] = x[1];
      dx[1] = (J * push - ml * ml * p.g * s * c) / den;
      dx[2] = x[3];
      dx[3] = ((p.M + p.m) * ml * p.g * s - ml * c * push) / den;
      break;
    }
    case EnvKind::MountainCar: {
      // Hill height cos(x): hilltop at x = 0, valley floor at x = -pi.
      dx[0] = x[1];
      dx[1] = p.g * std::sin(x[0]) - u / p.M;
      break;
    }
  }
  return dx;
}

double clip_control(double u, const EnvParams& params) {
  return std::clamp(u, -params.u_max, params.u_max);
}

StateVec advance(const StateVec& state, double u, const EnvParams& params) {
  if (!state.all_finite() || !std::isfinite(u)) {
    throw DivergenceError("non-finite state or control passed to the simulator");
  }
  const double h = params.dt;
  const Eigen::VectorXd& x = state.vec();
  const Eigen::VectorXd k1 = derivative(params, x, u);
  const Eigen::VectorXd k2 = derivative(params, x + 0.5 * h * k1, u);
  const Eigen::VectorXd k3 = derivative(params, x + 0.5 * h * k2, u);
  const Eigen::VectorXd k4 = derivative(params, x + h * k3, u);
  StateVec next(x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  if (!next.all_finite()) throw DivergenceError("simulation diverged to a non-finite state");
  return wrap(params.kind, std::move(next));
}

StateVec step(const StateVec& state, double u, const EnvParams& params) {
  if (!std::isfinite(u)) throw DivergenceError("non-finite control");
  return advance(state, clip_control(u, params), params);
}

double reward(const ObsVec& obs, double u, const CostSpec& spec) {
  if (obs.size() != spec.target.size() || obs.size() != spec.weights.size()) {
    throw ParameterError("observation dimension " + std::to_string(obs.size()) +
                         " does not match cost dimension " + std::to_string(spec.target.size()));
  }
  const Eigen::VectorXd e = obs.vec() - spec.target.vec();
  return -(e.array().square() * spec.weights.array()).sum() - spec.control_weight * u * u;
}

double mechanical_energy(const EnvParams& p, const StateVec& s) {
  switch (p.kind) {
    case EnvKind::Pendulum: {
      const double J = p.m * p.l * p.l + p.inertia();
      return 0.5 * J * s[1] * s[1] + p.m * p.g * p.l * std::cos(s[0]);
    }
    case EnvKind::CartPole: {
      const double vx = s[1] + p.l * std::cos(s[2]) * s[3];
      const double vy = -p.l * std::sin(s[2]) * s[3];
      return 0.5 * p.M * s[1] * s[1] + 0.5 * p.m * (vx * vx + vy * vy) +
             0.5 * p.inertia() * s[3] * s[3] + p.m * p.g * p.l * std::cos(s[2]);
    }
    case EnvKind::MountainCar:
      return 0.5 * p.M * s[1] * s[1] + p.M * p.g * std::cos(s[0]);
  }
  return 0.0;
}

Linearization linearize_numerical(const EnvParams& params, const StateVec& x0, double u0,
                                  double tolerance) {
  params.validate();
  const Eigen::Index n = x0.size();
  constexpr double h = 1e-6;
  Linearization out;
  out.system.A.resize(n, n);
  out.system.B.resize(n, 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXd xp = x0.vec(), xm = x0.vec();
    xp[j] += h;
    xm[j] -= h;
    out.system.A.col(j) = (derivative(params, xp, u0) - derivative(params, xm, u0)) / (2.0 * h);
  }
  out.system.B.col(0) =
      (derivative(params, x0.vec(), u0 + h) - derivative(params, x0.vec(), u0 - h)) / (2.0 * h);
  out.equilibrium_residual = derivative(params, x0.vec(), u0).lpNorm<Eigen::Infinity>();
  out.at_equilibrium = out.equilibrium_residual <= tolerance;
  return out;
}

LinearSystem analytic_linearization(const EnvParams& p) {
  p.validate();
  LinearSystem sys;
  switch (p.kind) {
    case EnvKind::Pendulum: {
      const double J = p.m * p.l * p.l + p.inertia();
      sys.A.resize(2, 2);
      sys.A << 0.0, 1.0, p.m * p.l * p.g / J, 0.0;
      sys.B.resize(2, 1);
      sys.B << 0.0, -1.0 / J;
      break;
    }
    case EnvKind::CartPole: {
      const double I = p.inertia();
      const double D = I * (p.M + p.m) + p.M * p.m * p.l * p.l;
      sys.A.setZero(4, 4);
      sys.A(0, 1) = 1.0;
      sys.A(1, 2) = -p.m * p.m * p.l * p.l * p.g / D;
      sys.A(2, 3) = 1.0;
      sys.A(3, 2) = p.m * p.l * p.g * (p.M + p.m) / D;
      sys.B.resize(4, 1);
      sys.B << 0.0, -(I + p.m * p.l * p.l) / D, 0.0, p.m * p.l / D;
      break;
    }
    case EnvKind::MountainCar: {
      sys.A.resize(2, 2);
      sys.A << 0.0, 1.0, p.g, 0.0;
      sys.B.resize(2, 1);
      sys.B << 0.0, -1.0 / p.M;
      break;
    }
  }
  return sys;
}

ObservationMap observation_map(EnvKind kind) {
  ObservationMap map;
  map.state_dim = state_dim(kind);
  switch (kind) {
    case EnvKind::Pendulum:
      map.state_index = {std::nullopt, 0, 1};
      break;
    case EnvKind::CartPole:
      map.state_index = {0, 1, std::nullopt, 2, 3};
      break;
    case EnvKind::MountainCar:
      map.state_index = {0, 1};
      break;
  }
  return map;
}

ObsBox observation_box(EnvKind kind) {
  ObsBox box;
  switch (kind) {
    case EnvKind::Pendulum:
      box.lo = vec({-1.0, -1.0, -8.0});
      box.hi = vec({1.0, 1.0, 8.0});
      break;
    case EnvKind::CartPole:
      box.lo = vec({-2.4, -3.0, -1.0, -1.0, -10.0});
      box.hi = vec({2.4, 3.0, 1.0, 1.0, 10.0});
      break;
    case EnvKind::MountainCar:
      box.lo = vec({-1.5 * kPi, -6.0});
      box.hi = vec({0.5 * kPi, 6.0});
      break;
  }
  return box;
}

}  // namespace hybridrl::envs
