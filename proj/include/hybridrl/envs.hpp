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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hybridrl/types.hpp"

namespace hybridrl::envs {

enum class EnvKind { Pendulum, CartPole, MountainCar };

std::string_view to_string(EnvKind kind);
// Throws ParameterError on an unknown name.
EnvKind parse_env_kind(std::string_view name);

/// Physical and simulation parameters of one environment.
///
/// Rod-like bodies use the pivot-to-centre-of-mass distance `l` and the
/// inertia of a uniform rod of length 2l about its centre, I = m l^2 / 3.
/// Fields that an environment does not use (M for the pendulum, m and l for
/// the mountain car) are still required to be positive.
struct EnvParams {
  EnvKind kind = EnvKind::Pendulum;
  double m = 1.0;   // pole / pendulum mass [kg]
  double M = 1.0;   // cart mass [kg]
  double l = 0.5;   // pivot to centre of mass [m]
  double g = 10.0;  // gravitational acceleration [m/s^2], zero allowed
  double dt = 0.05;
  double u_max = 2.0;
  int horizon = 200;

  double inertia() const { return m * l * l / 3.0; }
  // Throws ParameterError when an invariant is violated.
  void validate() const;
};

EnvParams default_params(EnvKind kind);

/// Quadratic cost about a target observation: reward = -(o-a)' K (o-a) - k u^2.
struct CostSpec {
  ObsVec target;
  Eigen::VectorXd weights;  // diagonal of K
  double control_weight = 0.0;

  void validate() const;
};

CostSpec default_cost(EnvKind kind);

Eigen::Index state_dim(EnvKind kind);
Eigen::Index obs_dim(EnvKind kind);
std::vector<std::string> state_names(EnvKind kind);
std::vector<std::string> obs_names(EnvKind kind);

// Upright pendulum / balanced pole at the track centre / hilltop.
StateVec operating_state(EnvKind kind);
// Hanging pendulum / hanging pole / valley floor.
StateVec initial_state(EnvKind kind);

// Index of the state shown in transient responses (theta, or x for the car).
Eigen::Index monitored_index(EnvKind kind);
bool monitored_is_angle(EnvKind kind);

// Wraps angle components to (-pi, pi].
double wrap_angle(double theta);
StateVec wrap(EnvKind kind, StateVec state);

ObsVec observe(EnvKind kind, const StateVec& state);

// Continuous dynamics xdot = f(x, u). The control sign follows a
// negative-force convention: positive u decelerates the monitored
// coordinate (see analytic_linearization for the resulting B).
Eigen::VectorXd derivative(const EnvParams& params, const Eigen::VectorXd& x, double u);

double clip_control(double u, const EnvParams& params);

// One RK4 step with `u` applied as is (no saturation). Used directly when an
// external disturbance is added on top of a saturated actuator command.
StateVec advance(const StateVec& state, double u, const EnvParams& params);

// Saturates u to [-u_max, u_max] and advances one step. Throws
// DivergenceError on non-finite input or output.
StateVec step(const StateVec& state, double u, const EnvParams& params);

double reward(const ObsVec& obs, double u, const CostSpec& spec);

// Kinetic plus potential energy of the unforced system.
double mechanical_energy(const EnvParams& params, const StateVec& state);

struct Linearization {
  LinearSystem system;
  double equilibrium_residual = 0.0;  // ||f(x0, u0)||_inf
  bool at_equilibrium = true;
};

// Central finite-difference Jacobians of derivative() about (x0, u0). A
// point that is not an equilibrium is reported, not rejected.
Linearization linearize_numerical(const EnvParams& params, const StateVec& x0, double u0,
                                  double tolerance = 1e-9);

// Closed-form Jacobians about operating_state(kind).
LinearSystem analytic_linearization(const EnvParams& params);

// For each observation component, the state component it equals to first
// order at the operating point, or nullopt for components that are locally
// constant (cos(theta) near theta = 0).
struct ObservationMap {
  std::vector<std::optional<Eigen::Index>> state_index;
  Eigen::Index state_dim = 0;
};

ObservationMap observation_map(EnvKind kind);

// Axis-aligned box covering the observations reached during a swing-up.
struct ObsBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

ObsBox observation_box(EnvKind kind);

}  // namespace hybridrl::envs
