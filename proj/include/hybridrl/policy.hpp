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
#include <filesystem>
#include <string>
#include <string_view>

#include "hybridrl/types.hpp"

namespace hybridrl::policy {

/// G(x) = W x + b, W is F x D.
struct LinearPolicy {
  Eigen::MatrixXd W;
  Eigen::VectorXd b;

  Eigen::VectorXd eval(const ObsVec& x) const { return W * x.vec() + b; }
};

/// Gaussian radial basis network with a tanh output squash:
///
///   H(x) = u_max * tanh( sum_i w_i exp(-0.5 * sum_j (s_j (x_j - c_ij))^2) )
///
/// `scales` holds the inverse length-scales s_j, shared by all centres.
struct RbfPolicy {
  Eigen::MatrixXd centers;  // N x D
  Eigen::VectorXd scales;   // D
  Eigen::MatrixXd weights;  // N x F
  double u_max = 1.0;

  Eigen::Index size() const { return centers.rows(); }
};

/// Operating point a and the diagonal of Lambda.
struct RelevanceParams {
  Eigen::VectorXd a;
  Eigen::VectorXd lambda;
};

// Hybrid blends G and H; Linear and Nonlinear evaluate only one part. The
// degenerate modes let a synthesized linear controller and a pure-H baseline
// flow through the same file format and analysis code.
enum class Mode { Hybrid, Linear, Nonlinear };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view name);

struct HybridPolicy {
  std::string env_name;
  Mode mode = Mode::Hybrid;
  LinearPolicy linear;
  RbfPolicy nonlinear;
  RelevanceParams relevance;

  Eigen::Index obs_dim() const { return relevance.a.size(); }
  Eigen::Index control_dim() const { return linear.W.rows(); }

  // Throws ParameterError on mismatched shapes, non-finite entries,
  // lambda_i <= 0, non-positive scales or u_max, or an empty RBF.
  void validate() const;
};

// d(x) = sum_i (x_i - a_i)^2 / lambda_i.
double scaled_distance(const ObsVec& x, const RelevanceParams& rel);

// r(x) = 1 / (1 + d(x))^2, in (0, 1], exactly 1 at x = a.
double relevance(const ObsVec& x, const RelevanceParams& rel);

// grad r = -2 (1 + d)^-3 grad d, grad d = 2 Lambda^-1 (x - a).
Eigen::VectorXd relevance_gradient(const ObsVec& x, const RelevanceParams& rel);

Eigen::VectorXd rbf_eval(const ObsVec& x, const RbfPolicy& h);
// dH/dx, F x D.
Eigen::MatrixXd rbf_jacobian(const ObsVec& x, const RbfPolicy& h);

// pi(x) = r(x) G(x) + (1 - r(x)) H(x) for Mode::Hybrid.
Eigen::VectorXd hybrid_action(const ObsVec& x, const HybridPolicy& p);

/// Analytic dpi/dx (F x D), assembled as
///
///   G grad_r' + r W + (1 - r) dH/dx - H grad_r'.
///
/// At x = a the first, third and fourth terms vanish identically, leaving W.
Eigen::MatrixXd jacobian_state(const ObsVec& x, const HybridPolicy& p);

// Central-difference Jacobian of hybrid_action; test and verification aid.
Eigen::MatrixXd jacobian_finite_difference(const ObsVec& x, const HybridPolicy& p,
                                           double step = 1e-5);

/// Builds a policy around a synthesized linear part. Centres are drawn
/// uniformly from [box_lo, box_hi], output weights from Normal(1, 0.01)
/// multiplied by `weight_scale`, inverse length-scales are 4 / (hi - lo), and
/// Lambda starts at the identity.
HybridPolicy make_policy(std::string env_name, Mode mode, LinearPolicy linear,
                         const Eigen::VectorXd& operating_obs, const Eigen::VectorXd& box_lo,
                         const Eigen::VectorXd& box_hi, double u_max, int centers,
                         double weight_scale, std::uint64_t seed);

// Structured-text policy file. Numbers are written in shortest round-trip
// form so deserialize(serialize(p)) reproduces every bit.
inline constexpr int kPolicyFormatVersion = 1;

// `header` is a block of `#` comment lines written after the title line.
std::string serialize(const HybridPolicy& p, std::string_view header = {});
// Throws ParseError (with byte offset) on malformed input, VersionError on an
// unsupported version and ParameterError when the parsed policy is invalid.
HybridPolicy deserialize(std::string_view text);

void save_policy(const HybridPolicy& p, const std::filesystem::path& path,
                 std::string_view header = {});
HybridPolicy load_policy(const std::filesystem::path& path);

}  // namespace hybridrl::policy
