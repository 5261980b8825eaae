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

#include "hybridrl/policy.hpp"

#include <cmath>
#include <random>
#include <string>

#include "hybridrl/errors.hpp"

namespace hybridrl::policy {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

void check_dims(const ObsVec& x, const RelevanceParams& rel) {
  if (x.size() != rel.a.size() || rel.lambda.size() != rel.a.size()) {
    throw ParameterError("observation and relevance parameters differ in dimension");
  }
  if (!(rel.lambda.array() > 0.0).all()) throw ParameterError("every lambda_i must be positive");
}

// Pre-squash network output z(x) and the basis responses.
Eigen::VectorXd basis(const ObsVec& x, const RbfPolicy& h) {
  const Eigen::Index n = h.centers.rows();
  Eigen::VectorXd phi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd e = (x.vec() - h.centers.row(i).transpose()).cwiseProduct(h.scales);
    phi[i] = std::exp(-0.5 * e.squaredNorm());
  }
  return phi;
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Hybrid:
      return "hybrid";
    case Mode::Linear:
      return "linear";
    case Mode::Nonlinear:
      return "nonlinear";
  }
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  if (name == "hybrid") return Mode::Hybrid;
  if (name == "linear") return Mode::Linear;
  if (name == "nonlinear") return Mode::Nonlinear;
  throw ParameterError("unknown policy mode '" + std::string(name) + "'");
}

void HybridPolicy::validate() const {
  const Eigen::Index D = relevance.a.size();
  const Eigen::Index F = linear.W.rows();
  const Eigen::Index N = nonlinear.centers.rows();
  require(D > 0, "operating point must be non-empty");
  require(relevance.lambda.size() == D, "lambda must have one entry per observation component");
  require(relevance.a.allFinite() && relevance.lambda.allFinite(), "a and lambda must be finite");
  require((relevance.lambda.array() > 0.0).all(), "every lambda_i must be positive");
  require(F > 0 && linear.W.cols() == D, "W must be F x D");
  require(linear.b.size() == F, "b must have F entries");
  require(linear.W.allFinite() && linear.b.allFinite(), "W and b must be finite");
  require(N > 0, "the RBF network needs at least one centre");
  require(nonlinear.centers.cols() == D, "centres must be N x D");
  require(nonlinear.scales.size() == D, "scales must have D entries");
  require(nonlinear.weights.rows() == N && nonlinear.weights.cols() == F, "weights must be N x F");
  require(nonlinear.centers.allFinite() && nonlinear.weights.allFinite(),
          "centres and weights must be finite");
  require(nonlinear.scales.allFinite() && (nonlinear.scales.array() > 0.0).all(),
          "inverse length-scales must be positive");
  require(std::isfinite(nonlinear.u_max) && nonlinear.u_max > 0.0, "u_max must be positive");
}

double scaled_distance(const ObsVec& x, const RelevanceParams& rel) {
  check_dims(x, rel);
  return ((x.vec() - rel.a).array().square() / rel.lambda.array()).sum();
}

double relevance(const ObsVec& x, const RelevanceParams& rel) {
  const double d = scaled_distance(x, rel);
  return 1.0 / ((1.0 + d) * (1.0 + d));
}

Eigen::VectorXd relevance_gradient(const ObsVec& x, const RelevanceParams& rel) {
  const double d = scaled_distance(x, rel);
  const Eigen::VectorXd grad_d = 2.0 * (x.vec() - rel.a).cwiseQuotient(rel.lambda);
  return (-2.0 / std::pow(1.0 + d, 3)) * grad_d;
}

Eigen::VectorXd rbf_eval(const ObsVec& x, const RbfPolicy& h) {
  if (x.size() != h.centers.cols()) throw ParameterError("observation does not match RBF input size");
  const Eigen::VectorXd z = h.weights.transpose() * basis(x, h);
  return h.u_max * z.array().tanh().matrix();
}

Eigen::MatrixXd rbf_jacobian(const ObsVec& x, const RbfPolicy& h) {
  if (x.size() != h.centers.cols()) throw ParameterError("observation does not match RBF input size");
  const Eigen::VectorXd phi = basis(x, h);
  const Eigen::Index N = h.centers.rows();
  const Eigen::Index D = h.centers.cols();
  // dphi_i/dx_j = -phi_i s_j^2 (x_j - c_ij)
  Eigen::MatrixXd dphi(N, D);
  for (Eigen::Index i = 0; i < N; ++i) {
    dphi.row(i) = -phi[i] * ((x.vec() - h.centers.row(i).transpose()).cwiseProduct(
                                 h.scales.cwiseProduct(h.scales)))
                                .transpose();
  }
  const Eigen::VectorXd z = h.weights.transpose() * phi;
  const Eigen::MatrixXd dz = h.weights.transpose() * dphi;  // F x D
  const Eigen::ArrayXd t = z.array().tanh();
  const Eigen::VectorXd slope = h.u_max * (1.0 - t.square());
  return slope.asDiagonal() * dz;
}

Eigen::VectorXd hybrid_action(const ObsVec& x, const HybridPolicy& p) {
  switch (p.mode) {
    case Mode::Linear:
      return p.linear.eval(x);
    case Mode::Nonlinear:
      return rbf_eval(x, p.nonlinear);
    case Mode::Hybrid:
      break;
  }
  const double r = relevance(x, p.relevance);
  return r * p.linear.eval(x) + (1.0 - r) * rbf_eval(x, p.nonlinear);
}

Eigen::MatrixXd jacobian_state(const ObsVec& x, const HybridPolicy& p) {
  switch (p.mode) {
    case Mode::Linear:
      return p.linear.W;
    case Mode::Nonlinear:
      return rbf_jacobian(x, p.nonlinear);
    case Mode::Hybrid:
      break;
  }
  const double r = relevance(x, p.relevance);
  const Eigen::VectorXd grad_r = relevance_gradient(x, p.relevance);
  const Eigen::VectorXd G = p.linear.eval(x);
  const Eigen::VectorXd H = rbf_eval(x, p.nonlinear);
  return G * grad_r.transpose() + r * p.linear.W + (1.0 - r) * rbf_jacobian(x, p.nonlinear) -
         H * grad_r.transpose();
}

Eigen::MatrixXd jacobian_finite_difference(const ObsVec& x, const HybridPolicy& p, double step) {
  const Eigen::Index D = x.size();
  Eigen::MatrixXd J(p.control_dim(), D);
  for (Eigen::Index j = 0; j < D; ++j) {
    ObsVec xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    J.col(j) = (hybrid_action(xp, p) - hybrid_action(xm, p)) / (2.0 * step);
  }
  return J;
}

HybridPolicy make_policy(std::string env_name, Mode mode, LinearPolicy linear,
                         const Eigen::VectorXd& operating_obs, const Eigen::VectorXd& box_lo,
                         const Eigen::VectorXd& box_hi, double u_max, int centers,
                         double weight_scale, std::uint64_t seed) {
  const Eigen::Index D = operating_obs.size();
  require(box_lo.size() == D && box_hi.size() == D, "observation box does not match operating point");
  require((box_hi - box_lo).minCoeff() > 0.0, "observation box must have positive width");
  require(centers > 0, "the RBF network needs at least one centre");
  const Eigen::Index F = linear.W.rows();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> weight(1.0, 0.01);

  HybridPolicy p;
  p.env_name = std::move(env_name);
  p.mode = mode;
  p.linear = std::move(linear);
  p.nonlinear.centers.resize(centers, D);
  for (Eigen::Index i = 0; i < centers; ++i) {
    for (Eigen::Index j = 0; j < D; ++j) {
      p.nonlinear.centers(i, j) = box_lo[j] + (box_hi[j] - box_lo[j]) * unit(rng);
    }
  }
  p.nonlinear.weights.resize(centers, F);
  for (Eigen::Index i = 0; i < centers; ++i) {
    for (Eigen::Index f = 0; f < F; ++f) p.nonlinear.weights(i, f) = weight_scale * weight(rng);
  }
  p.nonlinear.scales = (4.0 / (box_hi - box_lo).array()).matrix();
  p.nonlinear.u_max = u_max;
  p.relevance.a = operating_obs;
  p.relevance.lambda = Eigen::VectorXd::Ones(D);
  p.validate();
  return p;
}

}  // namespace hybridrl::policy
