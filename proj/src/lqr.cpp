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

#include "hybridrl/lqr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "hybridrl/errors.hpp"

namespace hybridrl::lqr {

namespace {

using Complex = std::complex<double>;

// Givens rotation [c s; -conj(s) c] with [c s; -conj(s) c] [f; g] = [r; 0].
void make_rotation(Complex f, Complex g, double& c, Complex& s) {
  const double af = std::abs(f);
  const double ag = std::abs(g);
  if (ag == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (af == 0.0) {
    c = 0.0;
    s = std::conj(g) / ag;
    return;
  }
  const double rho = std::hypot(af, ag);
  c = af / rho;
  s = (f / af) * std::conj(g) / rho;
}

// Swaps the diagonal entries k and k+1 of the upper-triangular T, keeping
// H = U T U^* invariant.
void swap_adjacent(Eigen::MatrixXcd& T, Eigen::MatrixXcd& U, Eigen::Index k) {
  const Eigen::Index n = T.rows();
  const Complex t11 = T(k, k);
  const Complex t22 = T(k + 1, k + 1);
  double c;
  Complex s;
  make_rotation(T(k, k + 1), t22 - t11, c, s);
  for (Eigen::Index j = k + 2; j < n; ++j) {
    const Complex x = T(k, j), y = T(k + 1, j);
    T(k, j) = c * x + s * y;
    T(k + 1, j) = c * y - std::conj(s) * x;
  }
  const Complex sc = std::conj(s);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Complex x = T(i, k), y = T(i, k + 1);
    T(i, k) = c * x + sc * y;
    T(i, k + 1) = c * y - std::conj(sc) * x;
  }
  T(k, k) = t22;
  T(k + 1, k + 1) = t11;
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    const Complex x = U(i, k), y = U(i, k + 1);
    U(i, k) = c * x + sc * y;
    U(i, k + 1) = c * y - std::conj(sc) * x;
  }
}

// Moves every eigenvalue with negative real part to the leading block.
// Returns how many there are.
Eigen::Index order_stable_first(Eigen::MatrixXcd& T, Eigen::MatrixXcd& U) {
  Eigen::Index next = 0;
  for (Eigen::Index j = 0; j < T.rows(); ++j) {
    if (T(j, j).real() < 0.0) {
      for (Eigen::Index k = j - 1; k >= next; --k) swap_adjacent(T, U, k);
      ++next;
    }
  }
  return next;
}

// Solves Ac' X + X Ac = -C for symmetric C through the Kronecker form; n is
// small (at most a handful of states).
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& C) {
  const Eigen::Index n = Ac.rows();
  const Eigen::MatrixXd At = Ac.transpose();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n * n, n * n);
  // vec(At X) = (I kron At) vec X, vec(X Ac) = (Ac' kron I) vec X.
  for (Eigen::Index b = 0; b < n; ++b) {
    L.block(b * n, b * n, n, n) += At;
    for (Eigen::Index a = 0; a < n; ++a) {
      L.block(a * n, b * n, n, n) += At(a, b) * Eigen::MatrixXd::Identity(n, n);
    }
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(C.data(), n * n);
  const Eigen::VectorXd x = L.fullPivLu().solve(rhs);
  Eigen::MatrixXd X = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n);
  return 0.5 * (X + X.transpose());
}

bool pbh_full_rank(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double tol) {
  const Eigen::Index n = A.rows();
  if (n == 0) return true;
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  const double scale = std::max({1.0, A.norm(), B.norm()});
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex lambda = es.eigenvalues()[i];
    if (lambda.real() < -tol) continue;
    Eigen::MatrixXcd M(n, n + B.cols());
    M.leftCols(n) = A.cast<Complex>() - lambda * Eigen::MatrixXcd::Identity(n, n);
    M.rightCols(B.cols()) = B.cast<Complex>();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    const double smallest = svd.singularValues()[n - 1];
    if (smallest <= 1e-9 * scale) return false;
  }
  return true;
}

}  // namespace

void CostWeights::validate(Eigen::Index n, Eigen::Index m) const {
  if (Q.rows() != n || Q.cols() != n) throw ParameterError("Q must be n x n");
  if (R.rows() != m || R.cols() != m) throw ParameterError("R must be m x m");
  if (!Q.allFinite() || !R.allFinite()) throw ParameterError("Q and R must be finite");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, Q.norm())) {
    throw ParameterError("Q must be symmetric");
  }
  if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, R.norm())) {
    throw ParameterError("R must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> qs(Q, Eigen::EigenvaluesOnly);
  if (n > 0 && qs.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, Q.norm())) {
    throw ParameterError("Q must be positive semidefinite");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rs(R, Eigen::EigenvaluesOnly);
  if (m > 0 && rs.eigenvalues().minCoeff() <= 0.0) {
    throw ParameterError("R must be positive definite");
  }
}

CostWeights default_weights(envs::EnvKind kind) {
  const Eigen::Index n = envs::state_dim(kind);
  CostWeights w{Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Identity(1, 1)};
  if (kind == envs::EnvKind::Pendulum) {
    w.Q.diagonal() << 10.0, 0.1;
    w.R(0, 0) = 0.01;
  }
  return w;
}

double care_residual(const LinearSystem& sys, const CostWeights& w, const Eigen::MatrixXd& P) {
  const Eigen::MatrixXd BtP = sys.B.transpose() * P;
  const Eigen::MatrixXd res = sys.A.transpose() * P + P * sys.A -
                              BtP.transpose() * w.R.ldlt().solve(BtP) + w.Q;
  return res.norm();
}

bool is_stabilizable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double tol) {
  return pbh_full_rank(A, B, tol);
}

bool is_detectable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C, double tol) {
  return pbh_full_rank(A.transpose(), C.transpose(), tol);
}

Eigen::MatrixXd solve_care(const LinearSystem& sys, const CostWeights& w) {
  const Eigen::Index n = sys.A.rows();
  const Eigen::Index m = sys.B.cols();
  if (sys.A.cols() != n || sys.B.rows() != n) {
    throw ParameterError("A must be n x n and B must be n x m");
  }
  if (!sys.A.allFinite() || !sys.B.allFinite()) throw ParameterError("A and B must be finite");
  w.validate(n, m);
  if (!is_stabilizable(sys.A, sys.B)) {
    throw SynthesisError("(A, B) is not stabilizable: an unstable mode cannot be reached by B");
  }
  if (!is_detectable(sys.A, w.Q)) {
    throw SynthesisError("(A, Q) is not detectable: an unstable mode is invisible to Q");
  }

  const Eigen::MatrixXd G = sys.B * w.R.ldlt().solve(sys.B.transpose());
  Eigen::MatrixXd H(2 * n, 2 * n);
  H << sys.A, -G, -w.Q, -sys.A.transpose();

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(H.cast<Complex>());
  if (schur.info() != Eigen::Success) {
    throw ConvergenceError("Schur decomposition of the Hamiltonian did not converge");
  }
  Eigen::MatrixXcd T = schur.matrixT();
  Eigen::MatrixXcd U = schur.matrixU();
  if (order_stable_first(T, U) != n) {
    throw SynthesisError("Hamiltonian has eigenvalues on the imaginary axis");
  }
  const Eigen::MatrixXcd U1 = U.topLeftCorner(n, n);
  const Eigen::MatrixXcd U2 = U.bottomLeftCorner(n, n);
  // P = U2 U1^-1, solved as U1' P' = U2'.
  const Eigen::MatrixXcd Pt = U1.transpose().fullPivLu().solve(U2.transpose());
  Eigen::MatrixXd P = Pt.transpose().real();
  P = 0.5 * (P + P.transpose());

  // Newton-Kleinman polish; each step solves a Lyapunov equation.
  double res = care_residual(sys, w, P);
  for (int it = 0; it < 8 && res > 0.0; ++it) {
    const Eigen::MatrixXd K = w.R.ldlt().solve(sys.B.transpose() * P);
    const Eigen::MatrixXd Ac = sys.A - sys.B * K;
    const Eigen::MatrixXd X = solve_lyapunov(Ac, w.Q + K.transpose() * w.R * K);
    const double res_x = care_residual(sys, w, X);
    if (!(res_x < res)) break;
    P = X;
    res = res_x;
  }
  if (!(res < 1e-8 * (1.0 + P.norm()))) {
    throw ConvergenceError("Riccati residual " + std::to_string(res) + " above tolerance");
  }
  return P;
}

GainMatrix lqr_gain(const LinearSystem& sys, const CostWeights& w) {
  const Eigen::MatrixXd P = solve_care(sys, w);
  return GainMatrix{w.R.ldlt().solve(sys.B.transpose() * P)};
}

std::vector<Complex> closed_loop_eigenvalues(const LinearSystem& sys, const GainMatrix& gain) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(sys.A - sys.B * gain.K, false);
  std::vector<Complex> out(es.eigenvalues().begin(), es.eigenvalues().end());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

Synthesis synthesize(const LinearSystem& sys, const CostWeights& w) {
  Synthesis s;
  s.P = solve_care(sys, w);
  s.gain.K = w.R.ldlt().solve(sys.B.transpose() * s.P);
  s.closed_loop = closed_loop_eigenvalues(sys, s.gain);
  s.residual = care_residual(sys, w, s.P);
  s.max_real_eig = -std::numeric_limits<double>::infinity();
  for (const Complex& e : s.closed_loop) s.max_real_eig = std::max(s.max_real_eig, e.real());
  return s;
}

policy::LinearPolicy to_linear_policy(const GainMatrix& gain, const envs::ObservationMap& map,
                                      const ObsVec& operating_obs, double equilibrium_action) {
  const Eigen::Index D = static_cast<Eigen::Index>(map.state_index.size());
  const Eigen::Index n = map.state_dim;
  if (gain.K.cols() != n) {
    throw ParameterError("gain has " + std::to_string(gain.K.cols()) + " columns but the state has " +
                         std::to_string(n) + " components");
  }
  if (operating_obs.size() != D) throw ParameterError("operating observation has the wrong size");
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  policy::LinearPolicy lin;
  lin.W = Eigen::MatrixXd::Zero(gain.K.rows(), D);
  for (Eigen::Index i = 0; i < D; ++i) {
    const auto& idx = map.state_index[static_cast<std::size_t>(i)];
    if (!idx) continue;
    if (*idx < 0 || *idx >= n) throw ParameterError("observation map refers to a missing state");
    ++seen[static_cast<std::size_t>(*idx)];
    lin.W.col(i) = -gain.K.col(*idx);
  }
  for (int count : seen) {
    if (count != 1) throw ParameterError("observation map must cover every state exactly once");
  }
  lin.b = Eigen::VectorXd::Constant(gain.K.rows(), equilibrium_action) - lin.W * operating_obs.vec();
  return lin;
}

}  // namespace hybridrl::lqr
