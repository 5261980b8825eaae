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

#include <complex>
#include <vector>

#include "hybridrl/envs.hpp"
#include "hybridrl/policy.hpp"
#include "hybridrl/types.hpp"

namespace hybridrl::lqr {

/// Quadratic cost weights: Q symmetric PSD (n x n), R symmetric PD (m x m).
struct CostWeights {
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;

  void validate(Eigen::Index n, Eigen::Index m) const;
};

/// Per-environment defaults. The pendulum uses a stiffer angle weight than
/// identity so that the nominal gain stays stabilizing when the mass or g is
/// scaled anywhere in [0.5, 5] under zero-order hold at dt = 0.05.
CostWeights default_weights(envs::EnvKind kind);

/// State feedback u = -K x.
struct GainMatrix {
  Eigen::MatrixXd K;
};

// Frobenius norm of A'P + PA - P B R^-1 B' P + Q.
double care_residual(const LinearSystem& sys, const CostWeights& w, const Eigen::MatrixXd& P);

// PBH rank test on every eigenvalue of A with Re >= -tol.
bool is_stabilizable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double tol = 1e-9);
bool is_detectable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C, double tol = 1e-9);

/// Stabilizing solution of the continuous algebraic Riccati equation
///
///   A'P + PA - P B R^-1 B' P + Q = 0.
///
/// The stable invariant subspace of the Hamiltonian [A, -BR^-1B'; -Q, -A'] is
/// taken from an ordered complex Schur form, then polished with Newton-Kleinman
/// steps. Throws SynthesisError when (A, B) is not stabilizable or (A, Q) is
/// not detectable, and ConvergenceError when the residual stays above
/// 1e-8 (1 + ||P||_F).
Eigen::MatrixXd solve_care(const LinearSystem& sys, const CostWeights& w);

// K = R^-1 B' P.
GainMatrix lqr_gain(const LinearSystem& sys, const CostWeights& w);

std::vector<std::complex<double>> closed_loop_eigenvalues(const LinearSystem& sys,
                                                          const GainMatrix& gain);

// Everything cmd_synthesize reports.
struct Synthesis {
  Eigen::MatrixXd P;
  GainMatrix gain;
  std::vector<std::complex<double>> closed_loop;
  double residual = 0.0;
  double max_real_eig = 0.0;
};

Synthesis synthesize(const LinearSystem& sys, const CostWeights& w);

/// Maps a gain on physical coordinates to a linear policy on observations:
/// W gets -K against the observation component that locally equals each
/// state, zero against locally constant components, and b makes
/// W a + b = equilibrium_action. Throws ParameterError on a shape mismatch.
policy::LinearPolicy to_linear_policy(const GainMatrix& gain, const envs::ObservationMap& map,
                                      const ObsVec& operating_obs, double equilibrium_action = 0.0);

}  // namespace hybridrl::lqr
