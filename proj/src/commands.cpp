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

#include "hybridrl/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

#include "hybridrl/analysis.hpp"
#include "hybridrl/errors.hpp"
#include "hybridrl/report.hpp"
#include "hybridrl/text_format.hpp"
#include "hybridrl/trainer.hpp"

namespace hybridrl::cli {

namespace fs = std::filesystem;

namespace {

using text::format_double;

// Runs `body`, mapping exceptions to exit codes and a one-line diagnostic.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SynthesisError& e) {
    err << "synthesis failed: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

policy::HybridPolicy read_policy(const std::string& path) {
  std::string contents;
  try {
    contents = text::read_file(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  try {
    return policy::deserialize(contents);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + std::string(e.what()).substr(0, std::string(e.what()).rfind(" (at")),
                     e.offset());
  } catch (const ParameterError& e) {
    throw ParameterError(path + ": invalid policy: " + e.what());
  }
}

void check_env(const policy::HybridPolicy& p, const config::RunConfig& cfg, const std::string& path) {
  if (p.env_name != envs::to_string(cfg.kind())) {
    throw UsageError(path + " is a " + p.env_name + " policy but the run is configured for " +
                     std::string(envs::to_string(cfg.kind())));
  }
  if (p.obs_dim() != envs::obs_dim(cfg.kind()) || p.control_dim() != 1) {
    throw ParameterError(path + ": policy shape does not match the environment");
  }
}

std::string fmt_matrix(const Eigen::MatrixXd& m) {
  std::string s;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    s += "  ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%14.6g", m(r, c));
      s += buf;
    }
    s += "\n";
  }
  return s;
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Samples observations uniformly in the environment box.
std::vector<ObsVec> sample_box(envs::EnvKind kind, int count, std::uint64_t seed) {
  const envs::ObsBox box = envs::observation_box(kind);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ObsVec> out;
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd x(box.lo.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit(rng);
    out.emplace_back(x);
  }
  return out;
}

}  // namespace

config::RunConfig load_run_config(const CommonOptions& opts) {
  config::KeyValues kv;
  for (const auto& file : opts.config_files) {
    if (!fs::exists(file)) throw UsageError("config file '" + file + "' does not exist");
    try {
      kv.load(file);
    } catch (const ParseError& e) {
      throw UsageError(file + ": " + e.what());
    }
  }
  try {
    for (const auto& o : opts.overrides) kv.set_assignment(o);
    if (opts.env) kv.set("env", *opts.env);
    if (opts.seed) kv.set("seed", std::to_string(*opts.seed));
    return config::resolve(kv);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
}

fs::path output_dir(const config::RunConfig& cfg, const CommonOptions& opts) {
  if (opts.out) return fs::path(*opts.out);
  const char* root = std::getenv(kOutputRootVar);
  const fs::path base = root && *root ? fs::path(root) : fs::path(".");
  return base / (cfg.output.empty() ? std::string(envs::to_string(cfg.kind())) : cfg.output);
}

LinearSystem synthesis_model(const config::RunConfig& cfg) {
  LinearSystem sys = envs::analytic_linearization(cfg.params);
  if (cfg.zero_input) sys.B.setZero();
  return sys;
}

PolicySet build_policies(const config::RunConfig& cfg) {
  PolicySet set;
  set.system = synthesis_model(cfg);
  set.synthesis = lqr::synthesize(set.system, cfg.weights);
  const envs::EnvKind kind = cfg.kind();
  const ObsVec a = envs::observe(kind, envs::operating_state(kind));
  const policy::LinearPolicy lin =
      lqr::to_linear_policy(set.synthesis.gain, envs::observation_map(kind), a);
  const envs::ObsBox box = envs::observation_box(kind);
  const std::string name(envs::to_string(kind));
  set.hybrid = policy::make_policy(name, policy::Mode::Hybrid, lin, a.vec(), box.lo, box.hi,
                                   cfg.params.u_max, cfg.centers, cfg.weight_scale, cfg.seed);
  set.hybrid.relevance.lambda.setConstant(cfg.lambda_init);
  set.linear = set.hybrid;
  set.linear.mode = policy::Mode::Linear;
  return set;
}

policy::HybridPolicy baseline_policy(const config::RunConfig& cfg) {
  const envs::EnvKind kind = cfg.kind();
  const ObsVec a = envs::observe(kind, envs::operating_state(kind));
  const Eigen::Index d = a.size();
  policy::LinearPolicy zero{Eigen::MatrixXd::Zero(1, d), Eigen::VectorXd::Zero(1)};
  const envs::ObsBox box = envs::observation_box(kind);
  policy::HybridPolicy p =
      policy::make_policy(std::string(envs::to_string(kind)), policy::Mode::Nonlinear, zero,
                          a.vec(), box.lo, box.hi, cfg.params.u_max, cfg.centers,
                          cfg.weight_scale, cfg.seed);
  p.relevance.lambda.setConstant(cfg.lambda_init);
  return p;
}

int cmd_synthesize(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const config::RunConfig cfg = load_run_config(opts);
    const fs::path dir = output_dir(cfg, opts);
    const envs::EnvKind kind = cfg.kind();
    const std::string header = cfg.header("hybridrl synthesize");

    // Cross-check the analytic model against central differences of the
    // simulated dynamics before trusting it.
    const LinearSystem analytic = envs::analytic_linearization(cfg.params);
    const envs::Linearization numeric =
        envs::linearize_numerical(cfg.params, envs::operating_state(kind), 0.0);
    bool cross_ok = numeric.at_equilibrium;
    std::string cross = header;
    cross += "# numerical vs analytic linearization: rel tol 1e-3, abs tol 1e-6 on zeros\n";
    auto compare = [&](const char* name, const Eigen::MatrixXd& an, const Eigen::MatrixXd& nu) {
      for (Eigen::Index r = 0; r < an.rows(); ++r) {
        for (Eigen::Index c = 0; c < an.cols(); ++c) {
          const double diff = std::abs(an(r, c) - nu(r, c));
          const bool ok = an(r, c) == 0.0 ? diff <= 1e-6 : diff <= 1e-3 * std::abs(an(r, c));
          cross_ok = cross_ok && ok;
          cross += std::string(name) + "(" + std::to_string(r) + "," + std::to_string(c) +
                   ") analytic=" + format_double(an(r, c)) + " numerical=" + format_double(nu(r, c)) +
                   (ok ? " ok\n" : " MISMATCH\n");
        }
      }
    };
    compare("A", analytic.A, numeric.system.A);
    compare("B", analytic.B, numeric.system.B);
    cross += std::string("result = ") + (cross_ok ? "pass" : "fail") + "\n";
    text::write_file(dir / "crosscheck.txt", cross);

    std::string sys_text = header;
    const LinearSystem model = synthesis_model(cfg);
    sys_text += "A =\n" + fmt_matrix(model.A) + "B =\n" + fmt_matrix(model.B);
    text::write_file(dir / "linear_system.txt", sys_text);

    const PolicySet set = build_policies(cfg);
    const lqr::Synthesis& s = set.synthesis;
    text::write_file(dir / "gain_K.csv", report::matrix_csv(s.gain.K, header));
    text::write_file(dir / "riccati_P.csv", report::matrix_csv(s.P, header));
    policy::save_policy(set.linear, dir / "linear_policy.txt", header);
    policy::save_policy(set.hybrid, dir / "hybrid_policy.txt", header);

    std::string rep = header;
    rep += "Q diagonal = ";
    for (Eigen::Index i = 0; i < cfg.weights.Q.rows(); ++i) rep += format_double(cfg.weights.Q(i, i)) + " ";
    rep += "\nR = " + format_double(cfg.weights.R(0, 0)) + "\n";
    rep += "K =\n" + fmt_matrix(s.gain.K);
    rep += "closed-loop eigenvalues:\n";
    for (const auto& e : s.closed_loop) {
      rep += "  " + format_double(e.real()) + (e.imag() < 0 ? " - " : " + ") +
             format_double(std::abs(e.imag())) + "j\n";
    }
    rep += "max Re eig(A - BK) = " + format_double(s.max_real_eig) + "\n";
    rep += "riccati residual = " + format_double(s.residual) + "\n";
    rep += "riccati tolerance = " + format_double(1e-8 * (1.0 + s.P.norm())) + "\n";
    rep += std::string("linearization cross-check = ") + (cross_ok ? "pass" : "fail") + "\n";
    text::write_file(dir / "synthesis_report.txt", rep);

    out << rep.substr(header.size()) << "wrote " << dir.string() << "\n";
    if (!cross_ok) {
      err << "linearization cross-check failed; see " << (dir / "crosscheck.txt").string() << "\n";
      return kExitFailure;
    }
    return kExitOk;
  });
}

int cmd_train(const CommonOptions& opts, const TrainOptions& t, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (t.mode != "hybrid" && t.mode != "baseline") {
      throw UsageError("--mode must be hybrid or baseline");
    }
    if (t.mode == "baseline" && t.linear) throw UsageError("--linear only applies to hybrid mode");
    const config::RunConfig cfg = load_run_config(opts);
    const fs::path dir = output_dir(cfg, opts);

    policy::HybridPolicy initial;
    if (t.mode == "baseline") {
      initial = baseline_policy(cfg);
    } else {
      initial = build_policies(cfg).hybrid;
      if (t.linear) {
        const policy::HybridPolicy given = read_policy(*t.linear);
        check_env(given, cfg, *t.linear);
        initial.linear = given.linear;
        initial.relevance.a = given.relevance.a;
      }
    }

    const std::string header = cfg.header("hybridrl train mode=" + t.mode);
    const fs::path ckpt = dir / "checkpoints";
    const auto result = trainer::train(
        initial, cfg.train, cfg.params, cfg.cost,
        [&](int iter, const policy::HybridPolicy& p, double best) {
          char name[64];
          std::snprintf(name, sizeof name, "%s_iter_%04d.txt", t.mode.c_str(), iter);
          policy::save_policy(p, ckpt / name, header + "# best_return=" + format_double(best) + "\n");
        });

    text::write_file(dir / ("train_report_" + t.mode + ".csv"),
                     report::train_csv(result.report, header));
    policy::save_policy(result.policy, dir / ("policy_" + t.mode + ".txt"), header);
    const trainer::HoldCheck hold = trainer::check_hold(result.policy, cfg.params);
    const std::string status = hold.reached ? "target reached" : "target not reached";
    const double best =
        result.report.iterations.empty() ? 0.0 : result.report.iterations.back().best_return;
    std::string st = header;
    st += "status = " + status + "\n";
    st += "worst_tail_error = " + format_double(hold.worst_tail_error) + "\n";
    st += "best_return = " + format_double(best) + "\n";
    st += "episodes = " + std::to_string(result.report.episodes) + "\n";
    st += "sim_time_s = " + format_double(result.report.sim_time_s) + "\n";
    text::write_file(dir / ("train_status_" + t.mode + ".txt"), st);

    out << "status: " << status << "\n"
        << "best return " << best << ", hold error " << hold.worst_tail_error
        << (envs::monitored_is_angle(cfg.kind()) || cfg.kind() == envs::EnvKind::CartPole ? " deg" : " m")
        << "\n"
        << result.report.episodes << " episodes, " << result.report.sim_time_s
        << " s simulated, " << result.report.wall_clock_s << " s wall clock\n"
        << "wrote " << dir.string() << "\n";
    return kExitOk;
  });
}

int cmd_respond(const CommonOptions& opts, const RespondOptions& r, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    if (r.kind != "impulse" && r.kind != "step") throw UsageError("--kind must be impulse or step");
    if (r.policies.empty()) throw UsageError("at least one --policy is required");
    if (r.horizon && *r.horizon < 1) throw UsageError("--horizon must be positive");
    std::vector<policy::HybridPolicy> policies;
    for (const auto& path : r.policies) policies.push_back(read_policy(path));
    CommonOptions o = opts;
    if (!o.env) o.env = policies.front().env_name;
    const config::RunConfig cfg = load_run_config(o);
    for (std::size_t i = 0; i < policies.size(); ++i) check_env(policies[i], cfg, r.policies[i]);

    const fs::path dir = output_dir(cfg, opts);
    const bool impulse = r.kind == "impulse";
    const double magnitude = r.magnitude.value_or(impulse ? cfg.impulse : cfg.step);
    const int horizon = r.horizon.value_or(
        cfg.response_horizon > 0 ? cfg.response_horizon : analysis::default_response_horizon(cfg.kind()));
    const std::string header = cfg.header("hybridrl respond kind=" + r.kind) +
                               "# magnitude=" + format_double(magnitude) +
                               " horizon=" + std::to_string(horizon) + "\n";

    std::vector<std::string> rows;
    std::vector<report::Series> series;
    const std::string env(envs::to_string(cfg.kind()));
    for (std::size_t i = 0; i < policies.size(); ++i) {
      const std::string label = stem(r.policies[i]);
      const analysis::Response resp =
          impulse ? analysis::impulse_response(policies[i], cfg.params, cfg.cost, magnitude, horizon)
                  : analysis::step_response(policies[i], cfg.params, cfg.cost, magnitude, horizon);
      text::write_file(dir / ("trajectory_" + r.kind + "_" + label + ".csv"),
                       report::trajectory_csv(resp.trajectory, header));
      const analysis::ResponseMetrics m[] = {resp.metrics};
      rows.push_back(report::metrics_row(env, label, m));
      report::Series s{label, {}, resp.trajectory.monitored(), {}};
      for (std::size_t k = 0; k < s.y.size(); ++k) s.x.push_back(static_cast<double>(k));
      series.push_back(std::move(s));
      const double r_min = resp.trajectory.relevance.empty()
                               ? 1.0
                               : *std::min_element(resp.trajectory.relevance.begin(),
                                                   resp.trajectory.relevance.end());
      out << rows.back() << "  (min r(x) " << r_min << ")\n";
    }
    text::write_file(dir / ("metrics_" + r.kind + ".csv"), report::metrics_csv(rows, header));
    const std::string unit = envs::monitored_is_angle(cfg.kind()) ? "deg" : "m";
    text::write_file(dir / ("response_" + r.kind + ".svg"),
                     report::svg_line_chart(env + " " + r.kind + " response", "timestep",
                                            std::string(envs::state_names(cfg.kind())[static_cast<std::size_t>(
                                                envs::monitored_index(cfg.kind()))]) +
                                                " [" + unit + "]",
                                            series));
    out << "wrote " << dir.string() << "\n";
    return kExitOk;
  });
}

int cmd_robust(const CommonOptions& opts, const RobustOptions& r, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    if (r.policies.empty()) throw UsageError("at least one --policy is required");
    analysis::SweepParameter which;
    std::vector<double> factors;
    try {
      which = analysis::parse_sweep_parameter(r.parameter);
      factors = analysis::parse_factors(r.factors);
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
    if (r.seeds && *r.seeds < 1) throw UsageError("--seeds must be positive");
    std::vector<policy::HybridPolicy> policies;
    for (const auto& path : r.policies) policies.push_back(read_policy(path));
    CommonOptions o = opts;
    if (!o.env) o.env = policies.front().env_name;
    const config::RunConfig cfg = load_run_config(o);
    for (std::size_t i = 0; i < policies.size(); ++i) check_env(policies[i], cfg, r.policies[i]);

    const fs::path dir = output_dir(cfg, opts);
    const int seeds = r.seeds.value_or(cfg.robust_seeds);
    const std::string header = cfg.header("hybridrl robust") + "# horizon=" +
                               std::to_string(cfg.robust_horizon) +
                               " jitter=" + format_double(cfg.robust_jitter) + "\n";
    std::vector<report::Series> series;
    for (std::size_t i = 0; i < policies.size(); ++i) {
      const std::string label = stem(r.policies[i]);
      const analysis::RobustnessCurve curve = analysis::robustness_sweep(
          policies[i], cfg.params, cfg.cost, which, factors, seeds, cfg.seed, cfg.robust_horizon,
          cfg.robust_jitter, cfg.train.threads);
      text::write_file(dir / ("robust_" + curve.parameter + "_" + label + ".csv"),
                       report::curve_csv(curve, header));
      series.push_back({label, curve.factors, curve.mean_reward, curve.std_reward});
      out << label << ":";
      for (std::size_t k = 0; k < curve.factors.size(); ++k) {
        out << " " << curve.factors[k] << "->" << curve.mean_reward[k];
      }
      out << "\n";
    }
    const std::string name(analysis::to_string(which));
    text::write_file(dir / ("robust_" + name + ".svg"),
                     report::svg_line_chart(std::string(envs::to_string(cfg.kind())) + " " + name +
                                                " sweep",
                                            name + " factor", "mean cumulative reward", series));
    out << "wrote " << dir.string() << "\n";
    return kExitOk;
  });
}

std::vector<PropertyResult> verify_policy(const policy::HybridPolicy& p, const config::RunConfig& cfg) {
  p.validate();
  std::vector<PropertyResult> results;
  const ObsVec a(p.relevance.a);
  const bool has_linear = p.mode != policy::Mode::Nonlinear;
  const bool hybrid = p.mode == policy::Mode::Hybrid;
  const std::vector<ObsVec> samples = sample_box(cfg.kind(), 256, 12345);

  auto add = [&](std::string name, bool applicable, bool passed, std::string detail) {
    results.push_back({std::move(name), applicable, passed, std::move(detail)});
  };

  {
    const Eigen::VectorXd pi = policy::hybrid_action(a, p);
    const Eigen::VectorXd g = p.linear.eval(a);
    add("pi(a) = G(a)", has_linear, pi == g, "|diff| = " + format_double((pi - g).cwiseAbs().maxCoeff()));
  }
  {
    const double e = max_abs(policy::jacobian_state(a, p) - p.linear.W);
    add("analytic Jacobian at a = W (1e-10)", has_linear, e <= 1e-10, "max |diff| = " + format_double(e));
  }
  {
    const double e = max_abs(policy::jacobian_finite_difference(a, p) - p.linear.W);
    add("finite-difference Jacobian at a = W (1e-5)", has_linear, e <= 1e-5,
        "max |diff| = " + format_double(e));
  }
  {
    const lqr::Synthesis s = lqr::synthesize(synthesis_model(cfg), cfg.weights);
    const policy::LinearPolicy ref = lqr::to_linear_policy(s.gain, envs::observation_map(cfg.kind()), a);
    const double e = std::max(max_abs(ref.W - p.linear.W), max_abs(ref.b - p.linear.b));
    add("W, b match the LQR gain", has_linear, e <= 1e-6 * (1.0 + max_abs(ref.W)),
        "max |diff| = " + format_double(e));

    // Local closed loop with the policy's own Jacobian mapped to states.
    const LinearSystem sys = synthesis_model(cfg);
    const Eigen::MatrixXd J = policy::jacobian_state(a, p);
    const envs::ObservationMap map = envs::observation_map(cfg.kind());
    Eigen::MatrixXd Kx = Eigen::MatrixXd::Zero(1, sys.states());
    for (std::size_t i = 0; i < map.state_index.size(); ++i) {
      if (map.state_index[i]) Kx(0, *map.state_index[i]) += J(0, static_cast<Eigen::Index>(i));
    }
    const Eigen::MatrixXd Acl = sys.A + sys.B * Kx;
    const double re = Acl.eigenvalues().real().maxCoeff();
    add("local closed loop is stable", has_linear, re < 0.0, "max Re eig = " + format_double(re));
  }
  {
    bool ok = policy::relevance(a, p.relevance) == 1.0 &&
              policy::relevance_gradient(a, p.relevance).cwiseAbs().maxCoeff() == 0.0;
    for (const ObsVec& x : samples) {
      const double r = policy::relevance(x, p.relevance);
      ok = ok && r > 0.0 && r <= 1.0;
    }
    add("r in (0, 1], r(a) = 1, grad r(a) = 0", hybrid, ok, "");
  }
  {
    bool ok = true;
    for (const ObsVec& x : samples) {
      double prev = 1.0;
      for (double t = 0.1; t <= 2.0; t += 0.1) {
        const double r = policy::relevance(ObsVec(a.vec() + t * (x.vec() - a.vec())), p.relevance);
        ok = ok && r <= prev;
        prev = r;
      }
    }
    add("r non-increasing along rays from a", hybrid, ok, "");
  }
  {
    double worst = 0.0;
    for (double c : {0.25, 4.0, 100.0}) {
      policy::RelevanceParams scaled = p.relevance;
      scaled.lambda *= c;
      for (const ObsVec& x : samples) {
        const ObsVec y(a.vec() + std::sqrt(c) * (x.vec() - a.vec()));
        worst = std::max(worst, std::abs(policy::relevance(y, scaled) - policy::relevance(x, p.relevance)));
      }
    }
    add("r(a + sqrt(c)(x - a); c Lambda) = r(x; Lambda)", hybrid, worst <= 1e-12,
        "max |diff| = " + format_double(worst));
  }
  {
    bool ok = true;
    for (const ObsVec& x : samples) {
      const double pi = policy::hybrid_action(x, p)[0];
      const double g = p.linear.eval(x)[0];
      const double h = policy::rbf_eval(x, p.nonlinear)[0];
      const double slack = 1e-12 * (1.0 + std::abs(g) + std::abs(h));
      ok = ok && pi >= std::min(g, h) - slack && pi <= std::max(g, h) + slack;
    }
    add("pi(x) between G(x) and H(x)", hybrid, ok, "");
  }
  {
    // d divides by lambda, so r -> 0 (and pi -> H) as lambda -> 0.
    policy::HybridPolicy wide = p;
    wide.relevance.lambda.setConstant(1e-8);
    policy::RelevanceParams unit = p.relevance;
    unit.lambda.setOnes();
    double worst = 0.0;
    int used = 0;
    for (const ObsVec& x : samples) {
      if (policy::scaled_distance(x, unit) < 0.01) continue;
      ++used;
      const double h = policy::rbf_eval(x, wide.nonlinear)[0];
      const double pi = policy::hybrid_action(x, wide)[0];
      worst = std::max(worst, std::abs(pi - h) / (1.0 + std::abs(h)));
    }
    add("r -> 0 limit (lambda = 1e-8) gives pi -> H", hybrid, used > 0 && worst <= 1e-4,
        "max rel diff = " + format_double(worst) + " over " + std::to_string(used) + " samples");
  }
  return results;
}

int cmd_verify(const CommonOptions& opts, const VerifyOptions& v, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const policy::HybridPolicy p = read_policy(v.policy);
    CommonOptions o = opts;
    if (!o.env) o.env = p.env_name;
    const config::RunConfig cfg = load_run_config(o);
    check_env(p, cfg, v.policy);
    bool all = true;
    for (const PropertyResult& r : verify_policy(p, cfg)) {
      const char* tag = !r.applicable ? "SKIP" : r.passed ? "PASS" : "FAIL";
      all = all && (!r.applicable || r.passed);
      out << tag << "  " << r.name;
      if (!r.detail.empty()) out << "  (" << r.detail << ")";
      out << "\n";
    }
    out << (all ? "all properties hold\n" : "some properties failed\n");
    return all ? kExitOk : kExitFailure;
  });
}

}  // namespace hybridrl::cli
