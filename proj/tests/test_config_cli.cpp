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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "hybridrl/commands.hpp"
#include "hybridrl/config.hpp"
#include "hybridrl/errors.hpp"
#include "hybridrl/policy.hpp"
#include "test_support.hpp"

namespace hybridrl {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI with stdout/stderr captured into `log`; returns the exit status.
int run_cli(const std::string& args, const fs::path& log, const std::string& env = {}) {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" HYBRIDRL_CLI "\" " + args + " > \"" +
                          log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Budget small enough for a unit test.
const std::string kQuickTrain =
    "-s train.population=4 -s train.max_iterations=2 -s train.episodes=1 -s train.horizon=50";

TEST(KeyValuesTest, ParsesCommentsAndWhitespace) {
  config::KeyValues kv;
  kv.parse("# comment\nenv = cartpole\n\n  env.g=9.5  \n");
  EXPECT_EQ(kv.values().at("env"), "cartpole");
  EXPECT_EQ(kv.values().at("env.g"), "9.5");
  kv.set_assignment("seed=4");
  EXPECT_EQ(kv.values().at("seed"), "4");
  EXPECT_THROW(kv.set_assignment("seed"), ParameterError);
}

TEST(KeyValuesTest, MalformedLineReportsOffset) {
  config::KeyValues kv;
  try {
    kv.parse("env = pendulum\nno equals sign\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 15u);
  }
}

TEST(RunConfigTest, DefaultsAndOverrides) {
  config::KeyValues kv;
  kv.parse("env = cartpole\nenv.M = 2.5\nlqr.q = 1 2 3 4\ntrain.population = 12\n");
  const config::RunConfig cfg = config::resolve(kv);
  EXPECT_EQ(cfg.kind(), envs::EnvKind::CartPole);
  EXPECT_EQ(cfg.params.M, 2.5);
  EXPECT_EQ(cfg.params.m, envs::default_params(envs::EnvKind::CartPole).m);
  EXPECT_EQ(cfg.weights.Q(3, 3), 4.0);
  EXPECT_EQ(cfg.train.population, 12);
}

TEST(RunConfigTest, RejectsUnknownAndInvalidKeys) {
  config::KeyValues kv;
  kv.parse("env = pendulum\nenv.mass = 2\n");
  EXPECT_THROW(config::resolve(kv), ParameterError);
  config::KeyValues bad;
  bad.parse("env = pendulum\nenv.dt = -0.1\n");
  EXPECT_THROW(config::resolve(bad), ParameterError);
  config::KeyValues shape;
  shape.parse("env = pendulum\nlqr.q = 1 2 3\n");
  EXPECT_THROW(config::resolve(shape), ParameterError);
}

TEST(RunConfigTest, CanonicalTextRoundTrips) {
  config::KeyValues kv;
  kv.parse("env = mountaincar\nseed = 9\npolicy.centers = 20\nrobust.jitter = 0.01\n");
  const config::RunConfig cfg = config::resolve(kv);
  config::KeyValues again;
  again.parse(cfg.canonical());
  const config::RunConfig back = config::resolve(again);
  EXPECT_EQ(back.canonical(), cfg.canonical());
  EXPECT_EQ(back.hash(), cfg.hash());
  config::KeyValues other = kv;
  other.set("seed", "10");
  EXPECT_NE(config::resolve(other).hash(), cfg.hash());
  other = kv;
  other.set("train.threads", "3");
  EXPECT_EQ(config::resolve(other).hash(), cfg.hash());
}

TEST(VerifyTest, FreshHybridPassesEveryProperty) {
  config::KeyValues kv;
  kv.parse("env = cartpole\n");
  const config::RunConfig cfg = config::resolve(kv);
  const cli::PolicySet set = cli::build_policies(cfg);
  for (const cli::PropertyResult& r : cli::verify_policy(set.hybrid, cfg)) {
    if (r.applicable) {
      EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
    }
  }
}

TEST(VerifyTest, TamperedGainIsCaught) {
  config::KeyValues kv;
  kv.parse("env = pendulum\n");
  const config::RunConfig cfg = config::resolve(kv);
  policy::HybridPolicy p = cli::build_policies(cfg).hybrid;
  p.linear.W(0, 1) *= 1.01;
  bool caught = false;
  for (const cli::PropertyResult& r : cli::verify_policy(p, cfg)) caught |= r.applicable && !r.passed;
  EXPECT_TRUE(caught);
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::scratch_dir("cli"); }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  fs::path log() const { return dir_ / "log.txt"; }
};

TEST_F(CliTest, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run_cli("", log()), 2);
  EXPECT_EQ(run_cli("frobnicate", log()), 2);
  EXPECT_EQ(run_cli("synthesize --env jupiter -o \"" + dir_.string() + "\"", log()), 2);
  EXPECT_EQ(run_cli("synthesize -s env.bogus=1 -o \"" + dir_.string() + "\"", log()), 2);
  EXPECT_EQ(run_cli("--help", log()), 0);
}

TEST_F(CliTest, SynthesizeThenVerify) {
  const std::string out = " -o \"" + dir_.string() + "\"";
  ASSERT_EQ(run_cli("synthesize --env pendulum" + out, log()), 0) << slurp(log());
  for (const char* f : {"crosscheck.txt", "linear_system.txt", "gain_K.csv", "riccati_P.csv",
                        "linear_policy.txt", "hybrid_policy.txt", "synthesis_report.txt"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  }
  const std::string policy = (dir_ / "hybrid_policy.txt").string();
  EXPECT_EQ(run_cli("verify --env pendulum -p \"" + policy + "\"" + out, log()), 0) << slurp(log());
  EXPECT_NE(slurp(log()).find("PASS"), std::string::npos);

  policy::HybridPolicy p = policy::load_policy(policy);
  p.linear.W(0, 2) += 0.5;
  policy::save_policy(p, dir_ / "tampered.txt");
  EXPECT_EQ(run_cli("verify --env pendulum -p \"" + (dir_ / "tampered.txt").string() + "\"" + out,
                    log()),
            1);
  EXPECT_NE(slurp(log()).find("FAIL"), std::string::npos);

  // Environment mismatch between the file and the config.
  EXPECT_EQ(run_cli("verify --env cartpole -p \"" + policy + "\"" + out, log()), 2);
}

TEST_F(CliTest, VerifyRejectsUnreadablePolicies) {
  const std::string out = " -o \"" + dir_.string() + "\"";
  ASSERT_EQ(run_cli("synthesize --env pendulum" + out, log()), 0);
  std::string text = slurp(dir_ / "hybrid_policy.txt");
  const auto at = text.find("lambda = 3\n");
  ASSERT_NE(at, std::string::npos);
  text.replace(at + 11, 1, "-");
  std::ofstream(dir_ / "negative.txt") << text;
  EXPECT_NE(run_cli("verify --env pendulum -p \"" + (dir_ / "negative.txt").string() + "\"" + out,
                    log()),
            0);
  EXPECT_NE(run_cli("verify --env pendulum -p \"" + (dir_ / "missing.txt").string() + "\"" + out,
                    log()),
            0);
  std::ofstream(dir_ / "truncated.txt") << text.substr(0, text.size() / 3);
  EXPECT_NE(run_cli("verify --env pendulum -p \"" + (dir_ / "truncated.txt").string() + "\"" + out,
                    log()),
            0);
  EXPECT_NE(slurp(log()).find("offset"), std::string::npos);
}

TEST_F(CliTest, UncontrollableModelFailsSynthesis) {
  const int code = run_cli("synthesize --env pendulum -s model.zero_input=true -s env.g=0 -o \"" +
                               dir_.string() + "\"",
                           log());
  EXPECT_EQ(code, 1) << slurp(log());
  EXPECT_FALSE(fs::exists(dir_ / "gain_K.csv"));
}

TEST_F(CliTest, TrainingIsReproducibleForSeed) {
  const fs::path a = dir_ / "a", b = dir_ / "b";
  for (const fs::path& d : {a, b}) {
    ASSERT_EQ(run_cli("synthesize --env pendulum --seed 7 -o \"" + d.string() + "\"", log()), 0);
    ASSERT_EQ(run_cli("train --env pendulum --seed 7 " + kQuickTrain + " --linear \"" +
                          (d / "linear_policy.txt").string() + "\" -o \"" + d.string() + "\"",
                      log()),
              0)
        << slurp(log());
  }
  EXPECT_EQ(slurp(a / "train_report_hybrid.csv"), slurp(b / "train_report_hybrid.csv"));
  EXPECT_EQ(slurp(a / "policy_hybrid.txt"), slurp(b / "policy_hybrid.txt"));
  EXPECT_NE(slurp(a / "train_status_hybrid.txt").find("target not reached"), std::string::npos);
  EXPECT_FALSE(fs::is_empty(a / "checkpoints"));
}

TEST_F(CliTest, BaselineNeedsNoLinearPart) {
  ASSERT_EQ(run_cli("train --env pendulum --mode baseline " + kQuickTrain + " -o \"" +
                        dir_.string() + "\"",
                    log()),
            0)
      << slurp(log());
  EXPECT_EQ(policy::load_policy(dir_ / "policy_baseline.txt").mode, policy::Mode::Nonlinear);
  EXPECT_EQ(run_cli("train --env pendulum --mode both -o \"" + dir_.string() + "\"", log()), 2);
}

TEST_F(CliTest, RespondAndRobustAreReproducible) {
  const std::string out = " -o \"" + dir_.string() + "\"";
  ASSERT_EQ(run_cli("synthesize --env pendulum" + out, log()), 0);
  const std::string pols = " -p \"" + (dir_ / "linear_policy.txt").string() + "\" -p \"" +
                           (dir_ / "hybrid_policy.txt").string() + "\"";
  ASSERT_EQ(run_cli("respond --env pendulum --kind impulse" + pols + out, log()), 0) << slurp(log());
  const std::string first = slurp(dir_ / "metrics_impulse.csv");
  ASSERT_EQ(run_cli("respond --env pendulum --kind impulse" + pols + out, log()), 0);
  EXPECT_EQ(slurp(dir_ / "metrics_impulse.csv"), first);
  EXPECT_TRUE(fs::exists(dir_ / "trajectory_impulse_hybrid_policy.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "response_impulse.svg"));
  EXPECT_EQ(run_cli("respond --env pendulum --kind bogus" + pols + out, log()), 2);

  ASSERT_EQ(run_cli("robust --env pendulum --parameter g --factors 0.5,1,2 --seeds 2" + pols + out,
                    log()),
            0)
      << slurp(log());
  const std::string curve = slurp(dir_ / "robust_gravity_hybrid_policy.csv");
  ASSERT_EQ(run_cli("robust --env pendulum --parameter g --factors 0.5,1,2 --seeds 2" + pols + out,
                    log()),
            0);
  EXPECT_EQ(slurp(dir_ / "robust_gravity_hybrid_policy.csv"), curve);
  EXPECT_EQ(run_cli("robust --env pendulum --factors 0.1,1" + pols + out, log()), 2);
}

TEST_F(CliTest, OutputRootVariableIsHonoured) {
  ASSERT_EQ(run_cli("synthesize --env mountaincar", log(),
                    std::string(cli::kOutputRootVar) + "=\"" + dir_.string() + "\""),
            0)
      << slurp(log());
  EXPECT_TRUE(fs::exists(dir_ / "mountaincar" / "gain_K.csv"));
}

}  // namespace
}  // namespace hybridrl
