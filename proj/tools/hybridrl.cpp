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

#include <iostream>

#include "CLI11.hpp"
#include "hybridrl/commands.hpp"

namespace cli = hybridrl::cli;

namespace {

void add_common(CLI::App* sub, cli::CommonOptions& c) {
  sub->add_option("-c,--config", c.config_files, "Config file(s), applied in order");
  sub->add_option("-s,--set", c.overrides, "Override a config key (key=value)");
  sub->add_option("--env", c.env, "Environment: pendulum, cartpole or mountaincar");
  sub->add_option("--seed", c.seed, "Global seed");
  sub->add_option("-o,--out", c.out, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LQR-anchored hybrid controllers for classic control tasks"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  cli::CommonOptions common;
  cli::TrainOptions train;
  cli::RespondOptions respond;
  cli::RobustOptions robust;
  cli::VerifyOptions verify;

  auto* synth = app.add_subcommand("synthesize", "Linearize, solve the LQR problem, write policies");
  add_common(synth, common);

  auto* tr = app.add_subcommand("train", "Train the nonlinear part with the cross-entropy method");
  add_common(tr, common);
  tr->add_option("--mode", train.mode, "hybrid or baseline (pure nonlinear policy)")
      ->check(CLI::IsMember({"hybrid", "baseline"}));
  tr->add_option("--linear", train.linear, "Policy file providing the linear part");

  auto* resp = app.add_subcommand("respond", "Impulse or step response metrics");
  add_common(resp, common);
  resp->add_option("-p,--policy", respond.policies, "Policy file(s)")->required();
  resp->add_option("-k,--kind", respond.kind, "impulse or step")
      ->required()
      ->check(CLI::IsMember({"impulse", "step"}));
  resp->add_option("--magnitude", respond.magnitude, "Disturbance magnitude");
  resp->add_option("--horizon", respond.horizon, "Timesteps to simulate");

  auto* rob = app.add_subcommand("robust", "Sweep a physical parameter and record rewards");
  add_common(rob, common);
  rob->add_option("-p,--policy", robust.policies, "Policy file(s)")->required();
  rob->add_option("--parameter", robust.parameter, "mass or gravity");
  rob->add_option("--factors", robust.factors, "lo:hi:n (log-spaced) or a,b,c");
  rob->add_option("--seeds", robust.seeds, "Rollouts per factor");

  auto* ver = app.add_subcommand("verify", "Check policy identities and relevance laws");
  add_common(ver, common);
  ver->add_option("-p,--policy", verify.policy, "Policy file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  }

  if (*synth) return cli::cmd_synthesize(common, std::cout, std::cerr);
  if (*tr) return cli::cmd_train(common, train, std::cout, std::cerr);
  if (*resp) return cli::cmd_respond(common, respond, std::cout, std::cerr);
  if (*rob) return cli::cmd_robust(common, robust, std::cout, std::cerr);
  return cli::cmd_verify(common, verify, std::cout, std::cerr);
}
