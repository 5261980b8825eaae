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
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridrl/config.hpp"
#include "hybridrl/lqr.hpp"
#include "hybridrl/policy.hpp"

namespace hybridrl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Output root for runs without --out; defaults to the working directory.
inline constexpr const char* kOutputRootVar = "HYBRIDRL_OUTPUT_ROOT";

// Bad flags, config keys or values. Maps to kExitUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::vector<std::string> config_files;
  std::vector<std::string> overrides;  // key=value
  std::optional<std::string> env;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

// Files, then --set overrides, then --env/--seed. Throws UsageError.
config::RunConfig load_run_config(const CommonOptions& opts);

// --out, else $HYBRIDRL_OUTPUT_ROOT/<output key or env name>.
std::filesystem::path output_dir(const config::RunConfig& cfg, const CommonOptions& opts);

// The plant model used for synthesis: the analytic linearization at the
// operating point, with B zeroed when model.zero_input is set.
LinearSystem synthesis_model(const config::RunConfig& cfg);

struct PolicySet {
  LinearSystem system;
  lqr::Synthesis synthesis;
  policy::HybridPolicy linear;  // Mode::Linear
  policy::HybridPolicy hybrid;  // Mode::Hybrid, untrained H
};

// Throws SynthesisError or ConvergenceError.
PolicySet build_policies(const config::RunConfig& cfg);

// Policy with a zero linear part evaluated as pure H.
policy::HybridPolicy baseline_policy(const config::RunConfig& cfg);

int cmd_synthesize(const CommonOptions& opts, std::ostream& out, std::ostream& err);

struct TrainOptions {
  std::string mode = "hybrid";  // hybrid | baseline
  std::optional<std::string> linear;
};
int cmd_train(const CommonOptions& opts, const TrainOptions& t, std::ostream& out, std::ostream& err);

struct RespondOptions {
  std::vector<std::string> policies;
  std::string kind;  // impulse | step
  std::optional<double> magnitude;
  std::optional<int> horizon;
};
int cmd_respond(const CommonOptions& opts, const RespondOptions& r, std::ostream& out,
                std::ostream& err);

struct RobustOptions {
  std::vector<std::string> policies;
  std::string parameter = "mass";
  std::string factors = "0.5,1,2,3,5";
  std::optional<int> seeds;
};
int cmd_robust(const CommonOptions& opts, const RobustOptions& r, std::ostream& out,
               std::ostream& err);

struct PropertyResult {
  std::string name;
  bool applicable = true;
  bool passed = false;
  std::string detail;
};

// Policy identities and relevance laws, plus agreement of W with the LQR gain
// re-synthesized from `cfg` and closed-loop stability of the local
// linearization.
std::vector<PropertyResult> verify_policy(const policy::HybridPolicy& p,
                                          const config::RunConfig& cfg);

struct VerifyOptions {
  std::string policy;
};
int cmd_verify(const CommonOptions& opts, const VerifyOptions& v, std::ostream& out,
               std::ostream& err);

}  // namespace hybridrl::cli
