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
#include <map>
#include <string>
#include <string_view>

#include "hybridrl/envs.hpp"
#include "hybridrl/lqr.hpp"
#include "hybridrl/trainer.hpp"

namespace hybridrl::config {

/// Flat `key = value` text with dotted keys, e.g.
///
///   env = cartpole
///   env.dt = 0.01
///   lqr.q = 1, 1, 10, 1      # diagonal of Q
///   train.population = 64
///
/// `#` starts a comment. A later assignment of the same key (from a later
/// file or a --set override) replaces the earlier one.
class KeyValues {
 public:
  // Throws ParseError with the byte offset of the offending line.
  void parse(std::string_view text);
  void load(const std::filesystem::path& path);
  // "key=value"; throws ParameterError when there is no '='.
  void set_assignment(std::string_view assignment);
  void set(std::string key, std::string value);

  bool contains(std::string_view key) const { return values_.contains(std::string(key)); }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct RunConfig {
  envs::EnvParams params;
  envs::CostSpec cost;
  lqr::CostWeights weights;
  // Replaces B by zero before synthesis; exercises the stabilizability guard.
  bool zero_input = false;
  double lambda_init = 1.0;
  int centers = 50;
  double weight_scale = 0.01;
  trainer::TrainConfig train;
  double impulse = 0.0;
  double step = 0.0;
  int response_horizon = 0;
  int robust_seeds = 10;
  int robust_horizon = 200;
  double robust_jitter = 0.02;
  std::string output = "";
  std::uint64_t seed = 0;

  envs::EnvKind kind() const { return params.kind; }

  // One `key = value` line per resolved setting, in a fixed order. Parsing
  // this text back yields the same RunConfig.
  std::string canonical() const;
  std::uint64_t hash() const;
  // "# <what> config_hash=<hex> seed=<n>" followed by the physical parameters.
  std::string header(std::string_view what) const;
};

/// Applies per-environment defaults, then the given keys. The training seed
/// follows `seed` unless train.seed is set. Unknown keys and bad values throw
/// ParameterError.
RunConfig resolve(const KeyValues& kv);

}  // namespace hybridrl::config
