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

#include "hybridrl/config.hpp"

#include <charconv>
#include <functional>
#include <set>
#include <vector>

#include "hybridrl/errors.hpp"
#include "hybridrl/text_format.hpp"

namespace hybridrl::config {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ParameterError("config key '" + std::string(key) + "': expected a number, got '" +
                         std::string(s) + "'");
  }
  return v;
}

long long to_int(std::string_view key, std::string_view s) {
  s = trim(s);
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ParameterError("config key '" + std::string(key) + "': expected an integer, got '" +
                         std::string(s) + "'");
  }
  return v;
}

bool to_bool(std::string_view key, std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ParameterError("config key '" + std::string(key) + "': expected true or false");
}

Eigen::VectorXd to_vector(std::string_view key, std::string_view s) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find_first_of(", ", start);
    if (end == std::string_view::npos) end = s.size();
    const std::string_view item = trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(to_double(key, item));
    start = end + 1;
  }
  if (out.empty()) throw ParameterError("config key '" + std::string(key) + "' is empty");
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

std::string join(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += text::format_double(v[i]);
  }
  return s;
}

Eigen::MatrixXd diagonal(std::string_view key, const Eigen::VectorXd& d, Eigen::Index n) {
  if (d.size() != n) {
    throw ParameterError("config key '" + std::string(key) + "' needs " + std::to_string(n) +
                         " entries, got " + std::to_string(d.size()));
  }
  return d.asDiagonal();
}

std::string fmt(double v) { return text::format_double(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

}  // namespace

void KeyValues::parse(std::string_view text) {
  std::size_t line_start = 0;
  while (line_start < text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view line = text.substr(line_start, line_end - line_start);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!trim(line).empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_start);
      const std::string_view key = trim(line.substr(0, eq));
      if (key.empty()) throw ParseError("missing key before '='", line_start);
      values_[std::string(key)] = std::string(trim(line.substr(eq + 1)));
    }
    line_start = line_end + 1;
  }
}

void KeyValues::load(const std::filesystem::path& path) { parse(text::read_file(path)); }

void KeyValues::set_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || trim(assignment.substr(0, eq)).empty()) {
    throw ParameterError("override '" + std::string(assignment) + "' is not key=value");
  }
  set(std::string(trim(assignment.substr(0, eq))), std::string(trim(assignment.substr(eq + 1))));
}

void KeyValues::set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }

RunConfig resolve(const KeyValues& kv) {
  const auto& values = kv.values();
  std::set<std::string> used;
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = values.find(key);
    if (it == values.end()) return nullptr;
    used.insert(key);
    return &it->second;
  };

  RunConfig c;
  envs::EnvKind kind = envs::EnvKind::Pendulum;
  if (const auto* v = get("env")) kind = envs::parse_env_kind(trim(*v));
  c.params = envs::default_params(kind);
  c.cost = envs::default_cost(kind);
  c.weights = lqr::default_weights(kind);
  const Eigen::Index n = envs::state_dim(kind);

  auto num = [&](const std::string& key, double& field) {
    if (const auto* v = get(key)) field = to_double(key, *v);
  };
  auto integer = [&](const std::string& key, int& field) {
    if (const auto* v = get(key)) field = static_cast<int>(to_int(key, *v));
  };
  auto flag = [&](const std::string& key, bool& field) {
    if (const auto* v = get(key)) field = to_bool(key, *v);
  };

  num("env.m", c.params.m);
  num("env.M", c.params.M);
  num("env.l", c.params.l);
  num("env.g", c.params.g);
  num("env.dt", c.params.dt);
  num("env.u_max", c.params.u_max);
  integer("env.horizon", c.params.horizon);

  if (const auto* v = get("cost.target")) c.cost.target = ObsVec(to_vector("cost.target", *v));
  if (const auto* v = get("cost.weights")) c.cost.weights = to_vector("cost.weights", *v);
  num("cost.control_weight", c.cost.control_weight);

  if (const auto* v = get("lqr.q")) c.weights.Q = diagonal("lqr.q", to_vector("lqr.q", *v), n);
  if (const auto* v = get("lqr.r")) c.weights.R = diagonal("lqr.r", to_vector("lqr.r", *v), 1);
  flag("model.zero_input", c.zero_input);

  num("policy.lambda", c.lambda_init);
  integer("policy.centers", c.centers);
  num("policy.weight_scale", c.weight_scale);

  if (const auto* v = get("seed")) c.seed = static_cast<std::uint64_t>(to_int("seed", *v));
  c.train.seed = c.seed;
  integer("train.population", c.train.population);
  num("train.elite_fraction", c.train.elite_fraction);
  num("train.init_std", c.train.init_std);
  num("train.lambda_std", c.train.lambda_std);
  num("train.center_std", c.train.center_std);
  num("train.std_decay", c.train.std_decay);
  integer("train.max_iterations", c.train.max_iterations);
  integer("train.episodes", c.train.episodes_per_candidate);
  integer("train.horizon", c.train.horizon);
  if (const auto* v = get("train.seed")) c.train.seed = static_cast<std::uint64_t>(to_int("train.seed", *v));
  flag("train.lambda", c.train.train_lambda);
  flag("train.centers", c.train.train_centers);
  num("train.jitter", c.train.init_jitter);
  integer("train.threads", c.train.threads);

  c.impulse = c.params.u_max;
  c.step = 0.1 * c.params.u_max;
  num("respond.impulse", c.impulse);
  num("respond.step", c.step);
  integer("respond.horizon", c.response_horizon);

  integer("robust.seeds", c.robust_seeds);
  integer("robust.horizon", c.robust_horizon);
  num("robust.jitter", c.robust_jitter);

  if (const auto* v = get("output")) c.output = *v;

  for (const auto& [key, value] : values) {
    if (!used.contains(key)) throw ParameterError("unknown config key '" + key + "'");
  }

  c.params.validate();
  c.cost.validate();
  c.weights.validate(n, 1);
  c.train.validate();
  if (!(c.lambda_init > 0.0)) throw ParameterError("policy.lambda must be positive");
  if (c.centers < 1) throw ParameterError("policy.centers must be positive");
  if (c.response_horizon < 0) throw ParameterError("respond.horizon must be non-negative");
  if (c.robust_seeds < 1) throw ParameterError("robust.seeds must be positive");
  if (c.robust_horizon < 1) throw ParameterError("robust.horizon must be positive");
  if (!(c.robust_jitter >= 0.0)) throw ParameterError("robust.jitter must be non-negative");
  return c;
}

std::string RunConfig::canonical() const {
  std::string s;
  auto line = [&](std::string_view key, const std::string& value) {
    s += key;
    s += " = ";
    s += value;
    s += '\n';
  };
  line("env", std::string(envs::to_string(params.kind)));
  line("env.m", fmt(params.m));
  line("env.M", fmt(params.M));
  line("env.l", fmt(params.l));
  line("env.g", fmt(params.g));
  line("env.dt", fmt(params.dt));
  line("env.u_max", fmt(params.u_max));
  line("env.horizon", std::to_string(params.horizon));
  line("cost.target", join(cost.target.vec()));
  line("cost.weights", join(cost.weights));
  line("cost.control_weight", fmt(cost.control_weight));
  line("lqr.q", join(weights.Q.diagonal()));
  line("lqr.r", join(weights.R.diagonal()));
  line("model.zero_input", fmt(zero_input));
  line("policy.lambda", fmt(lambda_init));
  line("policy.centers", std::to_string(centers));
  line("policy.weight_scale", fmt(weight_scale));
  line("seed", std::to_string(seed));
  line("train.population", std::to_string(train.population));
  line("train.elite_fraction", fmt(train.elite_fraction));
  line("train.init_std", fmt(train.init_std));
  line("train.lambda_std", fmt(train.lambda_std));
  line("train.center_std", fmt(train.center_std));
  line("train.std_decay", fmt(train.std_decay));
  line("train.max_iterations", std::to_string(train.max_iterations));
  line("train.episodes", std::to_string(train.episodes_per_candidate));
  line("train.horizon", std::to_string(train.horizon));
  line("train.seed", std::to_string(train.seed));
  line("train.lambda", fmt(train.train_lambda));
  line("train.centers", fmt(train.train_centers));
  line("train.jitter", fmt(train.init_jitter));
  line("respond.impulse", fmt(impulse));
  line("respond.step", fmt(step));
  line("respond.horizon", std::to_string(response_horizon));
  line("robust.seeds", std::to_string(robust_seeds));
  line("robust.horizon", std::to_string(robust_horizon));
  line("robust.jitter", fmt(robust_jitter));
  // train.threads and output do not change results and stay out of the hash.
  return s;
}

std::uint64_t RunConfig::hash() const { return text::fnv1a(canonical()); }

std::string RunConfig::header(std::string_view what) const {
  std::string s = "# " + std::string(what) + " config_hash=" + text::hex64(hash()) +
                  " seed=" + std::to_string(seed) + "\n";
  s += "# env=" + std::string(envs::to_string(params.kind)) + " m=" + fmt(params.m) +
       " M=" + fmt(params.M) + " l=" + fmt(params.l) + " g=" + fmt(params.g) +
       " dt=" + fmt(params.dt) + " u_max=" + fmt(params.u_max) + "\n";
  return s;
}

}  // namespace hybridrl::config
