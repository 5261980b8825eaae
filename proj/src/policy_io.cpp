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

// Policy file layout:
//
//   # hybridrl policy
//   version = 1
//   env_name = pendulum
//   mode = hybrid
//   u_max = 2
//   W = 1 3            <- matrix: rows cols, then rows lines of values
//   0 -37.02 -5.89
//   b = 1              <- vector: length, then one line of values
//   0
//   ...
//
// Keys after `version` may appear in any order; all are required.

#include <map>
#include <string>

#include "hybridrl/errors.hpp"
#include "hybridrl/policy.hpp"
#include "hybridrl/text_format.hpp"

namespace hybridrl::policy {

namespace {

void write_vector(std::string& out, std::string_view key, const Eigen::VectorXd& v) {
  out += key;
  out += " = " + std::to_string(v.size()) + "\n";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += text::format_double(v[i]);
  }
  out += '\n';
}

void write_matrix(std::string& out, std::string_view key, const Eigen::MatrixXd& m) {
  out += key;
  out += " = " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ' ';
      out += text::format_double(m(r, c));
    }
    out += '\n';
  }
}

class PolicyReader {
 public:
  explicit PolicyReader(std::string_view text) : lex_(text) {}

  HybridPolicy read() {
    expect_key("version");
    const auto [version, at] = lex_.next_int();
    if (version != kPolicyFormatVersion) {
      throw VersionError("unsupported policy format version " + std::to_string(version) +
                             " (this build reads version " + std::to_string(kPolicyFormatVersion) +
                             ")",
                         at);
    }

    std::map<std::string, bool, std::less<>> seen;
    HybridPolicy p;
    double u_max = 0.0;
    while (auto key = lex_.try_word()) {
      const auto [name, at_key] = *key;
      lex_.expect("=");
      if (seen[name]) throw ParseError("duplicate key '" + name + "'", at_key);
      seen[name] = true;
      if (name == "env_name") {
        p.env_name = lex_.next_word().first;
      } else if (name == "mode") {
        const auto [m, at_mode] = lex_.next_word();
        try {
          p.mode = parse_mode(m);
        } catch (const ParameterError& e) {
          throw ParseError(e.what(), at_mode);
        }
      } else if (name == "u_max") {
        u_max = lex_.next_double().first;
      } else if (name == "W") {
        p.linear.W = lex_.read_matrix();
      } else if (name == "b") {
        p.linear.b = lex_.read_vector();
      } else if (name == "centers") {
        p.nonlinear.centers = lex_.read_matrix();
      } else if (name == "scales") {
        p.nonlinear.scales = lex_.read_vector();
      } else if (name == "weights") {
        p.nonlinear.weights = lex_.read_matrix();
      } else if (name == "a") {
        p.relevance.a = lex_.read_vector();
      } else if (name == "lambda") {
        p.relevance.lambda = lex_.read_vector();
      } else {
        throw ParseError("unknown key '" + name + "'", at_key);
      }
    }
    for (const char* k :
         {"env_name", "mode", "u_max", "W", "b", "centers", "scales", "weights", "a", "lambda"}) {
      if (!seen.contains(k)) {
        throw ParseError(std::string("missing key '") + k + "'", lex_.offset());
      }
    }
    p.nonlinear.u_max = u_max;
    p.validate();
    return p;
  }

 private:
  void expect_key(std::string_view key) {
    const auto [word, at] = lex_.next_word();
    if (word != key) throw ParseError("expected '" + std::string(key) + "', found '" + word + "'", at);
    lex_.expect("=");
  }

  text::Lexer lex_;
};

}  // namespace

std::string serialize(const HybridPolicy& p, std::string_view header) {
  std::string out = "# hybridrl policy\n";
  out += header;
  out += "version = " + std::to_string(kPolicyFormatVersion) + "\n";
  out += "env_name = " + (p.env_name.empty() ? std::string("unknown") : p.env_name) + "\n";
  out += "mode = " + std::string(to_string(p.mode)) + "\n";
  out += "u_max = " + text::format_double(p.nonlinear.u_max) + "\n";
  write_matrix(out, "W", p.linear.W);
  write_vector(out, "b", p.linear.b);
  write_matrix(out, "centers", p.nonlinear.centers);
  write_vector(out, "scales", p.nonlinear.scales);
  write_matrix(out, "weights", p.nonlinear.weights);
  write_vector(out, "a", p.relevance.a);
  write_vector(out, "lambda", p.relevance.lambda);
  return out;
}

HybridPolicy deserialize(std::string_view text) { return PolicyReader(text).read(); }

void save_policy(const HybridPolicy& p, const std::filesystem::path& path,
                 std::string_view header) {
  text::write_file(path, serialize(p, header));
}

HybridPolicy load_policy(const std::filesystem::path& path) {
  return deserialize(text::read_file(path));
}

}  // namespace hybridrl::policy
