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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

namespace hybridrl::text {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// 64-bit FNV-1a; stable across platforms, used to tag output files.
std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t v);

std::string read_file(const std::filesystem::path& path);
// Creates parent directories as needed.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Whitespace tokenizer with `#` line comments. '=' is always its own token.
/// Every token carries its byte offset; errors are ParseError.
class Lexer {
 public:
  using Token = std::pair<std::string, std::size_t>;

  explicit Lexer(std::string_view text) : text_(text) {}

  std::optional<Token> try_word();
  Token next_word();
  void expect(std::string_view token);
  std::pair<long long, std::size_t> next_int();
  std::pair<double, std::size_t> next_double();

  // "rows cols" followed by rows*cols numbers.
  Eigen::MatrixXd read_matrix();
  // "n" followed by n numbers.
  Eigen::VectorXd read_vector();

  std::size_t offset() const { return pos_; }

 private:
  void skip_space();

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace hybridrl::text
