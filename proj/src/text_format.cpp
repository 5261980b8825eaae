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

#include "hybridrl/text_format.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hybridrl/errors.hpp"

namespace hybridrl::text {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
    v >>= 4;
  }
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void Lexer::skip_space() {
  while (pos_ < text_.size()) {
    const char c = text_[pos_];
    if (c == '#') {
      while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos_;
    } else {
      break;
    }
  }
}

std::optional<Lexer::Token> Lexer::try_word() {
  skip_space();
  if (pos_ >= text_.size()) return std::nullopt;
  const std::size_t start = pos_;
  if (text_[pos_] == '=') {
    ++pos_;
    return Token{"=", start};
  }
  while (pos_ < text_.size()) {
    const char c = text_[pos_];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '#' || c == '=') break;
    ++pos_;
  }
  return Token{std::string(text_.substr(start, pos_ - start)), start};
}

Lexer::Token Lexer::next_word() {
  auto tok = try_word();
  if (!tok) throw ParseError("unexpected end of input", text_.size());
  return *tok;
}

void Lexer::expect(std::string_view token) {
  const auto [word, at] = next_word();
  if (word != token) {
    throw ParseError("expected '" + std::string(token) + "', found '" + word + "'", at);
  }
}

std::pair<long long, std::size_t> Lexer::next_int() {
  const auto [word, at] = next_word();
  long long v = 0;
  const auto res = std::from_chars(word.data(), word.data() + word.size(), v);
  if (res.ec != std::errc{} || res.ptr != word.data() + word.size()) {
    throw ParseError("expected an integer, found '" + word + "'", at);
  }
  return {v, at};
}

std::pair<double, std::size_t> Lexer::next_double() {
  const auto [word, at] = next_word();
  double v = 0.0;
  const auto res = std::from_chars(word.data(), word.data() + word.size(), v);
  if (res.ec != std::errc{} || res.ptr != word.data() + word.size()) {
    throw ParseError("expected a number, found '" + word + "'", at);
  }
  return {v, at};
}

Eigen::MatrixXd Lexer::read_matrix() {
  const auto [rows, at_r] = next_int();
  const auto [cols, at_c] = next_int();
  if (rows < 0 || rows > 1'000'000) throw ParseError("bad row count", at_r);
  if (cols < 0 || cols > 1'000'000) throw ParseError("bad column count", at_c);
  Eigen::MatrixXd m(rows, cols);
  for (long long r = 0; r < rows; ++r) {
    for (long long c = 0; c < cols; ++c) m(r, c) = next_double().first;
  }
  return m;
}

Eigen::VectorXd Lexer::read_vector() {
  const auto [n, at] = next_int();
  if (n < 0 || n > 1'000'000) throw ParseError("bad vector length", at);
  Eigen::VectorXd v(n);
  for (long long i = 0; i < n; ++i) v[i] = next_double().first;
  return v;
}

}  // namespace hybridrl::text
