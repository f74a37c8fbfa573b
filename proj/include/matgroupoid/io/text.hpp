#pragma once

// Line-oriented text helpers shared by the file formats. Doubles are written
// in shortest round-trip form so that load(save(x)) is bit-exact.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "matgroupoid/errors.hpp"

namespace matgroupoid::io {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return std::signbit(v) ? "-0" : "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename Range>
std::string join_doubles(const Range& r) {
  std::string out;
  for (double v : r) {
    if (!out.empty()) out += ' ';
    out += format_double(v);
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline double parse_double(std::string_view tok, std::size_t line) {
  if (tok == "inf") return INFINITY;
  if (tok == "-inf") return -INFINITY;
  if (tok == "nan") return NAN;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected a number, got '" + std::string(tok) + "'");
  return v;
}

template <typename Int>
Int parse_int(std::string_view tok, std::size_t line) {
  Int v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
  return v;
}

/// Reads non-empty, non-comment lines and tracks 1-based line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& out) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      const auto t = trim(raw);
      if (t.empty() || t.front() == '#') continue;
      out.assign(t);
      return true;
    }
    ++line_;
    return false;
  }

  /// Like next() but a missing line is a truncation error.
  std::string require(const std::string& what) {
    std::string s;
    if (!next(s)) throw ParseError(line_, "unexpected end of file, expected " + what);
    return s;
  }

  std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

/// Splits "key = value" into its trimmed halves.
inline std::pair<std::string, std::string> split_key_value(std::string_view s, std::size_t line) {
  const auto eq = s.find('=');
  if (eq == std::string_view::npos) throw ParseError(line, "expected 'key = value', got '" + std::string(s) + "'");
  return {std::string(trim(s.substr(0, eq))), std::string(trim(s.substr(eq + 1)))};
}

inline void check_header(LineReader& r, std::string_view magic) {
  std::string first;
  if (!r.next(first)) throw ParseError(r.line(), "empty file");
  const auto toks = split_ws(first);
  if (toks.size() != 2 || toks[0] != magic)
    throw ParseError(r.line(), "expected header '" + std::string(magic) + " 1'");
  if (toks[1] != "1") throw ParseError(r.line(), "unsupported format version " + toks[1]);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

}  // namespace matgroupoid::io
