#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vwords/error.hpp"

namespace vwords::text {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

template <class T>
T parse_number(std::string_view s, const std::string& context) {
  s = trim(s);
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw Error(context + "not a number: '" + std::string(s) + "'");
  return v;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

inline std::vector<std::string> lines(const std::string& content) {
  std::vector<std::string> out;
  std::istringstream in(content);
  for (std::string l; std::getline(in, l);) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    out.push_back(std::move(l));
  }
  return out;
}

/// `key=value` lines; blank lines and `#` comments are skipped.
inline std::map<std::string, std::string> parse_key_values(const std::string& content,
                                                          const std::string& source = "config") {
  std::map<std::string, std::string> kv;
  const auto ls = lines(content);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const std::string_view l = trim(ls[i]);
    if (l.empty() || l.front() == '#') continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) throw Error(where(source, i + 1) + "expected key=value");
    const std::string key(trim(l.substr(0, eq)));
    if (key.empty()) throw Error(where(source, i + 1) + "empty key");
    kv[key] = std::string(trim(l.substr(eq + 1)));
  }
  return kv;
}

// %.Nf without locale surprises
inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string fixed6(double v) { return fixed(v, 6); }

}  // namespace vwords::text
