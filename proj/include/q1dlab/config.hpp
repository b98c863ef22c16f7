#pragma once

// Flat sectioned key-value configuration:
//
//   # comment
//   [model]
//   n = 8
//   lambda_star = 0.3
//
// Keys are addressed as "section.key". Lists are comma separated.

#include "q1dlab/core.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace q1dlab {

class Config {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static Config parse(std::string_view text, std::string source = "<config>") {
    Config cfg;
    cfg.source_ = std::move(source);
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) {
        if (end == text.size()) break;
        continue;
      }
      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3)
          throw ConfigError(cfg.where(line_no) + "malformed section header '" + std::string(line) + "'");
        section = std::string(trim(line.substr(1, line.size() - 2)));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ConfigError(cfg.where(line_no) + "expected 'key = value', got '" + std::string(line) + "'");
      const std::string key(trim(line.substr(0, eq)));
      if (key.empty()) throw ConfigError(cfg.where(line_no) + "empty key");
      const std::string full = section.empty() ? key : section + "." + key;
      if (cfg.entries_.count(full))
        throw ConfigError(cfg.where(line_no) + "duplicate field '" + full + "' (first set on line " +
                          std::to_string(cfg.entries_[full].line) + ")");
      cfg.entries_[full] = {std::string(trim(line.substr(eq + 1))), line_no};
      if (end == text.size()) break;
    }
    return cfg;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, Entry>& entries() const { return entries_; }
  const std::string& source() const { return source_; }

  std::string str(const std::string& key) const { return require(key).value; }
  std::string str(const std::string& key, const std::string& fallback) const {
    return has(key) ? str(key) : fallback;
  }

  double real(const std::string& key) const {
    const Entry& e = require(key);
    return to_real(e.value, key, e.line);
  }
  double real(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }

  long long integer(const std::string& key) const {
    const Entry& e = require(key);
    return to_integer(e.value, key, e.line);
  }
  long long integer(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  std::uint64_t u64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const Entry& e = entries_.at(key);
    std::uint64_t v = 0;
    const char* b = e.value.data();
    const auto [p, ec] = std::from_chars(b, b + e.value.size(), v);
    if (ec != std::errc() || p != b + e.value.size())
      throw ConfigError(where(e.line) + "field '" + key + "' expects an unsigned integer, got '" + e.value + "'");
    return v;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Entry& e = entries_.at(key);
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    throw ConfigError(where(e.line) + "field '" + key + "' expects true or false, got '" + e.value + "'");
  }

  std::vector<double> reals(const std::string& key) const {
    const Entry& e = require(key);
    std::vector<double> out;
    for (const auto& item : split(e.value, ',')) out.push_back(to_real(item, key, e.line));
    return out;
  }
  std::vector<double> reals(const std::string& key, std::vector<double> fallback) const {
    return has(key) ? reals(key) : fallback;
  }

  std::vector<long long> integers(const std::string& key) const {
    const Entry& e = require(key);
    std::vector<long long> out;
    for (const auto& item : split(e.value, ',')) out.push_back(to_integer(item, key, e.line));
    return out;
  }

  /// Rows separated by ';', entries by ','.
  Matrix matrix(const std::string& key) const {
    const Entry& e = require(key);
    std::vector<std::vector<double>> rows;
    for (const auto& row : split(e.value, ';')) {
      rows.emplace_back();
      for (const auto& item : split(row, ',')) rows.back().push_back(to_real(item, key, e.line));
    }
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix out(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols)
        throw ConfigError(where(e.line) + "field '" + key + "' has ragged rows");
      for (std::size_t j = 0; j < cols; ++j) out(i, j) = rows[i][j];
    }
    return out;
  }

  /// "key=value" lines in key order: independent of comments, blank lines and
  /// the order fields were written in.
  std::string canonical() const {
    std::string out;
    for (const auto& [k, e] : entries_) out += k + "=" + e.value + "\n";
    return out;
  }

  std::string where(int line) const { return source_ + ":" + std::to_string(line) + ": "; }

 private:
  const Entry& require(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(source_ + ": missing required field '" + key + "'");
    return it->second;
  }

  static std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
      const auto p = s.find(sep, start);
      out.emplace_back(trim(std::string_view(s).substr(start, p == std::string::npos ? std::string::npos : p - start)));
      if (p == std::string::npos) break;
      start = p + 1;
    }
    return out;
  }

  double to_real(const std::string& text, const std::string& key, int line) const {
    const std::string t(trim(text));
    if (t == "pi") return kPi;
    double v = 0.0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || p != t.data() + t.size())
      throw ConfigError(where(line) + "field '" + key + "' expects a number, got '" + t + "'");
    return v;
  }

  long long to_integer(const std::string& text, const std::string& key, int line) const {
    const std::string t(trim(text));
    long long v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || p != t.data() + t.size())
      throw ConfigError(where(line) + "field '" + key + "' expects an integer, got '" + t + "'");
    return v;
  }

  std::string source_;
  std::map<std::string, Entry> entries_;
};

}  // namespace q1dlab
