#pragma once

// Deterministic CSV output, FNV-1a digests and the run manifest.

#include "q1dlab/core.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace q1dlab {

#ifndef Q1DLAB_VERSION
#define Q1DLAB_VERSION "0.1.0"
#endif

inline constexpr std::string_view kVersion = Q1DLAB_VERSION;

/// 64-bit FNV-1a (offset basis 0xcbf29ce484222325, prime 0x100000001b3).
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

/// 17 significant digits in scientific notation.
inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

inline std::string fmt(long long x) { return std::to_string(x); }
inline std::string fmt(int x) { return std::to_string(x); }
inline std::string fmt(std::size_t x) { return std::to_string(x); }
inline std::string fmt(bool x) { return x ? "true" : "false"; }
inline std::string fmt(std::string_view s) { return std::string(s); }
inline std::string fmt(const char* s) { return s; }
inline std::string fmt(const std::string& s) { return s; }

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  template <class... Cells>
  void row(const Cells&... cells) {
    std::vector<std::string> r{fmt(cells)...};
    if (r.size() != header_.size()) throw Error("CSV row width does not match the header");
    rows_.push_back(std::move(r));
  }
  void row_cells(std::vector<std::string> r) {
    if (r.size() != header_.size()) throw Error("CSV row width does not match the header");
    rows_.push_back(std::move(r));
  }

  std::string render(std::string_view comment) const {
    std::string out = "# " + std::string(comment) + "\n";
    append_line(out, header_);
    for (const auto& r : rows_) append_line(out, r);
    return out;
  }

  std::size_t size() const { return rows_.size(); }

 private:
  static void append_line(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  }
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Files produced by one command. Contents depend only on (command, config,
/// seed, version); timestamps go to manifest.txt alone.
class RunOutput {
 public:
  RunOutput(std::string command, std::uint64_t config_digest, std::uint64_t seed)
      : command_(std::move(command)), config_digest_(config_digest), seed_(seed),
        started_(std::chrono::system_clock::now()) {
    std::string key = command_ + "|" + hex64(config_digest_) + "|" + std::to_string(seed_) + "|" +
                      std::string(kVersion);
    run_digest_ = fnv1a64(key);
  }

  std::uint64_t run_digest() const { return run_digest_; }
  const std::string& command() const { return command_; }

  std::string header() const {
    return "q1dlab " + std::string(kVersion) + " " + command_ + " run=" + hex64(run_digest_) +
           " config=" + hex64(config_digest_) + " seed=" + std::to_string(seed_);
  }

  void add(const std::string& name, const CsvTable& table) { files_.push_back({name, table.render(header())}); }
  void add_text(const std::string& name, const std::string& body) {
    files_.push_back({name, "# " + header() + "\n" + body});
  }

  struct File {
    std::string name;
    std::string content;
  };
  const std::vector<File>& files() const { return files_; }

  /// Writes every file plus manifest.txt into `dir` (created if missing).
  void write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    for (const auto& f : files_) write_file(dir / f.name, f.content);
    std::string manifest;
    manifest += "command: " + command_ + "\n";
    manifest += "version: " + std::string(kVersion) + "\n";
    manifest += "config_digest: " + hex64(config_digest_) + "\n";
    manifest += "master_seed: " + std::to_string(seed_) + "\n";
    manifest += "run_digest: " + hex64(run_digest_) + "\n";
    manifest += "start: " + iso(started_) + "\n";
    manifest += "end: " + iso(std::chrono::system_clock::now()) + "\n";
    for (const auto& f : files_) manifest += "file: " + f.name + " " + hex64(fnv1a64(f.content)) + "\n";
    write_file(dir / "manifest.txt", manifest);
  }

 private:
  static void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write output file '" + p.string() + "'");
    out << content;
  }
  static std::string iso(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  std::string command_;
  std::uint64_t config_digest_;
  std::uint64_t seed_;
  std::uint64_t run_digest_;
  std::chrono::system_clock::time_point started_;
  std::vector<File> files_;
};

}  // namespace q1dlab
