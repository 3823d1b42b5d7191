#pragma once

// Small helpers shared by the benchmark file formats.

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "hmp/errors.hpp"

namespace hmp::bench::io {

namespace fs = std::filesystem;

/// Round-trip decimal form (17 significant digits).
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Short form for human-facing report tables.
inline std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

/// File/line context for parse errors.
struct Where {
  std::string file;
  long line = 0;

  ValidationError fail(const std::string& what) const {
    return ValidationError(file + ":" + std::to_string(line) + ": " + what);
  }
};

inline double to_double(const std::string& s, const Where& where) {
  if (s.empty()) throw where.fail("empty numeric field");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) throw where.fail("bad number '" + s + "'");
  return v;
}

inline long to_int(const std::string& s, const Where& where) {
  if (s.empty()) throw where.fail("empty integer field");
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) throw where.fail("bad integer '" + s + "'");
  return v;
}

/// Line-oriented reader that tracks line numbers and strips a trailing '\r'.
class LineReader {
 public:
  explicit LineReader(const fs::path& path) : in_(path), file_(path.string()) {
    if (!in_) throw IoError("cannot open " + file_);
  }

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  /// Consumes leading `# key=value` lines.
  std::map<std::string, std::string> read_comments() {
    std::map<std::string, std::string> meta;
    while (in_.peek() == '#') {
      std::string line;
      next(line);
      const auto body = line.substr(1);
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const auto key_begin = body.find_first_not_of(' ');
      meta[body.substr(key_begin, eq - key_begin)] = body.substr(eq + 1);
    }
    return meta;
  }

  Where where() const { return {file_, line_}; }

 private:
  std::ifstream in_;
  std::string file_;
  long line_ = 0;
};

inline const std::string& meta_value(const std::map<std::string, std::string>& meta,
                                     const std::string& key) {
  const auto it = meta.find(key);
  if (it == meta.end()) throw ConfigError("missing '# " + key + "=' header line");
  return it->second;
}

/// Writes via a sibling temp file and rename, so readers never see a partial file.
inline void atomic_write(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
}

}  // namespace hmp::bench::io
