#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "asclt/errors.hpp"

namespace asclt {

/// Shortest exact decimal form of a double (17 significant digits round-trip
/// bit-faithfully, which the regression tests rely on).
inline std::string format_real17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// RFC 4180 field quoting: commas, quotes and newlines force quoted fields.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// CSV emitter. The two leading comment lines carry the configuration hash
/// and the seed; bodies are deterministic, timestamps live in the sidecar
/// metadata files.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header,
            std::uint64_t config_hash, std::uint64_t seed)
      : out_(path) {
    if (!out_) throw error("cannot open for writing: " + path);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(config_hash));
    out_ << "# config_hash=" << buf << "\n";
    out_ << "# seed=" << seed << "\n";
    write_row(header);
  }

  void write_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << csv_field(fields[i]);
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

struct CsvFile {
  std::uint64_t config_hash{0};
  std::uint64_t seed{0};
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

inline CsvFile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open for reading: " + path);
  CsvFile f;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# config_hash=", 0) == 0) {
      f.config_hash = std::stoull(line.substr(14), nullptr, 16);
      continue;
    }
    if (line.rfind("# seed=", 0) == 0) {
      f.seed = std::stoull(line.substr(7));
      continue;
    }
    if (line[0] == '#') continue;
    if (!have_header) {
      f.header = split_csv_line(line);
      have_header = true;
    } else {
      f.rows.push_back(split_csv_line(line));
    }
  }
  return f;
}

}  // namespace asclt
