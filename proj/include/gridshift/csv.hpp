// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.

#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gridshift/errors.hpp"

namespace gridshift {

// Minimal CSV support: comma-separated, no quoting (none of our schemas
// carries commas inside fields), '.' decimal separator, UTF-8 passthrough.

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline double parse_csv_double(const std::string& field, const std::string& col,
                               std::size_t row) {
  const std::string t = trim(field);
  const char* b = t.c_str();
  char* end = nullptr;
  const double v = std::strtod(b, &end);
  if (t.empty() || end != b + t.size()) {
    throw ParseError("row " + std::to_string(row) + ": bad numeric value '" +
                     field + "' in column " + col);
  }
  return v;
}

inline long long parse_csv_int(const std::string& field, const std::string& col,
                               std::size_t row) {
  const std::string t = trim(field);
  long long v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size()) {
    throw ParseError("row " + std::to_string(row) + ": bad integer '" + field +
                     "' in column " + col);
  }
  return v;
}

/// Reads a CSV file, validates the exact header, and returns the data rows.
/// Row numbers in errors are 1-based file line numbers (header is line 1).
class CsvTable {
 public:
  CsvTable(const std::filesystem::path& path, const std::string& header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) {
      throw ParseError(path.string() + ": missing header line");
    }
    if (trim(line) != header) {
      throw ParseError(path.string() + ": bad header, expected '" + header +
                       "'");
    }
    n_cols_ = split_csv_line(header).size();
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      auto fields = split_csv_line(line);
      if (fields.size() != n_cols_) {
        throw ParseError(path.string() + ": row " + std::to_string(lineno) +
                         ": expected " + std::to_string(n_cols_) +
                         " fields, got " + std::to_string(fields.size()));
      }
      rows_.push_back(std::move(fields));
      row_lines_.push_back(lineno);
    }
  }

  std::size_t size() const { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_[i]; }
  std::size_t line_of(std::size_t i) const { return row_lines_[i]; }

 private:
  std::size_t n_cols_ = 0;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> row_lines_;
};

/// Shortest decimal representation that round-trips the exact double.
inline std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Writes a file atomically: write to a sibling temp file, then rename.
inline void atomic_write(const std::filesystem::path& path,
                         const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("rename to " + path.string() + " failed: " + ec.message());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace gridshift
