#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "smlab/error.hpp"

namespace smlab {

inline constexpr const char* version = "1.0.0";

namespace report {

// 12 significant digits, shortest of fixed/exponent form.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string fmt(std::size_t v) { return std::to_string(v); }
inline std::string fmt(int v) { return std::to_string(v); }

// Value rounded to 12 significant digits, so JSON output carries the same
// precision as CSV output.
inline double round12(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(fmt(v).c_str(), nullptr);
}

// Ordered key=value pairs describing how a result was produced.
class Provenance {
 public:
  Provenance(std::string command) { add("artifact", std::string("smlab ") + version); add("command", std::move(command)); }

  Provenance& add(const std::string& key, const std::string& value) {
    items_.emplace_back(key, value);
    return *this;
  }
  Provenance& add(const std::string& key, double value) { return add(key, fmt(value)); }
  Provenance& add(const std::string& key, int value) { return add(key, std::to_string(value)); }
  Provenance& add(const std::string& key, std::size_t value) { return add(key, std::to_string(value)); }
  Provenance& add(const std::string& key, const char* value) { return add(key, std::string(value)); }

  std::string comment() const {
    std::string s = "#";
    for (const auto& [k, v] : items_) s += " " + k + "=" + quote(v);
    return s;
  }

  nlohmann::ordered_json json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : items_) j[k] = v;
    return j;
  }

 private:
  static std::string quote(const std::string& v) {
    return v.find(' ') == std::string::npos ? v : "\"" + v + "\"";
  }
  std::vector<std::pair<std::string, std::string>> items_;
};

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) throw InputError("report: row width does not match the header");
    rows_.push_back(std::move(cells));
  }

  void note(std::string line) { notes_.push_back(std::move(line)); }

  void write_csv(std::ostream& os, const Provenance& prov) const {
    os << prov.comment() << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
    for (const auto& n : notes_) os << "# " << n << '\n';
  }

  // Rows as objects; cells that parse as numbers are emitted as numbers.
  nlohmann::ordered_json json_rows() const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows_) {
      nlohmann::ordered_json o = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < r.size(); ++i) {
        char* end = nullptr;
        const long long n = std::strtoll(r[i].c_str(), &end, 10);
        if (!r[i].empty() && end && *end == '\0') {
          o[columns_[i]] = n;
          continue;
        }
        const double v = std::strtod(r[i].c_str(), &end);
        if (!r[i].empty() && end && *end == '\0' && std::isfinite(v)) {
          o[columns_[i]] = v;
        } else {
          o[columns_[i]] = r[i];
        }
      }
      arr.push_back(std::move(o));
    }
    return arr;
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::string> notes_;
};

// Write to path, or to os when path is empty.
inline void emit(const std::string& path, std::ostream& os, const std::string& text) {
  if (path.empty()) {
    os << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open output file: " + path);
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace report
}  // namespace smlab
