#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace dsdirac {

// =====================================================================
//  Machine-readable reports
//
//  JSON output is a single object with fixed field order and fixed
//  float formatting (17 significant digits), so identical inputs give
//  byte-identical files.  CSV quotes per RFC 4180.  Wall time never
//  enters the payload; the front end prints it to stderr instead.
// =====================================================================

struct Value {
  enum class Kind { null, boolean, integer, real, text };
  Kind kind = Kind::null;
  bool b = false;
  long long i = 0;
  double d = 0.0;
  std::string s;

  Value() = default;
  static Value null() { return {}; }
  static Value of(bool v) {
    Value x;
    x.kind = Kind::boolean;
    x.b = v;
    return x;
  }
  static Value of(long long v) {
    Value x;
    x.kind = Kind::integer;
    x.i = v;
    return x;
  }
  static Value of(int v) { return of(static_cast<long long>(v)); }
  static Value of(double v) {
    Value x;
    x.kind = Kind::real;
    x.d = v;
    return x;
  }
  static Value of(std::string v) {
    Value x;
    x.kind = Kind::text;
    x.s = std::move(v);
    return x;
  }
  static Value of(const char* v) { return of(std::string(v)); }
};

namespace detail {

inline std::string format_real(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

inline std::string json_value(const Value& v) {
  switch (v.kind) {
    case Value::Kind::null: return "null";
    case Value::Kind::boolean: return v.b ? "true" : "false";
    case Value::Kind::integer: return std::to_string(v.i);
    case Value::Kind::real: return format_real(v.d);
    case Value::Kind::text: return "\"" + escape_json(v.s) + "\"";
  }
  return "null";
}

inline std::string csv_value(const Value& v) {
  std::string raw;
  switch (v.kind) {
    case Value::Kind::null: return "";
    case Value::Kind::boolean: return v.b ? "true" : "false";
    case Value::Kind::integer: return std::to_string(v.i);
    case Value::Kind::real: {
      if (std::isnan(v.d)) return "nan";
      if (std::isinf(v.d)) return v.d > 0 ? "inf" : "-inf";
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", v.d);
      return buf;
    }
    case Value::Kind::text: raw = v.s; break;
  }
  const bool needs_quote = raw.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quote) return raw;
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace detail

struct Row {
  std::vector<std::pair<std::string, Value>> cells;

  Row& set(const std::string& key, Value v) {
    cells.emplace_back(key, std::move(v));
    return *this;
  }
};

struct Check {
  std::string name;   // semantic tag of the property being verified
  bool pass = false;
  double value = 0.0;      // measured residual or quantity
  double tolerance = 0.0;  // bound it was compared against
  std::string detail;

  static Check bounded(std::string name, double value, double tolerance,
                       std::string detail = "") {
    Check c;
    c.name = std::move(name);
    c.value = value;
    c.tolerance = tolerance;
    c.pass = std::isfinite(value) && value <= tolerance;
    c.detail = std::move(detail);
    return c;
  }
  static Check flag(std::string name, bool pass, double value = 0.0,
                    std::string detail = "") {
    Check c;
    c.name = std::move(name);
    c.pass = pass;
    c.value = value;
    c.detail = std::move(detail);
    return c;
  }
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, Value>> parameters;
  std::vector<Row> rows;
  std::vector<Check> checks;

  void param(const std::string& key, Value v) {
    parameters.emplace_back(key, std::move(v));
  }

  bool all_pass() const {
    for (const Check& c : checks)
      if (!c.pass) return false;
    return true;
  }

  // worst residual measured relative to its own tolerance
  const Check* worst_check() const {
    const Check* worst = nullptr;
    double worst_ratio = -1.0;
    for (const Check& c : checks) {
      const double ratio =
          c.tolerance > 0.0 ? c.value / c.tolerance : (c.pass ? 0.0 : 1e300);
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst = &c;
      }
    }
    return worst;
  }

  std::string to_json() const {
    std::string out = "{\n";
    out += "  \"command\": \"" + detail::escape_json(command) + "\",\n";
    out += "  \"parameters\": {";
    for (size_t i = 0; i < parameters.size(); ++i) {
      if (i) out += ", ";
      out += "\"" + detail::escape_json(parameters[i].first) +
             "\": " + detail::json_value(parameters[i].second);
    }
    out += "},\n";
    out += "  \"rows\": [\n";
    for (size_t r = 0; r < rows.size(); ++r) {
      out += "    {";
      for (size_t i = 0; i < rows[r].cells.size(); ++i) {
        if (i) out += ", ";
        out += "\"" + detail::escape_json(rows[r].cells[i].first) +
               "\": " + detail::json_value(rows[r].cells[i].second);
      }
      out += r + 1 < rows.size() ? "},\n" : "}\n";
    }
    out += "  ],\n";
    out += "  \"checks\": [\n";
    for (size_t i = 0; i < checks.size(); ++i) {
      const Check& c = checks[i];
      out += "    {\"name\": \"" + detail::escape_json(c.name) + "\", ";
      out += "\"pass\": " + std::string(c.pass ? "true" : "false") + ", ";
      out += "\"value\": " + detail::format_real(c.value) + ", ";
      out += "\"tolerance\": " + detail::format_real(c.tolerance) + ", ";
      out += "\"detail\": \"" + detail::escape_json(c.detail) + "\"}";
      out += i + 1 < checks.size() ? ",\n" : "\n";
    }
    out += "  ],\n";
    const Check* worst = worst_check();
    out += "  \"summary\": {";
    out += "\"checks_total\": " + std::to_string(checks.size()) + ", ";
    size_t failed = 0;
    for (const Check& c : checks)
      if (!c.pass) ++failed;
    out += "\"checks_failed\": " + std::to_string(failed) + ", ";
    out += "\"max_residual\": " +
           (worst ? detail::format_real(worst->value) : "null") + ", ";
    out += "\"max_residual_check\": " +
           (worst ? "\"" + detail::escape_json(worst->name) + "\""
                  : std::string("null"));
    out += "}\n";
    out += "}\n";
    return out;
  }

  std::string to_csv() const {
    std::string out;
    if (!rows.empty()) {
      for (size_t i = 0; i < rows[0].cells.size(); ++i) {
        if (i) out += ",";
        out += detail::csv_value(Value::of(rows[0].cells[i].first));
      }
      out += "\n";
      for (const Row& r : rows) {
        for (size_t i = 0; i < r.cells.size(); ++i) {
          if (i) out += ",";
          out += detail::csv_value(r.cells[i].second);
        }
        out += "\n";
      }
      out += "\n";
    }
    out += "check,pass,value,tolerance,detail\n";
    for (const Check& c : checks) {
      out += detail::csv_value(Value::of(c.name)) + ",";
      out += (c.pass ? "true" : "false");
      out += "," + detail::csv_value(Value::of(c.value));
      out += "," + detail::csv_value(Value::of(c.tolerance));
      out += "," + detail::csv_value(Value::of(c.detail)) + "\n";
    }
    return out;
  }
};

}  // namespace dsdirac
