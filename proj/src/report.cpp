#include "twistor/report.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "twistor/errors.hpp"

namespace twistor {

namespace {

void escape_into(const std::string& s, std::string& out) {
  out += '"';
  for (const char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void scalar_into(const Json& j, std::string& out) {
  if (j.is_null()) {
    out += "null";
  } else if (j.is_boolean()) {
    out += j.get<bool>() ? "true" : "false";
  } else if (j.is_number_integer()) {
    out += std::to_string(j.get<std::int64_t>());
  } else if (j.is_number_unsigned()) {
    out += std::to_string(j.get<std::uint64_t>());
  } else if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v)) {
      out += format_double(v);
    } else {
      escape_into(format_double(v), out);
    }
  } else {
    escape_into(j.get<std::string>(), out);
  }
}

void json_into(const Json& j, int indent, std::string& out) {
  const std::string pad(2 * (indent + 1), ' '), close(2 * indent, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      escape_into(it.key(), out);
      out += ": ";
      json_into(it.value(), indent + 1, out);
    }
    out += "\n" + close + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    bool flat = true;
    for (const Json& e : j) flat = flat && is_scalar(e);
    if (flat) {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        scalar_into(j[i], out);
      }
      out += ']';
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += pad;
      json_into(j[i], indent + 1, out);
    }
    out += "\n" + close + "]";
  } else {
    scalar_into(j, out);
  }
}

// Markdown rendering.

std::string cell(const Json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return format_double(v);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
  }
  if (j.is_string()) {
    std::string s;
    for (const char c : j.get<std::string>()) {
      if (c == '|') {
        s += "\\|";
      } else if (c == '\n') {
        s += ' ';
      } else {
        s += c;
      }
    }
    return s;
  }
  if (j.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) s += ", ";
      s += cell(j[i]);
    }
    return s + "]";
  }
  if (j.is_object()) return "{...}";
  std::string s;
  scalar_into(j, s);
  return s;
}

bool is_table(const Json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const Json& e : j)
    if (!e.is_object()) return false;
  return true;
}

// Leaves of an object as (dotted path, value); arrays of objects are
// collected separately as tables.
void flatten(const Json& j, const std::string& prefix,
             std::vector<std::pair<std::string, Json>>& leaves,
             std::vector<std::pair<std::string, Json>>* tables) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it.value().is_object() && !it.value().empty()) {
      flatten(it.value(), key, leaves, tables);
    } else if (tables && is_table(it.value())) {
      tables->emplace_back(key, it.value());
    } else {
      leaves.emplace_back(key, it.value());
    }
  }
}

void key_value_table(const std::vector<std::pair<std::string, Json>>& rows, std::string& out) {
  out += "| key | value |\n|---|---|\n";
  for (const auto& [k, v] : rows) out += "| " + k + " | " + cell(v) + " |\n";
}

void record_table(const Json& records, std::string& out) {
  std::vector<std::string> columns;
  std::vector<std::vector<std::pair<std::string, Json>>> rows;
  for (const Json& r : records) {
    rows.emplace_back();
    flatten(r, "", rows.back(), nullptr);
    for (const auto& [k, v] : rows.back()) {
      bool known = false;
      for (const auto& c : columns) known = known || c == k;
      if (!known) columns.push_back(k);
    }
  }
  out += "|";
  for (const auto& c : columns) out += " " + c + " |";
  out += "\n|";
  for (std::size_t i = 0; i < columns.size(); ++i) out += "---|";
  out += "\n";
  for (const auto& row : rows) {
    out += "|";
    for (const auto& c : columns) {
      std::string v;
      for (const auto& [k, val] : row)
        if (k == c) v = cell(val);
      out += " " + v + " |";
    }
    out += "\n";
  }
}

}  // namespace

std::string to_string(ReportFormat f) { return f == ReportFormat::Json ? "json" : "markdown"; }

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "markdown") return ReportFormat::Markdown;
  throw ArgumentError("unknown report format '" + s + "' (expected json or markdown)");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_json_text(const Json& doc) {
  std::string out;
  json_into(doc, 0, out);
  out += '\n';
  return out;
}

std::string to_markdown(const Json& doc) {
  std::string out;
  out += "# " + (doc.contains("command") ? cell(doc["command"]) : std::string("report")) + "\n\n";
  if (doc.contains("tool_version")) out += cell(doc["tool_version"]) + "\n\n";
  const std::pair<const char*, const char*> sections[] = {
      {"status", "Status"},
      {"summaries", "Summaries"},
      {"config_echo", "Configuration"},
      {"conventions", "Conventions"},
  };
  for (const auto& [key, title] : sections) {
    if (!doc.contains(key) || !doc[key].is_object() || doc[key].empty()) continue;
    std::vector<std::pair<std::string, Json>> leaves, tables;
    flatten(doc[key], "", leaves, &tables);
    out += std::string("## ") + title + "\n\n";
    if (!leaves.empty()) {
      key_value_table(leaves, out);
      out += "\n";
    }
    for (const auto& [name, t] : tables) {
      out += "### " + name + "\n\n";
      record_table(t, out);
      out += "\n";
    }
  }
  if (doc.contains("per_point") && is_table(doc["per_point"])) {
    out += "## Points\n\n";
    record_table(doc["per_point"], out);
    out += "\n";
  }
  return out;
}

std::string emit_report(const Json& doc, ReportFormat format) {
  return format == ReportFormat::Json ? to_json_text(doc) : to_markdown(doc);
}

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

Json json_point(const Point& x) {
  Json j = Json::array();
  for (double v : x) j.push_back(json_number(v));
  return j;
}

Json json_matrix(const Mat3& m) {
  Json j = Json::array();
  for (int r = 0; r < 3; ++r) {
    Json row = Json::array();
    for (int c = 0; c < 3; ++c) row.push_back(json_number(m(r, c)));
    j.push_back(row);
  }
  return j;
}

Json json_vector(const Vec3& v) {
  return Json::array({json_number(v(0)), json_number(v(1)), json_number(v(2))});
}

Json json_blocks(const CurvatureBlocks& b) {
  return Json{{"A", json_matrix(b.A)}, {"B", json_matrix(b.B)}, {"C", json_matrix(b.C)}};
}

Json json_verdict(const TamingVerdict& v) {
  return Json{{"margin", json_number(v.margin)},
              {"detA", json_number(v.detA)},
              {"class", to_string(v.cls)},
              {"degenerate", v.degenerate},
              {"argmin_theta", json_vector(v.argmin_theta)}};
}

}  // namespace twistor
