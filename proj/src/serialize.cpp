#include "genhilbert/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <regex>
#include <system_error>

namespace genhilbert {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CsvTable::CsvTable(std::string config_hash, std::vector<std::string> columns)
    : hash_(std::move(config_hash)), columns_(std::move(columns)) {}

void CsvTable::add_header(const std::string& key, const std::string& value) {
  headers_ += "# " + key + "=" + value + "\n";
}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != columns_.size()) throw std::invalid_argument("CsvTable: row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_double(values[i]);
  }
  body_ += '\n';
}

std::string CsvTable::str() const {
  std::string out = "# config_hash=" + hash_ + "\n" + headers_;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  return out + body_;
}

std::string embedded_hash(const std::string& contents) {
  static const std::regex csv_re("^# config_hash=([0-9a-f]{16})");
  static const std::regex json_re("\"config_hash\"\\s*:\\s*\"([0-9a-f]{16})\"");
  std::smatch m;
  if (std::regex_search(contents, m, csv_re)) return m[1];
  if (std::regex_search(contents, m, json_re)) return m[1];
  return {};
}

void to_json(json& j, const ExponentFit& f) {
  j = json{{"exponent", f.exponent},
           {"log_order", f.log_order},
           {"log_constant", f.log_constant},
           {"rms_residual", f.rms_residual}};
}

void to_json(json& j, const CarlesonReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back(json::array({row.t, row.tail, row.ratio}));
  j = json{{"exponent", r.exponent},
           {"log_order", r.log_order},
           {"constant_sup", r.constant_sup},
           {"verdict", to_string(r.verdict)},
           {"growth_detected", r.growth_detected},
           {"columns", {"t", "tail", "ratio"}},
           {"rows", rows}};
  j["fit"] = r.fit ? json(*r.fit) : json(nullptr);
}

void to_json(json& j, const VanishingProbe& v) {
  j = json{{"r", v.r}, {"sup", v.sup}, {"verdict", to_string(v.verdict)}};
}

void to_json(json& j, const GateResult& g) {
  j = json{{"pass", g.pass},
           {"exponent", g.exponent},
           {"exponents_tried", g.exponents_tried},
           {"growth", g.growth},
           {"report", g.report}};
}

void to_json(json& j, const ProbeResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json line = json::array({row.param});
    for (double v : row.values) line.push_back(v);
    rows.push_back(line);
  }
  json columns = json::array({r.param_name});
  for (const auto& c : r.columns) columns.push_back(c);
  json params = json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  j = json{{"probe", r.probe},
           {"columns", columns},
           {"rows", rows},
           {"primary_column", r.columns.empty() ? "" : r.columns.at(r.primary)},
           {"sup", r.sup},
           {"slope", r.slope},
           {"verdict", to_string(r.verdict)},
           {"parameters", params},
           {"notes", r.notes}};
  j["decay"] = r.decay ? json(to_string(*r.decay)) : json(nullptr);
}

void to_json(json& j, const DualityResult& d) {
  j = json{{"lhs", {d.lhs.real(), d.lhs.imag()}},
           {"rhs", {d.rhs.real(), d.rhs.imag()}},
           {"residual", d.residual},
           {"rhs_kernel", {d.rhs_kernel.real(), d.rhs_kernel.imag()}},
           {"residual_kernel", d.residual_kernel}};
}

CsvTable carleson_csv(const CarlesonReport& r, const std::string& config_hash) {
  CsvTable csv(config_hash, {"t", "tail", "ratio"});
  for (const auto& row : r.rows) csv.add_row({row.t, row.tail, row.ratio});
  return csv;
}

CsvTable probe_csv(const ProbeResult& r, const std::string& config_hash) {
  std::vector<std::string> columns{r.param_name};
  columns.insert(columns.end(), r.columns.begin(), r.columns.end());
  CsvTable csv(config_hash, columns);
  for (const auto& row : r.rows) {
    std::vector<double> line{row.param};
    line.insert(line.end(), row.values.begin(), row.values.end());
    csv.add_row(line);
  }
  return csv;
}

CsvTable matrix_csv(const OperatorSpec& op, const std::string& config_hash, std::size_t limit) {
  CsvTable csv(config_hash, {"n", "k", "entry"});
  const std::size_t last = std::min(op.order(), limit);
  for (std::size_t n = 0; n <= last; ++n) {
    for (std::size_t k = 0; k <= last; ++k) {
      csv.add_row({static_cast<double>(n), static_cast<double>(k), matrix_entry(op, n, k)});
    }
  }
  return csv;
}

namespace {

void dump(const json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + json(it.key()).dump() + ": ";
        dump(it.value(), indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (j.empty()) {
        out += "[]";
      } else if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(j[i], indent + 1, out);
        }
        out += "]";
      } else {
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ",\n";
          out += inner;
          dump(j[i], indent + 1, out);
        }
        out += "\n" + pad + "]";
      }
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      // JSON has no literal for non-finite values.
      out += std::isfinite(x) ? format_double(x) : "\"" + format_double(x) + "\"";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const json& j) {
  std::string out;
  dump(j, 0, out);
  out += '\n';
  return out;
}

}  // namespace genhilbert
