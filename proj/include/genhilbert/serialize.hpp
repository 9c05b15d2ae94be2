#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "genhilbert/carleson.hpp"
#include "genhilbert/operator.hpp"
#include "genhilbert/probes.hpp"

namespace genhilbert {

/// 17 significant digits, '.' decimal point,
/// independent of the global locale. Non-finite values print as inf/-inf/nan.
std::string format_double(double x);

std::uint64_t fnv1a64(std::string_view bytes);
/// 16 lowercase hex digits.
std::string hash_hex(std::uint64_t h);

/// CSV document whose first line is "# config_hash=<hex>".
class CsvTable {
 public:
  CsvTable(std::string config_hash, std::vector<std::string> columns);

  /// Extra "# key=value" line after the hash line.
  void add_header(const std::string& key, const std::string& value);
  void add_row(const std::vector<double>& values);
  std::string str() const;

 private:
  std::string hash_;
  std::vector<std::string> columns_;
  std::string headers_;
  std::string body_;
};

/// Hash embedded in a CSV header line or in a JSON document's
/// "config_hash" field; empty if absent.
std::string embedded_hash(const std::string& file_contents);

void to_json(nlohmann::json& j, const CarlesonReport& r);
void to_json(nlohmann::json& j, const ExponentFit& f);
void to_json(nlohmann::json& j, const VanishingProbe& v);
void to_json(nlohmann::json& j, const GateResult& g);
void to_json(nlohmann::json& j, const ProbeResult& r);
void to_json(nlohmann::json& j, const DualityResult& d);

/// Columns t, tail, ratio.
CsvTable carleson_csv(const CarlesonReport& r, const std::string& config_hash);
/// Columns param, then the probe's own columns.
CsvTable probe_csv(const ProbeResult& r, const std::string& config_hash);
/// Columns n, k, entry for n, k <= min(order, limit).
CsvTable matrix_csv(const OperatorSpec& op, const std::string& config_hash, std::size_t limit);

/// JSON text with fixed key order and doubles printed by format_double.
std::string dump_json(const nlohmann::json& j);

}  // namespace genhilbert
