#include "genhilbert/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "genhilbert/acceptance.hpp"
#include "genhilbert/errors.hpp"
#include "genhilbert/operator.hpp"
#include "genhilbert/serialize.hpp"
#include "genhilbert/test_functions.hpp"

namespace genhilbert {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + escape_token(key); }
std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

// Walks text that nlohmann has already accepted, so no error handling.
class Scanner {
 public:
  Scanner(const std::string& text, std::map<std::string, int>& out) : s_(text), out_(out) {}

  void value(const std::string& ptr) {
    skip_ws();
    out_.emplace(ptr, line_);
    if (i_ >= s_.size()) return;
    const char c = s_[i_];
    if (c == '{') {
      ++i_;
      skip_ws();
      if (peek() == '}') {
        ++i_;
        return;
      }
      while (true) {
        skip_ws();
        const std::string key = string();
        skip_ws();
        ++i_;  // ':'
        value(child(ptr, key));
        skip_ws();
        if (s_[i_++] == '}') return;
      }
    } else if (c == '[') {
      ++i_;
      skip_ws();
      if (peek() == ']') {
        ++i_;
        return;
      }
      for (std::size_t k = 0;; ++k) {
        value(child(ptr, k));
        skip_ws();
        if (s_[i_++] == ']') return;
      }
    } else if (c == '"') {
      string();
    } else {
      while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != ',' &&
             s_[i_] != ']' && s_[i_] != '}') {
        ++i_;
      }
    }
  }

 private:
  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
      if (s_[i_] == '\n') ++line_;
      ++i_;
    }
  }

  // Escapes other than \" and \\ are kept verbatim; keys in the schema use none.
  std::string string() {
    std::string out;
    ++i_;
    while (i_ < s_.size() && s_[i_] != '"') {
      if (s_[i_] == '\\' && i_ + 1 < s_.size()) {
        const char e = s_[i_ + 1];
        if (e == '"' || e == '\\') {
          out += e;
        } else {
          out += s_[i_];
          out += e;
        }
        i_ += 2;
      } else {
        out += s_[i_++];
      }
    }
    ++i_;
    return out;
  }

  const std::string& s_;
  std::map<std::string, int>& out_;
  std::size_t i_ = 0;
  int line_ = 1;
};

}  // namespace

SourceLocator::SourceLocator(const std::string& text) { Scanner(text, lines_).value(""); }

int SourceLocator::line_of(const std::string& pointer) const {
  std::string p = pointer;
  while (true) {
    const auto it = lines_.find(p);
    if (it != lines_.end()) return it->second;
    if (p.empty()) return 1;
    p.erase(p.rfind('/'));
  }
}

std::string config_hash(const json& doc) {
  json copy = doc;
  copy.erase("jobs");
  return hash_hex(fnv1a64(copy.dump()));
}

namespace {

struct Ctx {
  const SourceLocator& loc;
  std::string source;

  [[noreturn]] void fail(const std::string& ptr, const std::string& what) const {
    throw ConfigError(source + ":" + std::to_string(loc.line_of(ptr)) + ": " + (ptr.empty() ? "/" : ptr) + ": " +
                      what);
  }
  void require(bool ok, const std::string& ptr, const std::string& what) const {
    if (!ok) fail(ptr, what);
  }
};

void check_object(const Ctx& c, const json& j, const std::string& ptr, std::initializer_list<const char*> allowed) {
  c.require(j.is_object(), ptr, "expected an object");
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    c.require(known, child(ptr, key), "unknown key '" + key + "'");
  }
}

double number(const Ctx& c, const json& v, const std::string& ptr) {
  c.require(v.is_number(), ptr, "expected a number");
  const double x = v.get<double>();
  c.require(std::isfinite(x), ptr, "expected a finite number");
  return x;
}

std::optional<double> opt_number(const Ctx& c, const json& obj, const std::string& ptr, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  return number(c, obj.at(key), child(ptr, key));
}

double number_or(const Ctx& c, const json& obj, const std::string& ptr, const char* key, double fallback) {
  return opt_number(c, obj, ptr, key).value_or(fallback);
}

double required_number(const Ctx& c, const json& obj, const std::string& ptr, const char* key) {
  c.require(obj.contains(key), ptr, std::string("missing required key '") + key + "'");
  return number(c, obj.at(key), child(ptr, key));
}

std::uint64_t count_or(const Ctx& c, const json& obj, const std::string& ptr, const char* key,
                       std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  c.require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0), child(ptr, key),
            "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string string_of(const Ctx& c, const json& v, const std::string& ptr) {
  c.require(v.is_string(), ptr, "expected a string");
  return v.get<std::string>();
}

std::vector<double> number_array(const Ctx& c, const json& v, const std::string& ptr) {
  c.require(v.is_array(), ptr, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(c, v[i], child(ptr, i)));
  return out;
}

/// Increasing points in [lo, 1) given as an array, or as
/// {largest_gap, smallest_gap, count} with 1 - t geometric.
std::vector<double> unit_grid(const Ctx& c, const json& obj, const std::string& ptr, const char* key,
                              std::vector<double> fallback, bool open_left) {
  if (!obj.contains(key)) return fallback;
  const std::string p = child(ptr, key);
  const json& v = obj.at(key);
  std::vector<double> grid;
  if (v.is_object()) {
    check_object(c, v, p, {"largest_gap", "smallest_gap", "count"});
    const double largest = required_number(c, v, p, "largest_gap");
    const double smallest = required_number(c, v, p, "smallest_gap");
    const auto count = count_or(c, v, p, "count", 41);
    c.require(largest <= 1.0 && smallest > 0.0 && smallest < largest, p,
              "need 0 < smallest_gap < largest_gap <= 1");
    c.require(count >= 2, child(p, "count"), "need at least two points");
    grid = geometric_t_grid(largest, smallest, static_cast<int>(count));
  } else {
    grid = number_array(c, v, p);
  }
  c.require(!grid.empty(), p, "grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool low_ok = open_left ? grid[i] > 0.0 : grid[i] >= 0.0;
    c.require(low_ok && grid[i] < 1.0, child(p, i), open_left ? "points must lie in (0, 1)" : "points must lie in [0, 1)");
    c.require(i == 0 || grid[i] > grid[i - 1], child(p, i), "grid must be strictly increasing");
  }
  return grid;
}

cplx complex_of(const Ctx& c, const json& v, const std::string& ptr) {
  if (v.is_number()) return number(c, v, ptr);
  c.require(v.is_array() && v.size() == 2, ptr, "expected a number or a [re, im] pair");
  return {number(c, v[0], child(ptr, 0)), number(c, v[1], child(ptr, 1))};
}

std::vector<cplx> z_points(const Ctx& c, const json& obj, const std::string& ptr, std::vector<cplx> fallback) {
  if (!obj.contains("z")) return fallback;
  const std::string p = child(ptr, "z");
  const json& v = obj.at("z");
  c.require(v.is_array() && !v.empty(), p, "expected a nonempty array of points");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cplx z = complex_of(c, v[i], child(p, i));
    c.require(std::abs(z) < 1.0, child(p, i), "points must lie in the open unit disk");
    out.push_back(z);
  }
  return out;
}

MeasureSpec parse_measure(const Ctx& c, const json& v, const std::string& ptr) {
  c.require(v.is_array(), ptr, "expected an array of measure components");
  MeasureSpec mu;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = child(ptr, i);
    const json& comp = v[i];
    c.require(comp.is_object() && comp.contains("type"), p, "component needs a 'type'");
    const std::string type = string_of(c, comp.at("type"), child(p, "type"));
    MeasureSpec part;
    double scale = 1.0;
    auto read_scale = [&] {
      scale = number_or(c, comp, p, "scale", 1.0);
      c.require(scale > 0.0, child(p, "scale"), "scale must be positive");
    };
    if (type == "atom") {
      check_object(c, comp, p, {"type", "location", "weight"});
      const double location = required_number(c, comp, p, "location");
      const double weight = number_or(c, comp, p, "weight", 1.0);
      c.require(location >= 0.0 && location < 1.0, child(p, "location"), "atom location must lie in [0, 1)");
      c.require(weight > 0.0, child(p, "weight"), "atom weight must be positive");
      part = MeasureSpec::atom(location, weight);
    } else if (type == "density") {
      check_object(c, comp, p, {"type", "scale", "power", "log_power"});
      read_scale();
      const double power = required_number(c, comp, p, "power");
      c.require(power > -1.0, child(p, "power"), "power must exceed -1");
      part = MeasureSpec({}, {DensityTerm{scale, power, number_or(c, comp, p, "log_power", 0.0), 0.0}});
      scale = 1.0;
    } else if (type == "lebesgue") {
      check_object(c, comp, p, {"type", "scale"});
      read_scale();
      part = MeasureSpec::lebesgue();
    } else if (type == "power_family" || type == "log_carleson" || type == "log_power") {
      if (type == "log_power") {
        check_object(c, comp, p, {"type", "s", "delta", "scale"});
      } else {
        check_object(c, comp, p, {"type", "s", "scale"});
      }
      read_scale();
      const double s = required_number(c, comp, p, "s");
      c.require(s > 0.0, child(p, "s"), "s must be positive");
      if (type == "power_family") {
        part = MeasureSpec::power_family(s);
      } else if (type == "log_carleson") {
        part = MeasureSpec::log_carleson_family(s);
      } else {
        part = MeasureSpec::log_power_family(s, required_number(c, comp, p, "delta"));
      }
    } else {
      c.fail(child(p, "type"), "unknown measure type '" + type +
                                   "' (atom, density, lebesgue, power_family, log_carleson, log_power)");
    }
    mu = mu + (scale == 1.0 ? part : part.scaled(scale));
  }
  return mu;
}

struct FunctionContext {
  double p, q, alpha, beta;
  std::uint64_t seed;
};

NamedFunction parse_function(const Ctx& c, const json& v, const std::string& ptr, const FunctionContext& fc) {
  auto coefficients = [&](const json& arr, const std::string& p) {
    c.require(arr.is_array() && !arr.empty(), p, "expected a nonempty coefficient array");
    std::vector<cplx> out;
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(complex_of(c, arr[i], child(p, i)));
    return TaylorPoly(std::move(out));
  };
  if (v.is_array()) return {"coefficients", coefficients(v, ptr)};
  c.require(v.is_object(), ptr, "expected a coefficient array or a function object");
  if (v.contains("coefficients")) {
    check_object(c, v, ptr, {"coefficients", "name"});
    const std::string name = v.contains("name") ? string_of(c, v.at("name"), child(ptr, "name")) : "coefficients";
    return {name, coefficients(v.at("coefficients"), child(ptr, "coefficients"))};
  }
  if (v.contains("file")) {
    check_object(c, v, ptr, {"file"});
    const std::string path = string_of(c, v.at("file"), child(ptr, "file"));
    std::ifstream in(path);
    c.require(static_cast<bool>(in), child(ptr, "file"), "cannot open '" + path + "'");
    json data;
    try {
      data = json::parse(in);
    } catch (const json::parse_error& e) {
      c.fail(child(ptr, "file"), "'" + path + "' is not valid JSON: " + e.what());
    }
    const json& arr = data.is_object() && data.contains("coefficients") ? data.at("coefficients") : data;
    try {
      return {path, arr.get<TaylorPoly>()};
    } catch (const std::exception& e) {
      c.fail(child(ptr, "file"), "'" + path + "' holds no coefficient array: " + e.what());
    }
  }
  c.require(v.contains("family"), ptr, "function object needs 'coefficients', 'file' or 'family'");
  const std::string family = string_of(c, v.at("family"), child(ptr, "family"));
  if (family == "random") {
    check_object(c, v, ptr, {"family", "index", "degree"});
    const auto index = count_or(c, v, ptr, "index", 0);
    const auto degree = count_or(c, v, ptr, "degree", 64);
    return {"random[" + std::to_string(index) + "]", random_poly(fc.seed, index, fc.p, fc.alpha, degree)};
  }
  check_object(c, v, ptr, {"family", "a", "order"});
  const double a = required_number(c, v, ptr, "a");
  c.require(a > 0.0 && a < 1.0, child(ptr, "a"), "a must lie in (0, 1)");
  const auto order = count_or(c, v, ptr, "order", 0);
  const std::string name = family + "(" + format_double(a) + ")";
  if (family == "bergman_f") return {name, test_f_bergman(a, fc.p, fc.alpha, order)};
  if (family == "dirichlet_f") return {name, test_f_dirichlet(a, fc.p, fc.alpha, order)};
  if (family == "log_g") return {name, test_g_log(a, order)};
  if (family == "bergman_g") {
    c.require(fc.q > 1.0, child(ptr, "family"), "bergman_g needs q > 1");
    return {name, test_g_bergman(a, fc.beta, conjugate_index(fc.q), order)};
  }
  c.fail(child(ptr, "family"),
         "unknown function family '" + family + "' (bergman_f, dirichlet_f, bergman_g, log_g, random)");
}

std::vector<double> default_scan_grid() {
  std::vector<double> a;
  for (int i = 0; i <= 12; ++i) a.push_back(1.0 - std::pow(10.0, -1.0 - i / 6.0));
  return a;
}

std::vector<double> default_r_grid() {
  std::vector<double> r{0.0};
  for (int i = 1; i <= 12; ++i) r.push_back(1.0 - std::pow(10.0, -i / 3.0));
  return r;
}

std::vector<cplx> default_verify_z() {
  std::vector<cplx> z{0.0};
  for (double radius : {0.35, 0.7}) {
    for (int k = 0; k < 8; ++k) z.push_back(std::polar(radius, 2.0 * std::numbers::pi * k / 8.0));
  }
  return z;
}

}  // namespace

ExperimentConfig load_config(const std::string& text, const std::string& source_name, const Overrides& overrides) {
  ExperimentConfig cfg;
  cfg.source_name = source_name;
  try {
    cfg.doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ConfigError(source_name + ":" + std::to_string(line) + ": syntax error: " + e.what());
  }
  const SourceLocator loc(text);
  const Ctx c{loc, source_name};
  json& doc = cfg.doc;
  check_object(c, doc, "",
               {"measure", "operator", "space", "theorem_case", "moments", "classify", "apply", "verify", "probe",
                "seed", "jobs", "tol", "description"});
  if (doc.contains("description")) string_of(c, doc.at("description"), "/description");

  if (overrides.seed) doc["seed"] = *overrides.seed;
  if (overrides.tol) doc["tol"] = *overrides.tol;
  if (overrides.jobs) doc["jobs"] = *overrides.jobs;
  cfg.seed = count_or(c, doc, "", "seed", 0);
  cfg.tol = number_or(c, doc, "", "tol", 1e-10);
  c.require(cfg.tol > 0.0, "/tol", "tol must be positive");
  const auto jobs = count_or(c, doc, "", "jobs", 1);
  c.require(jobs >= 1 && jobs <= 1024, "/jobs", "jobs must lie in [1, 1024]");
  cfg.jobs = static_cast<int>(jobs);

  c.require(doc.contains("measure"), "", "missing required key 'measure'");
  cfg.measure = parse_measure(c, doc.at("measure"), "/measure");

  const json empty = json::object();
  const json& op = doc.value("operator", empty);
  check_object(c, op, "/operator", {"beta", "order"});
  cfg.beta = number_or(c, op, "/operator", "beta", 2.0);
  c.require(cfg.beta > 0.0, "/operator/beta", "beta must be positive");
  cfg.order = count_or(c, op, "/operator", "order", 256);
  c.require(cfg.order <= 8192, "/operator/order", "order above 8192 is not supported");

  const json& space = doc.value("space", empty);
  check_object(c, space, "/space", {"p", "q", "alpha"});
  cfg.p = number_or(c, space, "/space", "p", 2.0);
  cfg.q = number_or(c, space, "/space", "q", 2.0);
  cfg.alpha = number_or(c, space, "/space", "alpha", 0.0);
  c.require(cfg.p > 0.0, "/space/p", "p must be positive");
  c.require(cfg.q > 0.0, "/space/q", "q must be positive");
  c.require(cfg.alpha > -1.0, "/space/alpha", "alpha must exceed -1");

  if (doc.contains("theorem_case")) {
    const std::string name = string_of(c, doc.at("theorem_case"), "/theorem_case");
    try {
      cfg.theorem_case = theorem_case_from_string(name);
      threshold_exponent({cfg.p, cfg.q, cfg.alpha, cfg.beta, *cfg.theorem_case});
    } catch (const std::invalid_argument& e) {
      c.fail("/theorem_case", e.what());
    }
  }

  const FunctionContext fc{cfg.p, cfg.q, cfg.alpha, cfg.beta, cfg.seed};
  auto function_or_throw = [&](const json& v, const std::string& ptr) {
    NamedFunction nf = parse_function(c, v, ptr, fc);
    c.require(nf.f.degree() <= static_cast<long>(cfg.order), ptr,
              "degree " + std::to_string(nf.f.degree()) + " exceeds operator order " + std::to_string(cfg.order));
    return nf;
  };

  const json& moments = doc.value("moments", empty);
  check_object(c, moments, "/moments", {"count", "t_grid"});
  cfg.moments.count = count_or(c, moments, "/moments", "count", 16);
  cfg.moments.t_grid = unit_grid(c, moments, "/moments", "t_grid", geometric_t_grid(1.0, 1e-8, 81), false);

  const json& classify = doc.value("classify", empty);
  check_object(c, classify, "/classify", {"exponent", "log_order", "t_grid"});
  cfg.classify.exponent = opt_number(c, classify, "/classify", "exponent");
  if (cfg.classify.exponent) c.require(*cfg.classify.exponent > 0.0, "/classify/exponent", "exponent must be positive");
  cfg.classify.log_order = number_or(c, classify, "/classify", "log_order", 0.0);
  cfg.classify.t_grid = unit_grid(c, classify, "/classify", "t_grid", geometric_t_grid(1.0, 1e-8, 81), false);

  if (doc.contains("apply")) {
    const json& apply = doc.at("apply");
    check_object(c, apply, "/apply", {"f", "z", "matrix_dump"});
    c.require(apply.contains("f"), "/apply", "missing required key 'f'");
    ApplySection section;
    section.f = function_or_throw(apply.at("f"), "/apply/f");
    section.z = z_points(c, apply, "/apply", {0.0, 0.5, -0.5, cplx(0.0, 0.5), std::polar(0.7, std::numbers::pi / 4)});
    section.matrix_dump = count_or(c, apply, "/apply", "matrix_dump", 16);
    cfg.apply = std::move(section);
  }

  const json& verify = doc.value("verify", empty);
  check_object(c, verify, "/verify", {"functions", "z"});
  if (verify.contains("functions")) {
    const json& fns = verify.at("functions");
    c.require(fns.is_array() && !fns.empty(), "/verify/functions", "expected a nonempty array");
    for (std::size_t i = 0; i < fns.size(); ++i) {
      cfg.verify.functions.push_back(function_or_throw(fns[i], child("/verify/functions", i)));
    }
  } else {
    cfg.verify.functions = {{"one", TaylorPoly(std::vector<cplx>{1.0})}};
    const std::vector<std::pair<std::string, TaylorPoly>> extra{
        {"bergman_f(0.5)", test_f_bergman(0.5, cfg.p, cfg.alpha)}, {"log_g(0.6)", test_g_log(0.6)}};
    for (const auto& [name, f] : extra) {
      if (f.degree() <= static_cast<long>(cfg.order)) cfg.verify.functions.push_back({name, f});
    }
  }
  cfg.verify.z = z_points(c, verify, "/verify", default_verify_z());

  if (doc.contains("probe")) {
    const json& probe = doc.at("probe");
    check_object(c, probe, "/probe",
                 {"kind", "a_grid", "family", "s", "r_grid", "variants", "count", "cases", "source", "target",
                  "target_alpha"});
    ProbeSection section;
    c.require(probe.contains("kind"), "/probe", "missing required key 'kind'");
    section.kind = string_of(c, probe.at("kind"), "/probe/kind");
    c.require(section.kind == "lower_bound" || section.kind == "ratio_sup" || section.kind == "duality" ||
                  section.kind == "compactness",
              "/probe/kind", "unknown probe kind '" + section.kind + "' (lower_bound, ratio_sup, duality, compactness)");
    section.a_grid = unit_grid(c, probe, "/probe", "a_grid", default_scan_grid(), true);
    section.r_grid = unit_grid(c, probe, "/probe", "r_grid", default_r_grid(), false);
    if (probe.contains("family")) {
      try {
        section.family = family_from_string(string_of(c, probe.at("family"), "/probe/family"));
      } catch (const std::invalid_argument& e) {
        c.fail("/probe/family", e.what());
      }
    }
    section.s = opt_number(c, probe, "/probe", "s");
    if (section.s) c.require(*section.s > 0.0, "/probe/s", "s must be positive");
    if (probe.contains("variants")) {
      section.variants = number_array(c, probe.at("variants"), "/probe/variants");
      for (std::size_t i = 0; i < section.variants.size(); ++i) {
        c.require(section.variants[i] > 0.0, child("/probe/variants", i), "variant exponent must be positive");
      }
    }
    section.count = count_or(c, probe, "/probe", "count", 8);
    for (const char* key : {"source", "target"}) {
      if (!probe.contains(key)) continue;
      const std::string p = child("/probe", key);
      try {
        (std::string(key) == "source" ? section.source_kind : section.target_kind) =
            space_kind_from_string(string_of(c, probe.at(key), p));
      } catch (const std::invalid_argument& e) {
        c.fail(p, e.what());
      }
    }
    section.target_alpha = opt_number(c, probe, "/probe", "target_alpha");
    if (section.kind == "lower_bound") {
      c.require(cfg.q >= 1.0, "/space/q", "lower_bound needs q >= 1");
    } else if (section.kind == "ratio_sup") {
      c.require(section.target_kind != SpaceKind::Bloch, "/probe/target", "ratio_sup needs a Bergman or Dirichlet target");
      const double ta = section.target_alpha.value_or(cfg.beta - 2.0);
      c.require(ta > -1.0, section.target_alpha ? "/probe/target_alpha" : "/operator/beta",
                "target weight must exceed -1 (default beta - 2)");
    } else if (section.kind == "compactness") {
      c.require(section.s.has_value(), "/probe", "compactness needs 's'");
      c.require(section.source_kind == SpaceKind::Bergman, "/probe/source", "compactness needs a Bergman source");
    } else {
      c.require(cfg.beta > 1.0, "/operator/beta", "duality identities need beta > 1");
      if (probe.contains("cases")) {
        const json& cases = probe.at("cases");
        c.require(cases.is_array() && !cases.empty(), "/probe/cases", "expected a nonempty array");
        for (std::size_t i = 0; i < cases.size(); ++i) {
          const std::string p = child("/probe/cases", i);
          check_object(c, cases[i], p, {"f", "g"});
          c.require(cases[i].contains("f") && cases[i].contains("g"), p, "case needs 'f' and 'g'");
          section.cases.push_back({parse_function(c, cases[i].at("f"), child(p, "f"), fc).f,
                                   parse_function(c, cases[i].at("g"), child(p, "g"), fc).f});
        }
      } else {
        section.cases.push_back({TaylorPoly(std::vector<cplx>{1.0}), TaylorPoly(std::vector<cplx>{0.0, 1.0})});
      }
    }
    cfg.probe = std::move(section);
  }

  cfg.hash = config_hash(cfg.doc);
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ":1: cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return load_config(text.str(), path, overrides);
}

namespace {

std::string bool_text(bool b) { return b ? "true" : "false"; }

json tagged(const ExperimentConfig& cfg, json body) {
  body["config_hash"] = cfg.hash;
  return body;
}

OperatorSpec make_operator(const ExperimentConfig& cfg, const MeasureSpec& mu) {
  return OperatorSpec(cfg.beta, mu, cfg.order);
}

}  // namespace

CommandOutput cmd_moments(const ExperimentConfig& cfg) {
  CommandOutput out;
  CsvTable moments(cfg.hash, {"n", "moment"});
  for (std::size_t n = 0; n <= cfg.moments.count; ++n) {
    moments.add_row({static_cast<double>(n), cfg.measure.moment(n)});
  }
  CsvTable tails(cfg.hash, {"t", "tail"});
  for (double t : cfg.moments.t_grid) tails.add_row({t, cfg.measure.tail(t)});
  out.files = {{"moments.csv", moments.str()}, {"tails.csv", tails.str()}};
  out.text = "total mass " + format_double(cfg.measure.total_mass()) + "; wrote moments 0.." +
             std::to_string(cfg.moments.count) + " and " + std::to_string(cfg.moments.t_grid.size()) + " tails\n";
  return out;
}

CommandOutput cmd_classify(const ExperimentConfig& cfg) {
  CommandOutput out;
  json extra = json::object();
  double exponent = 1.0;
  double log_order = cfg.classify.log_order;
  std::string source;
  if (cfg.classify.exponent) {
    exponent = *cfg.classify.exponent;
    source = "config";
  } else if (cfg.theorem_case) {
    const CarlesonCondition cond = threshold_exponent({cfg.p, cfg.q, cfg.alpha, cfg.beta, *cfg.theorem_case});
    exponent = cond.exponent;
    log_order = cond.log_order;
    source = "theorem case " + to_string(*cfg.theorem_case);
    extra["threshold"] = {{"case", to_string(*cfg.theorem_case)}, {"exponent", cond.exponent},
                          {"log_order", cond.log_order}};
  } else {
    try {
      exponent = fit_exponent(cfg.measure, cfg.classify.t_grid).exponent;
      source = "fitted";
    } catch (const DegenerateTail&) {
      source = "default (tail degenerate, no fit)";
    }
  }
  const CarlesonReport report = carleson_constant(cfg.measure, {exponent, log_order, cfg.classify.t_grid});
  std::string fit_text;
  if (report.fit) {
    fit_text = "s_hat " + format_double(report.fit->exponent) + ", log order " + format_double(report.fit->log_order);
  } else {
    fit_text = "no fit: the tail vanishes on part of the grid, direct constant reported";
    extra["fit_note"] = fit_text;
  }
  extra["exponent_source"] = source;
  extra["report"] = report;
  CsvTable csv = carleson_csv(report, cfg.hash);
  if (!report.fit) csv.add_header("fit_note", "tail vanishes on part of the grid");
  out.files = {{"classify.json", dump_json(tagged(cfg, extra))}, {"classify.csv", csv.str()}};
  out.text = "exponent " + format_double(exponent) + " (" + source + "), log order " + format_double(log_order) +
             "\nconstant_sup " + format_double(report.constant_sup) + ", verdict " + to_string(report.verdict) +
             (report.growth_detected ? ", ratios grow near 1" : "") + "\n" + fit_text + "\n";
  return out;
}

CommandOutput cmd_apply(const ExperimentConfig& cfg) {
  if (!cfg.apply) throw ConfigError(cfg.source_name + ":1: /: the apply command needs an 'apply' section");
  const ApplySection& a = *cfg.apply;
  CommandOutput out;
  const OperatorSpec op = make_operator(cfg, cfg.measure);
  const MatrixApplication m = apply_matrix_checked(op, a.f.f, cfg.p, cfg.alpha);
  CsvTable table(cfg.hash, {"re_z", "im_z", "re_series", "im_series", "re_integral", "im_integral"});
  table.add_header("well_definedness_warning", bool_text(m.well_definedness_warning));
  for (const cplx& z : a.z) {
    const cplx series = m.result.evaluate(z);
    const cplx integral = apply_integral(op, a.f.f, z, cfg.tol);
    table.add_row({z.real(), z.imag(), series.real(), series.imag(), integral.real(), integral.imag()});
  }
  json body{{"function", a.f.name},
            {"input", a.f.f},
            {"result", m.result},
            {"well_definedness_warning", m.well_definedness_warning},
            {"gate", m.gate}};
  out.files = {{"apply.json", dump_json(tagged(cfg, body))},
               {"apply.csv", table.str()},
               {"matrix.csv", matrix_csv(op, cfg.hash, a.matrix_dump).str()}};
  out.text = "applied to " + a.f.name + " (degree " + std::to_string(a.f.f.degree()) + "), N = " +
             std::to_string(cfg.order) + (m.well_definedness_warning ? "; WARNING: measure fails the gate" : "") +
             "\n";
  return out;
}

CommandOutput cmd_verify_identity(const ExperimentConfig& cfg) {
  CommandOutput out;
  const OperatorSpec op = make_operator(cfg, cfg.measure);
  const GateResult gate = well_definedness_gate(cfg.measure, cfg.p, cfg.alpha);
  CsvTable table(cfg.hash, {"function", "re_z", "im_z", "re_matrix", "im_matrix", "re_integral", "im_integral",
                            "residual"});
  table.add_header("well_definedness_warning", bool_text(!gate.pass));
  json per_function = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < cfg.verify.functions.size(); ++i) {
    const NamedFunction& nf = cfg.verify.functions[i];
    const TaylorPoly b = apply_matrix(op, nf.f);
    double fn_worst = 0.0;
    for (const cplx& z : cfg.verify.z) {
      const cplx series = b.evaluate(z);
      const cplx integral = apply_integral(op, nf.f, z, cfg.tol);
      const double residual = std::abs(series - integral) / (1.0 + std::abs(integral));
      fn_worst = std::max(fn_worst, residual);
      table.add_row({static_cast<double>(i), z.real(), z.imag(), series.real(), series.imag(), integral.real(),
                     integral.imag(), residual});
    }
    worst = std::max(worst, fn_worst);
    per_function.push_back({{"index", i}, {"name", nf.name}, {"max_residual", fn_worst}});
  }
  json body{{"well_definedness_warning", !gate.pass},
            {"gate", gate},
            {"max_residual", worst},
            {"functions", per_function}};
  out.files = {{"verify.json", dump_json(tagged(cfg, body))}, {"verify.csv", table.str()}};
  out.text = std::string(gate.pass ? "" : "WARNING: measure fails the well-definedness gate\n") +
             "max residual " + format_double(worst) + " over " + std::to_string(cfg.verify.functions.size()) +
             " functions x " + std::to_string(cfg.verify.z.size()) + " points\n";
  return out;
}

CommandOutput cmd_probe(const ExperimentConfig& cfg) {
  if (!cfg.probe) throw ConfigError(cfg.source_name + ":1: /: the probe command needs a 'probe' section");
  const ProbeSection& pr = *cfg.probe;
  CommandOutput out;

  if (pr.kind == "duality") {
    json results = json::array();
    CsvTable table(cfg.hash, {"case", "bergman_residual", "dirichlet_residual", "dirichlet_residual_kernel"});
    double bergman = 0.0, dirichlet = 0.0;
    const OperatorSpec op = make_operator(cfg, cfg.measure);
    for (std::size_t i = 0; i < pr.cases.size(); ++i) {
      const DualityResult b = duality_identity_bergman(op, pr.cases[i].f, pr.cases[i].g);
      const DualityResult d = duality_identity_dirichlet(op, pr.cases[i].f, pr.cases[i].g);
      bergman = std::max(bergman, b.residual);
      dirichlet = std::max(dirichlet, d.residual);
      results.push_back({{"case", i}, {"bergman", b}, {"dirichlet", d}});
      table.add_row({static_cast<double>(i), b.residual, d.residual, d.residual_kernel});
    }
    out.files = {{"duality.json", dump_json(tagged(cfg, {{"cases", results}}))}, {"duality.csv", table.str()}};
    out.text = "Bergman pairing max residual " + format_double(bergman) + "; Dirichlet pairing max residual " +
               format_double(dirichlet) + "\n";
    return out;
  }

  std::vector<std::pair<std::optional<double>, MeasureSpec>> measures;
  if (pr.variants.empty()) {
    measures.emplace_back(std::nullopt, cfg.measure);
  } else {
    for (double s : pr.variants) measures.emplace_back(s, MeasureSpec::power_family(s));
  }
  json summary = json::array();
  std::vector<double> sups;
  for (std::size_t v = 0; v < measures.size(); ++v) {
    const OperatorSpec op = make_operator(cfg, measures[v].second);
    ProbeResult result;
    if (pr.kind == "lower_bound") {
      result = lower_bound_scan(op, cfg.p, cfg.q, cfg.alpha, pr.a_grid);
    } else if (pr.kind == "ratio_sup") {
      const SpaceParams source{pr.source_kind, cfg.p, cfg.alpha};
      const SpaceParams target{pr.target_kind, cfg.q, pr.target_alpha.value_or(cfg.beta - 2.0)};
      result = ratio_sup(op, source, target, pr.family, pr.a_grid, operator_image_grid(), cfg.seed, pr.count);
    } else {
      result = compactness_probe(op, *pr.s, pr.r_grid, SpaceParams{pr.source_kind, cfg.p, cfg.alpha}, pr.a_grid);
    }
    if (measures[v].first) result.parameters.emplace_back("variant_s", *measures[v].first);
    const std::string stem =
        "probe_" + pr.kind + (measures.size() > 1 ? "_v" + std::to_string(v) : std::string());
    json body = result;
    out.files.emplace_back(stem + ".json", dump_json(tagged(cfg, body)));
    out.files.emplace_back(stem + ".csv", probe_csv(result, cfg.hash).str());
    sups.push_back(result.sup);
    json line{{"file", stem}, {"sup", result.sup}, {"slope", result.slope}, {"verdict", to_string(result.verdict)}};
    if (measures[v].first) line["variant_s"] = *measures[v].first;
    if (result.decay) line["decay"] = to_string(*result.decay);
    summary.push_back(line);
    out.text += stem + ": sup " + format_double(result.sup) + ", slope " + format_double(result.slope) + ", " +
                to_string(result.verdict) + (result.decay ? ", decay " + to_string(*result.decay) : "") + "\n";
  }
  if (measures.size() > 1) {
    bool ordered = true;
    for (std::size_t i = 1; i < sups.size(); ++i) {
      ordered = ordered && (pr.variants[i] > pr.variants[i - 1] ? sups[i] <= sups[i - 1] : sups[i] >= sups[i - 1]);
    }
    out.files.emplace_back("probe_summary.json",
                           dump_json(tagged(cfg, {{"variants", summary}, {"sups_ordered_by_s", ordered}})));
    out.text += std::string("sups ") + (ordered ? "nonincreasing" : "NOT monotone") + " in s\n";
  }
  return out;
}

std::string selftest_hash(std::uint64_t seed, const std::vector<int>& only) {
  return config_hash(json{{"command", "selftest"}, {"seed", seed}, {"only", only}});
}

CommandOutput cmd_selftest(std::uint64_t seed, const std::vector<int>& only) {
  CommandOutput out;
  AcceptanceOptions options{seed, only};
  json timings = json::object();
  bool all = true;
  const auto results = run_acceptance(options, [&](const CriterionResult& r) {
    const std::string line = format_line(r);
    std::fputs((line + "\n").c_str(), stdout);
    std::fflush(stdout);
    timings[std::to_string(r.id)] = r.seconds;
    all = all && r.pass;
  });
  const std::string hash = selftest_hash(seed, only);
  json body = results_json(results, seed);
  body["config_hash"] = hash;
  CsvTable table(hash, {"criterion", "pass"});
  for (const auto& r : results) table.add_row({static_cast<double>(r.id), r.pass ? 1.0 : 0.0});
  out.files = {{"acceptance.json", dump_json(body)}, {"acceptance.csv", table.str()}};
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  out.text = std::to_string(results.size() - failed) + " of " + std::to_string(results.size()) +
             " criteria passed\n";
  out.exit_code = all ? 0 : 1;
  out.meta["criterion_seconds"] = timings;
  return out;
}

CommandOutput cmd_verify_hash(const std::string& expected_hash, const std::string& dir) {
  CommandOutput out;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && entry.path().filename() != "run_meta.json" && (ext == ".csv" || ext == ".json")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  bool ok = !files.empty();
  for (const auto& path : files) {
    std::ifstream in(path);
    std::ostringstream text;
    text << in.rdbuf();
    const std::string found = embedded_hash(text.str());
    const bool match = found == expected_hash;
    ok = ok && match;
    out.text += (match ? "ok        " : "MISMATCH  ") + path.filename().string() + " (" +
                (found.empty() ? "no hash" : found) + ")\n";
  }
  if (files.empty()) out.text = "no result files in " + dir + "\n";
  out.text += "expected " + expected_hash + "\n";
  out.exit_code = ok ? 0 : 1;
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidCase*>(&e)) return 2;
  if (dynamic_cast<const TruncationInsufficient*>(&e)) return 4;
  if (dynamic_cast<const NumericalError*>(&e) || dynamic_cast<const DegenerateTail*>(&e)) return 3;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return 2;
  return 3;
}

void write_outputs(const std::string& dir, const std::string& command, const CommandOutput& out,
                   double wall_seconds, int jobs) {
  fs::create_directories(dir);
  json names = json::array();
  for (const auto& [name, contents] : out.files) {
    std::ofstream file(fs::path(dir) / name, std::ios::binary);
    file << contents;
    if (!file) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    names.push_back(name);
  }
  json meta = out.meta;
  meta["command"] = command;
  meta["wall_seconds"] = wall_seconds;
  meta["jobs"] = jobs;
  meta["files"] = names;
  meta["exit_code"] = out.exit_code;
  std::ofstream file(fs::path(dir) / "run_meta.json", std::ios::binary);
  file << meta.dump(2) << "\n";
}

}  // namespace genhilbert
