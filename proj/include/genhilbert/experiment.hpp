#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "genhilbert/carleson.hpp"
#include "genhilbert/measure.hpp"
#include "genhilbert/probes.hpp"
#include "genhilbert/spaces.hpp"
#include "genhilbert/taylor.hpp"

namespace genhilbert {

/// Schema or syntax violation, formatted "<source>:<line>: <pointer>: <what>".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Maps JSON pointers of a document to the line where each value starts.
class SourceLocator {
 public:
  explicit SourceLocator(const std::string& text);
  /// Line of the value at `pointer`, or of its nearest located ancestor.
  int line_of(const std::string& pointer) const;

 private:
  std::map<std::string, int> lines_;
};

/// Values given on the command line; they replace the config's fields
/// before hashing.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> jobs;
};

struct MomentsSection {
  std::size_t count = 16;
  std::vector<double> t_grid;
};

struct ClassifySection {
  std::optional<double> exponent;
  double log_order = 0.0;
  std::vector<double> t_grid;
};

struct NamedFunction {
  std::string name;
  TaylorPoly f;
};

struct ApplySection {
  NamedFunction f;
  std::vector<cplx> z;
  /// Rows and columns in the matrix dump.
  std::size_t matrix_dump = 16;
};

struct VerifySection {
  std::vector<NamedFunction> functions;
  std::vector<cplx> z;
};

struct DualityCase {
  TaylorPoly f;
  TaylorPoly g;
};

struct ProbeSection {
  std::string kind;
  std::vector<double> a_grid;
  Family family = Family::BergmanF;
  std::optional<double> s;
  std::vector<double> r_grid;
  /// When nonempty the measure is replaced by the power family at each s.
  std::vector<double> variants;
  std::size_t count = 8;
  std::vector<DualityCase> cases;
  SpaceKind source_kind = SpaceKind::Bergman;
  SpaceKind target_kind = SpaceKind::Bergman;
  std::optional<double> target_alpha;
};

struct ExperimentConfig {
  /// Config after overrides; what the hash covers (minus "jobs").
  nlohmann::json doc;
  std::string source_name;
  std::string hash;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  int jobs = 1;
  MeasureSpec measure;
  double beta = 2.0;
  std::size_t order = 256;
  double p = 2.0;
  double q = 2.0;
  double alpha = 0.0;
  std::optional<TheoremCase> theorem_case;
  MomentsSection moments;
  ClassifySection classify;
  std::optional<ApplySection> apply;
  VerifySection verify;
  std::optional<ProbeSection> probe;
};

/// FNV-1a of the canonical (sorted-key, compact) dump with "jobs" removed.
std::string config_hash(const nlohmann::json& doc);

/// Parses and validates the whole document; nothing is computed on failure.
ExperimentConfig load_config(const std::string& text, const std::string& source_name, const Overrides& overrides);
ExperimentConfig load_config_file(const std::string& path, const Overrides& overrides);

/// Files produced by a command, written by a single writer after the
/// command finishes.
struct CommandOutput {
  std::vector<std::pair<std::string, std::string>> files;
  std::string text;
  int exit_code = 0;
  /// Extra run metadata for the sidecar (timings and the like).
  nlohmann::json meta = nlohmann::json::object();
};

CommandOutput cmd_moments(const ExperimentConfig& cfg);
CommandOutput cmd_classify(const ExperimentConfig& cfg);
CommandOutput cmd_apply(const ExperimentConfig& cfg);
CommandOutput cmd_verify_identity(const ExperimentConfig& cfg);
CommandOutput cmd_probe(const ExperimentConfig& cfg);
/// Runs the acceptance suite; exit code 1 if any criterion fails.
CommandOutput cmd_selftest(std::uint64_t seed, const std::vector<int>& only);
/// Hash recorded by selftest for the given arguments.
std::string selftest_hash(std::uint64_t seed, const std::vector<int>& only);
/// Checks that every result file in `dir` embeds `expected_hash`.
CommandOutput cmd_verify_hash(const std::string& expected_hash, const std::string& dir);

/// Exit codes: 0 success, 1 failed check, 2 config error, 3 numerical
/// failure, 4 truncation insufficiency.
int exit_code_for(const std::exception& e);

/// Writes the files and a run_meta.json sidecar (wall time, jobs, command).
void write_outputs(const std::string& dir, const std::string& command, const CommandOutput& out,
                   double wall_seconds, int jobs);

}  // namespace genhilbert
