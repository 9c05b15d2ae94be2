#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "genhilbert/experiment.hpp"
#include "genhilbert/parallel.hpp"

namespace gh = genhilbert;

int main(int argc, char** argv) {
  CLI::App app{"Generalized Hilbert operator experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  double tol = 0.0;
  int jobs = 0;
  std::vector<int> only;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "experiment config (JSON)");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_option("--jobs", jobs, "worker threads (overrides the config)")->check(CLI::Range(1, 1024));
    sub->add_option("--tol", tol, "quadrature tolerance (overrides the config)")->check(CLI::PositiveNumber);
  };

  const std::vector<std::pair<std::string, std::string>> config_commands{
      {"moments", "moments and tails of the measure"},
      {"classify", "Carleson constant, verdict and exponent fit"},
      {"apply", "apply the truncated matrix to a function"},
      {"verify-identity", "matrix form against integral form"},
      {"probe", "lower-bound scan, ratio sup, duality or compactness probe"},
  };
  for (const auto& [name, help] : config_commands) add_common(app.add_subcommand(name, help), true);
  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  add_common(selftest, false);
  selftest->add_option("--only", only, "criterion ids to run");
  auto* verify_hash = app.add_subcommand("verify-hash", "check the config hash embedded in result files");
  add_common(verify_hash, false);
  verify_hash->add_option("--only", only, "criterion ids, when checking selftest output");

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();

  gh::Overrides overrides;
  if (sub->count("--seed")) overrides.seed = seed;
  if (sub->count("--tol")) overrides.tol = tol;
  if (sub->count("--jobs")) overrides.jobs = jobs;

  const auto start = std::chrono::steady_clock::now();
  try {
    gh::CommandOutput out;
    int effective_jobs = overrides.jobs.value_or(1);
    if (command == "selftest") {
      gh::set_default_jobs(effective_jobs);
      out = gh::cmd_selftest(overrides.seed.value_or(42), only);
    } else if (command == "verify-hash") {
      const std::string expected = config_path.empty()
                                       ? gh::selftest_hash(overrides.seed.value_or(42), only)
                                       : gh::load_config_file(config_path, overrides).hash;
      out = gh::cmd_verify_hash(expected, out_dir);
      std::fputs(out.text.c_str(), stdout);
      return out.exit_code;
    } else {
      const gh::ExperimentConfig cfg = gh::load_config_file(config_path, overrides);
      effective_jobs = cfg.jobs;
      gh::set_default_jobs(cfg.jobs);
      if (command == "moments") {
        out = gh::cmd_moments(cfg);
      } else if (command == "classify") {
        out = gh::cmd_classify(cfg);
      } else if (command == "apply") {
        out = gh::cmd_apply(cfg);
      } else if (command == "verify-identity") {
        out = gh::cmd_verify_identity(cfg);
      } else {
        out = gh::cmd_probe(cfg);
      }
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    gh::write_outputs(out_dir, command, out, wall, effective_jobs);
    std::fputs(out.text.c_str(), stdout);
    return out.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return gh::exit_code_for(e);
  }
}
