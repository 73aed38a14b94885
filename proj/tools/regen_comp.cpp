#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "regen/config.hpp"
#include "regen/error.hpp"
#include "regen/harness.hpp"

namespace {

struct Verb {
  const char* name;
  regen::Suite suite;
  const char* help;
};

constexpr Verb kVerbs[] = {
    {"simulate", regen::Suite::Simulate, "simulate K_n and A_n, check the truncation tail"},
    {"verify-lln", regen::Suite::Lln, "law of large numbers and the mean bracket"},
    {"verify-variance", regen::Suite::Variance, "variance of K_n against sigma^2 Psi_2"},
    {"verify-clt", regen::Suite::Clt, "normal shape of the standardized K_n"},
    {"verify-martingale", regen::Suite::Martingale, "E(K - A)^2 against E A"},
    {"classify", regen::Suite::Classify, "growth regime of L(s)"},
    {"verify-bounds", regen::Suite::Bounds, "envelope bounds on Phi"},
    {"limits", regen::Suite::Limits, "limit processes and kernel normalization"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Occupancy counts of regenerative compositions driven by subordinators"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  for (const auto& v : kVerbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    sub->add_option("--config", config_path, "config file (TOML subset)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  regen::Suite suite = regen::Suite::Simulate;
  for (const auto& v : kVerbs)
    if (app.got_subcommand(v.name)) suite = v.suite;

  try {
    regen::ExperimentConfig config = regen::load_config(config_path);
    config.suite = suite;
    if (seed) config.seed = *seed;
    if (app.get_subcommands().front()->count("--workers") > 0) config.workers = workers;
    regen::ReplicateTable table;
    const auto stats = regen::run_suite(config, config.write_replicates ? &table : nullptr);
    regen::emit(stats, out_dir, config.workers, config.write_replicates && stats.error.empty() ? &table : nullptr);
    for (const auto& c : stats.checks) std::printf("%s %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    if (!stats.error.empty()) {
      std::fprintf(stderr, "error: %s\n", stats.error.c_str());
      return 1;
    }
    std::printf("%s: %zu checks, results in %s\n", regen::to_string(suite).c_str(), stats.checks.size(),
                out_dir.c_str());
    return stats.all_passed() ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
