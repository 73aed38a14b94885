#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "regen/config.hpp"

namespace regen {

// Per-intensity Monte Carlo summary. The first twelve fields are the CSV columns.
struct NRecord {
  double n = 0.0;
  double mean_k = 0.0, se_mean = 0.0, var_k = 0.0, se_var = 0.0;
  double psi = 0.0, psi2 = 0.0, phi = 0.0, ell = 0.0;
  double mart_ratio = 0.0, ks = 0.0, skew = 0.0;

  double mean_a = 0.0, se_mean_a = 0.0, var_a = 0.0;
  double mean_tail = 0.0, se_tail = 0.0;  // K_n - K_n(tau_n)
  double mu_n = 0.0, sigma_n2 = 0.0;      // centering and scaling used for ks/skew
  bool sample_standardized = false;       // regime indeterminate, sample moments used
  std::size_t replicates = 0;

  bool operator==(const NRecord& o) const;  // NaN fields compare equal
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  bool operator==(const CheckResult&) const = default;
};

struct ExperimentStats {
  std::string suite;
  std::string model;
  std::uint64_t seed = 0;
  double eps = 0.0;
  std::size_t replicates = 0;
  std::vector<NRecord> records;
  std::vector<CheckResult> checks;
  nlohmann::json extra = nlohmann::json::object();  // suite-specific reports
  std::string error;                                 // nonempty if the run stopped early
  double runtime_seconds = 0.0;                      // excluded from stats.json

  bool all_passed() const;
  bool operator==(const ExperimentStats& o) const;   // ignores runtime
};

// Raw per-replicate draws behind the Monte Carlo suites, indexed [n][replicate].
struct ReplicateTable {
  std::vector<double> n_list;
  std::vector<std::vector<double>> k, a, tail;
};

// Simulates every replicate on one path per replicate with coupled atoms, so
// all intensities share randomness. Work is split by replicate index; the
// result does not depend on the worker count.
ReplicateTable simulate_replicates(const ExperimentConfig& config, double eps);

// Module errors stop the run and are recorded in `error`; whatever finished
// before stays in the result. Raw draws are copied to `keep` when given.
ExperimentStats run_suite(const ExperimentConfig& config, ReplicateTable* keep = nullptr);

void write_csv(const ExperimentStats& stats, std::ostream& out);
nlohmann::json to_json(const ExperimentStats& stats);
ExperimentStats stats_from_json(const nlohmann::json& j);

// stats.csv, stats.json and run_info.json (runtime and worker count) in dir;
// replicates.csv too when given.
void emit(const ExperimentStats& stats, const std::string& dir, unsigned workers,
          const ReplicateTable* replicates = nullptr);

}  // namespace regen
