#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regen/regime.hpp"

namespace regen {

// A small TOML subset: [section] headers, key = value with values that are
// double-quoted strings, numbers, true/false or arrays of numbers, and
// #-comments. Arrays may span lines.
struct ConfigValue {
  enum class Kind { Number, String, Bool, NumberArray } kind = Kind::Number;
  double number = 0.0;
  std::string text;  // string value, or the raw token for numbers
  bool boolean = false;
  std::vector<double> numbers;
};

using ConfigTable = std::map<std::string, std::map<std::string, ConfigValue>>;  // "" = top level

ConfigTable parse_config_text(const std::string& text);

enum class Suite { Simulate, Lln, Variance, Clt, Martingale, Classify, Bounds, Limits };

std::string to_string(Suite s);
Suite suite_from_string(const std::string& s);
Regime regime_from_string(const std::string& s);

struct ExperimentConfig {
  Suite suite = Suite::Simulate;
  std::string model = "gamma";
  std::map<std::string, double> model_params;
  std::vector<double> n_list;
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
  double eps_budget = 0.01;
  unsigned workers = 1;
  bool write_replicates = false;

  // classify
  std::optional<Regime> expect_regime;
  std::pair<double, double> gamma_hat_range{0.8, 1.2};
  std::vector<double> probe;  // empty: the model's default probe grid
  // bounds
  std::vector<double> bounds_m{10.0, 1e3, 1e6, 1e9, 1e12};
  double bound_k = 2.0;
  // limits
  double limit_gamma = 1.0;
  double limit_sigma = 1.0;
  double y1_step = 1e-3;
  double y2_step = 0.01;
  double y2_u_max = 20.0;
};

// Top-level keys: suite, n_list, replicates, seed, eps_budget, workers,
// write_replicates. Sections: [model] (name plus numeric parameters),
// [classify], [bounds], [limits].
ExperimentConfig config_from_table(const ConfigTable& table);
ExperimentConfig load_config(const std::string& path);

// Throws ConfigError when the config cannot drive its suite.
void validate(const ExperimentConfig& config);

}  // namespace regen
