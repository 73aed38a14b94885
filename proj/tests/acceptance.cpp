// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "regen/atoms.hpp"
#include "regen/exponents.hpp"
#include "regen/harness.hpp"
#include "regen/occupancy.hpp"
#include "regen/path.hpp"

using namespace regen;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

ExperimentConfig config(const char* file, Suite suite) {
  auto c = load_config(std::string(REGEN_CONFIG_DIR) + "/" + file);
  c.suite = suite;
  c.workers = std::max(1u, std::thread::hardware_concurrency());
  return c;
}

ExperimentStats run(const char* file, Suite suite) {
  auto st = run_suite(config(file, suite));
  if (!st.error.empty()) std::fprintf(stderr, "%s: %s\n", file, st.error.c_str());
  return st;
}

const CheckResult* check(const ExperimentStats& st, const std::string& name) {
  for (const auto& c : st.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Outcome exponent_consistency() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool finite = true;
  for (const char* name : {"gamma", "compound-poisson"}) {
    const auto model = make_model(name, {});
    for (double n : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
      const double a = phi_series(model, n), b = phi_poissonized(model, n);
      worst = std::max(worst, std::abs(a - b) / b);
    }
    double prev = 0.0;
    for (double n = 100.0; n <= 1e6; n *= 10.0) {
      const double v = phi_poissonized(model, n);
      finite = finite && std::isfinite(v) && v > prev;
      prev = v;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-8 && finite && secs < 10.0, fmt("max rel err %.2e", worst)};
}

Outcome martingale() {
  const auto st = run("gamma_martingale.toml", Suite::Martingale);
  if (st.records.empty()) return {false, st.error};
  const double r = st.records[0].mart_ratio;
  return {r >= 0.9 && r <= 1.1 && st.runtime_seconds < 300.0, fmt("ratio %.4f, %.1f s", r, st.runtime_seconds)};
}

Outcome mean_bracket() {
  auto c = config("gamma_lln.toml", Suite::Lln);
  c.n_list = {1e3, 1e4, 1e5};
  const auto st = run_suite(c);
  if (st.records.size() != 3) return {false, st.error};
  bool ok = true;
  std::string detail;
  for (const auto& r : st.records) {
    const double d = r.mean_k - r.psi;
    ok = ok && d >= -3.0 * r.se_mean && d <= 5.0 * r.phi + 3.0 * r.se_mean;
    detail += fmt("(K-Psi)/Phi=%.3f ", d / r.phi);
  }
  return {ok, detail};
}

Outcome variance() {
  const auto st = run("gamma_variance.toml", Suite::Variance);
  if (st.records.size() != 3) return {false, st.error};
  const auto* inc = check(st, "variance_increasing");
  const auto* band = check(st, "variance_last_in_band");
  const auto* cube = check(st, "variance_log_cubed");
  const bool ok = inc && band && cube && inc->pass && band->pass && cube->pass && st.replicates >= 10000;
  const double g_sigma2 = make_model("gamma", {}).sigma2();
  std::string detail;
  for (const auto& r : st.records) detail += fmt("%.3f ", r.var_k / (g_sigma2 * r.psi2));
  return {ok, "Var/Psi2 " + detail + (cube ? cube->detail : "")};
}

Outcome clt() {
  const auto st = run("gamma_clt.toml", Suite::Clt);
  if (st.records.size() != 3) return {false, st.error};
  const auto& last = st.records.back();
  const bool ok = st.all_passed() && last.ks <= 0.1 && std::abs(last.skew) <= 0.35;
  return {ok, fmt("KS %.4f -> %.4f, skew %.3f", st.records.front().ks, last.ks, last.skew)};
}

Outcome classification() {
  bool ok = true;
  double total = 0.0;
  std::string detail;
  for (const char* f : {"classify_gamma.toml", "classify_fast.toml", "classify_loglog.toml"}) {
    const auto st = run(f, Suite::Classify);
    ok = ok && st.all_passed() && !st.checks.empty();
    total += st.runtime_seconds;
    detail += st.extra.contains("regime") ? st.extra["regime"].value("regime", std::string("?")) + " " : "? ";
  }
  return {ok && total < 5.0, detail + fmt("%.2f s", total)};
}

Outcome limit_oracles() {
  const auto st = run("limits.toml", Suite::Limits);
  const auto& e = st.extra;
  if (!e.contains("y1") || !e.contains("y2")) return {false, st.error};
  const double v1 = e["y1"]["var"].get<double>(), v2 = e["y2"]["var"].get<double>();
  const bool ok = std::abs(v1 - 1.0 / 3.0) <= 0.02 && std::abs(v2 - 0.5) <= 0.03 && st.replicates >= 100000;
  return {ok, fmt("Var Y1 %.5f, Var Y2 %.5f", v1, v2)};
}

Outcome envelope_bounds() {
  bool ok = true;
  std::size_t n = 0;
  for (const char* f : {"bounds_gamma.toml", "bounds_fast.toml", "bounds_loglog.toml"}) {
    const auto st = run(f, Suite::Bounds);
    ok = ok && st.all_passed();
    n += st.checks.size();
  }
  return {ok && n > 0, fmt("%.0f probe checks", static_cast<double>(n))};
}

OccupancyResult brute_force(const SubordinatorPath& p, const std::vector<double>& loc) {
  OccupancyResult r;
  for (const auto& j : p.jumps) {
    std::size_t c = 0;
    for (double y : loc) c += y > j.s_pre && y < j.s_pre + j.x;
    if (c > 0) {
      ++r.k_total;
      r.composition.push_back(c);
    }
  }
  return r;
}

Outcome occupancy() {
  std::mt19937_64 gen(9);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    SubordinatorPath p;
    double t = 0.0, level = 0.0;
    const int jumps = std::uniform_int_distribution<int>(0, 10)(gen);
    for (int i = 0; i < jumps; ++i) {
      t += std::uniform_real_distribution<double>(0.1, 1.0)(gen);
      const double x = std::bernoulli_distribution(0.5)(gen) ? 0.5 * std::uniform_int_distribution<int>(1, 6)(gen)
                                                              : std::uniform_real_distribution<double>(0.01, 3.0)(gen);
      p.jumps.push_back({t, level, x});
      level += x;
    }
    p.horizon_t = t + 1.0;
    p.horizon_s = level;
    std::vector<double> loc(std::uniform_int_distribution<int>(0, 10)(gen));
    for (auto& y : loc) {
      y = std::bernoulli_distribution(0.5)(gen) ? 0.5 * std::uniform_int_distribution<int>(0, 40)(gen)
                                                 : std::uniform_real_distribution<double>(0.0, level + 1.0)(gen);
    }
    std::sort(loc.begin(), loc.end());
    const auto a = count_occupied(p, loc), b = brute_force(p, loc);
    mismatches += a.k_total != b.k_total || a.composition != b.composition;
  }
  const auto g = make_model("gamma", {});
  const PathSampler sampler(g, 1e-7);
  std::size_t mult_mismatches = 0;
  for (std::uint32_t seed = 0; seed < 100; ++seed) {
    const auto path = sampler.sample(std::log(1e3) + 5.0, 0.0, seed, 0);
    const auto loc = project(sample_atoms(1e3, seed), 1e3);
    std::vector<double> u(loc.size());
    std::transform(loc.begin(), loc.end(), u.begin(), [](double y) { return -std::expm1(-y); });
    const auto a = count_occupied(path, loc), m = count_occupied_multiplicative(path, u);
    mult_mismatches += a.k_total != m.k_total || a.composition != m.composition;
  }
  return {mismatches == 0 && mult_mismatches == 0,
          fmt("%.0f brute-force and %.0f multiplicative mismatches", static_cast<double>(mismatches),
              static_cast<double>(mult_mismatches))};
}

Outcome truncation_tail() {
  const auto st = run("gamma_simulate.toml", Suite::Simulate);
  for (const auto& r : st.records) {
    if (r.n == 1e4) return {r.mean_tail <= 1.0 + 3.0 * r.se_tail, fmt("mean %.4f, SE %.4f", r.mean_tail, r.se_tail)};
  }
  return {false, "n = 1e4 missing " + st.error};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exponent consistency", exponent_consistency},
      {"martingale identity", martingale},
      {"mean bracket", mean_bracket},
      {"variance asymptotics", variance},
      {"CLT shape", clt},
      {"regime classification", classification},
      {"limit-process oracles", limit_oracles},
      {"envelope bounds", envelope_bounds},
      {"occupancy oracle", occupancy},
      {"tail truncation", truncation_tail},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
