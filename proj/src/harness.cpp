#include "regen/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <thread>

#include "regen/atoms.hpp"
#include "regen/compensator.hpp"
#include "regen/error.hpp"
#include "regen/exponents.hpp"
#include "regen/limit_laws.hpp"
#include "regen/occupancy.hpp"
#include "regen/path.hpp"
#include "regen/phi_curve.hpp"
#include "regen/quadrature.hpp"
#include "regen/regime.hpp"
#include "regen/stats.hpp"

namespace regen {
namespace {

using nlohmann::json;

struct Field {
  const char* name;
  double NRecord::*ptr;
};

constexpr Field kFields[] = {
    {"n", &NRecord::n},           {"mean_k", &NRecord::mean_k},       {"se_mean", &NRecord::se_mean},
    {"var_k", &NRecord::var_k},   {"se_var", &NRecord::se_var},       {"psi", &NRecord::psi},
    {"psi2", &NRecord::psi2},     {"phi", &NRecord::phi},             {"ell", &NRecord::ell},
    {"mart_ratio", &NRecord::mart_ratio}, {"ks", &NRecord::ks},       {"skew", &NRecord::skew},
    {"mean_a", &NRecord::mean_a}, {"se_mean_a", &NRecord::se_mean_a}, {"var_a", &NRecord::var_a},
    {"mean_tail", &NRecord::mean_tail}, {"se_tail", &NRecord::se_tail},
    {"mu_n", &NRecord::mu_n},     {"sigma_n2", &NRecord::sigma_n2},
};
constexpr std::size_t kCsvColumns = 12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

// JSON has no inf/nan; they travel as strings.
json number_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return kNaN;
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw IOError("bad number '" + s + "' in stats json");
  }
  return j.get<double>();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// Runs body(i) for i in [0, count) on up to `workers` threads. Results must be
// written by index, which keeps the output independent of scheduling.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  const auto threads = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void add_check(ExperimentStats& st, std::string name, bool pass, std::string detail) {
  st.checks.push_back({std::move(name), pass, std::move(detail)});
}

std::string n_label(double n) { return fmt_short("n=%.4g", n); }

bool is_monte_carlo(Suite s) {
  return s == Suite::Simulate || s == Suite::Lln || s == Suite::Variance || s == Suite::Clt ||
         s == Suite::Martingale;
}

// Horizon past the largest log n after which remaining gaps are hit with
// probability below e^{-12}.
constexpr double kHorizonMargin = 12.0;

ReplicateTable simulate(const LevyModel& model, const ExperimentConfig& c, double eps) {
  const double n_max = c.n_list.back();
  const PathSampler sampler(model, eps);
  const PhiCurve curve(model, std::log(n_max) + 1.0);
  const std::size_t nn = c.n_list.size(), reps = c.replicates;
  ReplicateTable t;
  t.n_list = c.n_list;
  t.k.assign(nn, std::vector<double>(reps));
  t.a.assign(nn, std::vector<double>(reps));
  t.tail.assign(nn, std::vector<double>(reps));
  const double target = std::log(n_max) + kHorizonMargin;
  parallel_for(reps, c.workers, [&](std::size_t r) {
    const auto rep = static_cast<std::uint32_t>(r);
    const auto path = sampler.sample(target, 0.0, c.seed, rep);
    const auto thresholds = gap_thresholds(path, c.seed, rep);
    for (std::size_t i = 0; i < nn; ++i) {
      const double n = c.n_list[i];
      t.k[i][r] = static_cast<double>(std::count_if(thresholds.begin(), thresholds.end(),
                                                    [n](double th) { return th <= n; }));
      t.a[i][r] = compensator_total(curve, path, n);
      t.tail[i][r] = truncation_tail_from_thresholds(n, path, thresholds);
    }
  });
  return t;
}

std::optional<RegimeReport> try_classify(const LevyModel& model, const ExperimentConfig& c) {
  try {
    const auto probe = c.probe.empty() ? default_probe_grid(model) : c.probe;
    return classify_regime(model, probe);
  } catch (const BadGrid&) {
    return std::nullopt;
  }
}

json regime_json(const RegimeReport& r) {
  return {{"regime", to_string(r.regime)}, {"gamma_hat", r.gamma_hat}, {"trend", r.trend},
          {"probe", r.probe_points}, {"ratio_trace", r.ratio_trace}};
}

// Consecutive estimates may not drop by more than z combined standard errors.
bool increasing_within(const std::vector<double>& v, const std::vector<double>& se, double z) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] - v[i - 1] < -z * std::hypot(se[i], se[i - 1])) return false;
  }
  return true;
}

void run_monte_carlo(const ExperimentConfig& c, const LevyModel& model, ExperimentStats& st, ReplicateTable* keep) {
  const double n_max = c.n_list.back();
  st.eps = choose_eps(model, n_max, c.eps_budget);
  const ReplicateTable table = simulate(model, c, st.eps);
  const PhiCurve curve(model, std::log(n_max) + 1.0);
  const auto report = try_classify(model, c);
  const bool regime_known = report && report->regime != Regime::Indeterminate;
  st.extra["standardization"] = regime_known ? "regime" : "sample";
  if (report) st.extra["regime"] = regime_json(*report);
  const double sigma2 = model.sigma2();
  const double reps = static_cast<double>(c.replicates);

  for (std::size_t i = 0; i < c.n_list.size(); ++i) {
    const double n = c.n_list[i];
    const auto& k = table.k[i];
    const auto& a = table.a[i];
    NRecord r;
    r.n = n;
    r.replicates = c.replicates;
    const Summary sk = summarize(k), sa = summarize(a), stl = summarize(table.tail[i]);
    r.mean_k = sk.mean;
    r.se_mean = sk.se_mean;
    r.var_k = sk.var;
    r.se_var = sk.se_var;
    r.mean_a = sa.mean;
    r.se_mean_a = sa.se_mean;
    r.var_a = sa.var;
    r.mean_tail = stl.mean;
    r.se_tail = stl.se_mean;
    r.psi = curve.psi(n);
    r.psi2 = big_psi2(model, n);
    r.phi = curve.phi(n);
    r.ell = curve.ell(n);
    std::vector<double> d2(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) d2[j] = (k[j] - a[j]) * (k[j] - a[j]);
    const double a_sum = pairwise_sum(a);
    r.mart_ratio = a_sum > 0.0 ? pairwise_sum(d2) / a_sum : kNaN;
    if (regime_known) {
      const auto m = regime_moments(curve, n, *report);
      r.mu_n = m.mu;
      r.sigma_n2 = m.sigma2;
    } else {
      r.mu_n = sk.mean;
      r.sigma_n2 = sk.var;
      r.sample_standardized = true;
    }
    r.skew = sk.skewness;
    r.ks = kNaN;
    if (k.size() >= 100 && r.sigma_n2 > 0.0) {
      std::vector<double> z(k.size());
      const double scale = std::sqrt(r.sigma_n2);
      for (std::size_t j = 0; j < k.size(); ++j) z[j] = (k[j] - r.mu_n) / scale;
      r.ks = ks_normal(z);
    }
    st.records.push_back(r);
  }
  if (keep != nullptr) *keep = table;

  const auto& recs = st.records;
  const NRecord& last = recs.back();
  switch (c.suite) {
    case Suite::Simulate:
      for (const auto& r : recs) {
        add_check(st, "truncation_tail " + n_label(r.n), r.mean_tail <= 1.0 + 3.0 * r.se_tail,
                  fmt_short("mean %.4f, bound 1 + 3*%.4f", r.mean_tail, r.se_tail));
      }
      break;
    case Suite::Lln: {
      std::vector<double> gap, se;
      for (const auto& r : recs) {
        gap.push_back(std::abs(r.mean_k / r.psi - 1.0));
        se.push_back(r.se_mean / r.psi);
        const double d = r.mean_k - r.psi;
        add_check(st, "mean_bracket " + n_label(r.n), d >= -3.0 * r.se_mean && d <= 5.0 * r.phi + 3.0 * r.se_mean,
                  fmt_short("mean_k - psi = %.4f, se %.4f, 5 phi = %.4f", d, r.se_mean, 5.0 * r.phi));
      }
      // |mean_k/psi - 1| shrinking: the ratio approaches 1 from above
      // since mean_k >= psi.
      std::vector<double> neg(gap.size());
      std::transform(gap.begin(), gap.end(), neg.begin(), [](double g) { return -g; });
      add_check(st, "lln_converging", increasing_within(neg, se, 3.0),
                fmt_short("|mean_k/psi - 1| from %.4f to %.4f", gap.front(), gap.back()));
      const double last_ratio = last.mean_k / last.psi;
      add_check(st, "lln_last_in_band", last_ratio >= 0.8 && last_ratio <= 1.2,
                fmt_short("mean_k/psi = %.4f at n=%.4g, band [0.8, 1.2]", last_ratio, last.n));
      break;
    }
    case Suite::Variance: {
      std::vector<double> ratio, se;
      for (const auto& r : recs) {
        ratio.push_back(r.var_k / (sigma2 * r.psi2));
        se.push_back(r.se_var / (sigma2 * r.psi2));
      }
      add_check(st, "variance_increasing", increasing_within(ratio, se, 3.0),
                fmt_short("var_k/(sigma^2 psi2) from %.4f to %.4f", ratio.front(), ratio.back()));
      add_check(st, "variance_last_in_band", ratio.back() >= 0.6 && ratio.back() <= 1.4,
                fmt_short("var_k/(sigma^2 psi2) = %.4f, band [0.6, 1.4]", ratio.back()));
      if (c.model == "gamma") {
        const double l = std::log(last.n);
        const double v = last.var_k / (sigma2 * l * l * l / 3.0);
        add_check(st, "variance_log_cubed", v >= 0.5 && v <= 1.5,
                  fmt_short("var_k/(sigma^2 log^3 n / 3) = %.4f, band [0.5, 1.5]", v));
      }
      break;
    }
    case Suite::Clt: {
      bool decreasing = true;
      const double slack = 1.0 / std::sqrt(reps);
      for (std::size_t i = 1; i < recs.size(); ++i) decreasing = decreasing && recs[i].ks <= recs[i - 1].ks + slack;
      add_check(st, "clt_ks_decreasing", decreasing,
                fmt_short("ks from %.4f to %.4f, slack %.4f", recs.front().ks, last.ks, slack));
      add_check(st, "clt_ks_last", last.ks <= 0.1, fmt_short("ks = %.4f at n=%.4g, bound 0.1", last.ks, last.n));
      add_check(st, "clt_skew_last", std::abs(last.skew) <= 0.35,
                fmt_short("skewness = %.4f, bound 0.35", last.skew));
      break;
    }
    case Suite::Martingale:
      for (const auto& r : recs) {
        add_check(st, "martingale_ratio " + n_label(r.n), r.mart_ratio >= 0.9 && r.mart_ratio <= 1.1,
                  fmt_short("mean (K-A)^2 / mean A = %.4f, band [0.9, 1.1]", r.mart_ratio));
      }
      break;
    default:
      break;
  }
}

void run_classify(const ExperimentConfig& c, const LevyModel& model, ExperimentStats& st) {
  const auto probe = c.probe.empty() ? default_probe_grid(model) : c.probe;
  const RegimeReport report = classify_regime(model, probe);
  st.extra["regime"] = regime_json(report);
  if (c.expect_regime) {
    add_check(st, "regime", report.regime == *c.expect_regime,
              "classified " + to_string(report.regime) + ", expected " + to_string(*c.expect_regime));
    if (*c.expect_regime == Regime::Moderate) {
      const auto [lo, hi] = c.gamma_hat_range;
      add_check(st, "gamma_hat", report.gamma_hat >= lo && report.gamma_hat <= hi,
                fmt_short("gamma_hat = %.4f, range [%.3g, %.3g]", report.gamma_hat, lo, hi));
    }
  }
}

void run_bounds(const ExperimentConfig& c, const LevyModel& model, ExperimentStats& st) {
  const double kap = std::max(kappa(c.bound_k), 1.0);
  json rows = json::array();
  for (double m : c.bounds_m) {
    const double log_m = std::log(m);
    std::vector<double> key_s, cross_s;
    for (int j = 0; j <= 12; ++j) {
      key_s.push_back(0.49 * log_m * (j / 6.0 - 1.0));
      cross_s.push_back(log_m / (2.0 * kap) * j / 12.0);
    }
    const bool key = key_bound_check(model, m, key_s, c.bound_k);
    const bool cross = cross_sandwich_check(model, m, cross_s, c.bound_k);
    add_check(st, "key_bound " + fmt_short("m=%.4g", m), key, "13 points in |s| <= 0.49 log m");
    add_check(st, "cross_sandwich " + fmt_short("m=%.4g", m), cross, "13 points in [0, log m / (2 kappa)]");
    const PsiBounds pb = psi_bounds(model, m, c.bound_k);
    rows.push_back({{"m", m},
                    {"ell", ell(model, m)},
                    {"key_bound", key},
                    {"cross_sandwich", cross},
                    {"small_ell_branch", pb.small_ell_branch},
                    {"psi", pb.psi},
                    {"psi_upper", pb.psi_upper},
                    {"psi2", pb.psi2},
                    {"psi2_lower", pb.psi2_lower},
                    {"psi2_upper", pb.psi2_upper}});
  }
  st.extra["probes"] = rows;
  std::vector<double> grid = c.bounds_m;
  std::sort(grid.begin(), grid.end());
  const auto s0 = a2_threshold(model, grid, c.bound_k);
  st.extra["a2_threshold"] = s0 ? json(*s0) : json(nullptr);
  if (s0 && grid.size() >= 2) {
    st.extra["ell_ratio_bounds"] = ell_ratio_bounds_check(model, grid, *s0 * (1.0 - 1e-12), c.bound_k);
  }
}

std::vector<double> uniform_grid(double upper, double max_step) {
  const auto cells = static_cast<std::size_t>(std::ceil(upper / max_step - 1e-9));
  std::vector<double> g(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) g[i] = upper * static_cast<double>(i) / static_cast<double>(cells);
  return g;
}

void run_limits(const ExperimentConfig& c, const LevyModel& model, ExperimentStats& st) {
  const auto g1 = uniform_grid(1.0, c.y1_step);
  const auto g2 = uniform_grid(c.y2_u_max, c.y2_step);
  std::vector<double> y1(c.replicates), y2(c.replicates);
  parallel_for(c.replicates, c.workers, [&](std::size_t r) {
    const auto rep = static_cast<std::uint32_t>(r);
    y1[r] = sample_y1(c.limit_gamma, c.limit_sigma, g1, c.seed, rep).terminal;
    y2[r] = sample_y2(c.limit_sigma, c.y2_u_max, g2, c.seed, rep).terminal;
  });
  const Summary s1 = summarize(y1), s2 = summarize(y2);
  const double e1 = y1_terminal_variance(c.limit_gamma, c.limit_sigma);
  const double e2 = y2_terminal_variance(c.limit_sigma, c.y2_u_max);
  st.extra["y1"] = {{"gamma", c.limit_gamma}, {"var", s1.var}, {"se_var", number_json(s1.se_var)}, {"exact", e1}};
  st.extra["y2"] = {{"u_max", c.y2_u_max}, {"var", s2.var}, {"se_var", number_json(s2.se_var)}, {"exact", e2}};
  add_check(st, "y1_terminal_variance", std::abs(s1.var - e1) <= 3.0 * s1.se_var,
            fmt_short("var %.5f, exact %.5f, se %.5f", s1.var, e1, s1.se_var));
  add_check(st, "y2_terminal_variance", std::abs(s2.var - e2) <= 3.0 * s2.se_var,
            fmt_short("var %.5f, exact %.5f, se %.5f", s2.var, e2, s2.se_var));

  json kernels = json::array();
  for (double n : c.n_list) {
    const double log_n = std::log(n);
    const PhiCurve curve(model, log_n + 1.0);
    const double i1 = integrate([&](double u) { return h1_kernel(curve, n, u); }, 0.0, 1.0).value;
    const double want1 = 1.0 - curve.phi(1.0) / curve.phi(n);
    const double u_end = (log_n - curve.v_min()) / curve.ell(n);
    const double i2 = integrate([&](double u) { return h2_kernel(curve, n, u); }, 0.0, u_end).value;
    kernels.push_back({{"n", n}, {"h1_integral", i1}, {"h1_expected", want1}, {"h2_integral", i2}});
    add_check(st, "h1_normalization " + n_label(n), std::abs(i1 - want1) <= 1e-6,
              fmt_short("integral %.10f, expected %.10f", i1, want1));
    add_check(st, "h2_normalization " + n_label(n), std::abs(i2 - 1.0) <= 1e-6,
              fmt_short("integral %.10f, expected 1", i2));
  }
  st.extra["kernels"] = kernels;
}

}  // namespace

bool NRecord::operator==(const NRecord& o) const {
  for (const auto& f : kFields)
    if (!same(this->*f.ptr, o.*f.ptr)) return false;
  return sample_standardized == o.sample_standardized && replicates == o.replicates;
}

bool ExperimentStats::all_passed() const {
  return error.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

bool ExperimentStats::operator==(const ExperimentStats& o) const {
  return suite == o.suite && model == o.model && seed == o.seed && same(eps, o.eps) && replicates == o.replicates &&
         records == o.records && checks == o.checks && extra == o.extra && error == o.error;
}

ReplicateTable simulate_replicates(const ExperimentConfig& config, double eps) {
  validate(config);
  return simulate(make_model(config.model, config.model_params), config, eps);
}

ExperimentStats run_suite(const ExperimentConfig& c, ReplicateTable* keep) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentStats st;
  st.suite = to_string(c.suite);
  st.model = c.model;
  st.seed = c.seed;
  st.replicates = c.replicates;
  try {
    validate(c);
    const LevyModel model = make_model(c.model, c.model_params);
    if (is_monte_carlo(c.suite)) {
      run_monte_carlo(c, model, st, keep);
    } else if (c.suite == Suite::Classify) {
      run_classify(c, model, st);
    } else if (c.suite == Suite::Bounds) {
      run_bounds(c, model, st);
    } else {
      run_limits(c, model, st);
    }
  } catch (const Error& e) {
    st.error = e.what();
  }
  st.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return st;
}

void write_csv(const ExperimentStats& stats, std::ostream& out) {
  for (std::size_t i = 0; i < kCsvColumns; ++i) out << (i ? "," : "") << kFields[i].name;
  out << '\n';
  for (const auto& r : stats.records) {
    for (std::size_t i = 0; i < kCsvColumns; ++i) out << (i ? "," : "") << fmt(r.*kFields[i].ptr);
    out << '\n';
  }
}

json to_json(const ExperimentStats& s) {
  json records = json::array();
  for (const auto& r : s.records) {
    json o;
    for (const auto& f : kFields) o[f.name] = number_json(r.*f.ptr);
    o["sample_standardized"] = r.sample_standardized;
    o["replicates"] = r.replicates;
    records.push_back(o);
  }
  json checks = json::array();
  for (const auto& c : s.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return {{"suite", s.suite}, {"model", s.model},   {"seed", s.seed},     {"eps", number_json(s.eps)},
          {"replicates", s.replicates}, {"records", records}, {"checks", checks}, {"extra", s.extra},
          {"error", s.error},  {"passed", s.all_passed()}};
}

ExperimentStats stats_from_json(const json& j) {
  ExperimentStats s;
  s.suite = j.at("suite").get<std::string>();
  s.model = j.at("model").get<std::string>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.eps = number_from_json(j.at("eps"));
  s.replicates = j.at("replicates").get<std::size_t>();
  for (const auto& o : j.at("records")) {
    NRecord r;
    for (const auto& f : kFields) r.*f.ptr = number_from_json(o.at(f.name));
    r.sample_standardized = o.at("sample_standardized").get<bool>();
    r.replicates = o.at("replicates").get<std::size_t>();
    s.records.push_back(r);
  }
  for (const auto& o : j.at("checks")) {
    s.checks.push_back({o.at("name").get<std::string>(), o.at("pass").get<bool>(), o.at("detail").get<std::string>()});
  }
  s.extra = j.at("extra");
  s.error = j.at("error").get<std::string>();
  return s;
}

void emit(const ExperimentStats& stats, const std::string& dir, unsigned workers, const ReplicateTable* replicates) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IOError("cannot create '" + dir + "': " + ec.message());
  auto open = [&dir](const char* name) {
    std::ofstream f(fs::path(dir) / name);
    if (!f) throw IOError("cannot write '" + (fs::path(dir) / name).string() + "'");
    return f;
  };
  {
    auto f = open("stats.csv");
    write_csv(stats, f);
  }
  {
    auto f = open("stats.json");
    f << to_json(stats).dump(2) << '\n';
  }
  {
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    auto f = open("run_info.json");
    f << json{{"runtime_seconds", stats.runtime_seconds}, {"workers", workers}, {"timestamp", stamp}}.dump(2)
      << '\n';
  }
  if (replicates != nullptr) {
    auto f = open("replicates.csv");
    f << "replicate,n,k,a,tail\n";
    for (std::size_t i = 0; i < replicates->n_list.size(); ++i) {
      for (std::size_t r = 0; r < replicates->k[i].size(); ++r) {
        f << r << ',' << fmt(replicates->n_list[i]) << ',' << fmt(replicates->k[i][r]) << ','
          << fmt(replicates->a[i][r]) << ',' << fmt(replicates->tail[i][r]) << '\n';
      }
    }
  }
}

}  // namespace regen
