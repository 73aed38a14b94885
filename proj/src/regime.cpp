#include "regen/regime.hpp"

#include <algorithm>
#include <cmath>

#include "regen/error.hpp"
#include "regen/exponents.hpp"
#include "regen/quadrature.hpp"

namespace regen {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Moderate: return "moderate";
    case Regime::Fast: return "fast";
    case Regime::Slow: return "slow";
    case Regime::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

namespace {

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

RegimeReport classify_regime(const LevyModel& model, std::span<const double> probe) {
  if (probe.size() < 4) throw BadGrid("regime probe needs at least four points");
  for (std::size_t i = 1; i < probe.size(); ++i) {
    if (!(probe[i] > probe[i - 1])) throw BadGrid("regime probe must be increasing");
  }
  if (!(probe.front() > 1.0) || std::log10(probe.back() / probe.front()) < 6.0) {
    throw BadGrid("regime probe must start above 1 and span at least six decades");
  }
  RegimeReport r;
  r.probe_points.assign(probe.begin(), probe.end());
  for (double m : probe) r.ratio_trace.push_back(ell(model, m) / std::log(m));

  const std::size_t count = probe.size();
  const std::size_t half = std::min(count / 2, count - 3);
  std::vector<double> x, y;
  for (std::size_t i = half; i < count; ++i) {
    x.push_back(std::log(std::log(probe[i])));
    y.push_back(std::log(r.ratio_trace[i]));
  }
  r.trend = least_squares_slope(x, y);

  std::vector<double> last(r.ratio_trace.end() - 3, r.ratio_trace.end());
  std::sort(last.begin(), last.end());
  const double band = last.back() / last.front();
  bool rising = true;
  for (std::size_t i = half + 1; i < count; ++i) rising = rising && r.ratio_trace[i] > r.ratio_trace[i - 1];

  if (std::abs(r.trend) < 0.1 && band <= 1.5) {
    r.regime = Regime::Moderate;
    r.gamma_hat = last[1];
  } else if (r.trend < -0.1 && r.ratio_trace.back() < 0.2) {
    r.regime = Regime::Fast;
  } else if (r.trend > 0.1 && rising) {
    r.regime = Regime::Slow;
  }
  return r;
}

std::vector<double> default_probe_grid(const LevyModel& model) {
  std::vector<double> grid;
  const auto* tail = std::get_if<TailSpecified>(&model.kind());
  if (tail != nullptr && tail->label == "fast") {
    const double lo = std::log(100.0), hi = 400.0;
    for (int i = 0; i < 12; ++i) grid.push_back(std::exp(lo * std::pow(hi / lo, i / 11.0)));
  } else if (tail != nullptr && tail->label == "loglog") {
    for (int e = 2; e <= 40; e += 2) grid.push_back(std::pow(10.0, e));
  } else {
    for (int e = 2; e <= 10; ++e) grid.push_back(std::pow(10.0, e));
  }
  return grid;
}

double kappa(double k) { return k * std::pow(2.0, k); }

bool key_bound_check(const LevyModel& model, double m, std::span<const double> s_grid, double k) {
  if (!(m > 1.0)) throw InvalidArgument("key bound needs m > 1");
  const double log_m = std::log(m);
  const double pm = phi_poissonized(model, m);
  const double lm = ell(model, m);
  const double kap = kappa(k);
  for (double s : s_grid) {
    if (!(std::abs(s) < 0.5 * log_m)) throw InvalidArgument("key bound needs |s| < log(m)/2");
    const double lhs = std::abs(std::log(phi_poissonized(model, m * std::exp(-s)) / pm) + s / lm);
    const double rhs = kap * s * s / (lm * log_m);
    if (s == 0.0 ? lhs > 0.0 : !(lhs < rhs)) return false;
  }
  return true;
}

bool cross_sandwich_check(const LevyModel& model, double n, std::span<const double> s_grid, double k) {
  if (!(n > 1.0)) throw InvalidArgument("sandwich needs n > 1");
  const double pn = phi_poissonized(model, n);
  const double ln = ell(model, n);
  const double s_max = std::log(n) / (2.0 * std::max(kappa(k), 1.0));
  for (double s : s_grid) {
    if (s < 0.0 || s > s_max) throw InvalidArgument("sandwich argument outside [0, log n / (2 max(kappa,1))]");
    const double mid = phi_poissonized(model, n * std::exp(-s));
    if (!(pn * std::exp(-1.5 * s / ln) <= mid && mid <= pn * std::exp(-0.5 * s / ln))) return false;
  }
  return true;
}

PsiBounds psi_bounds(const LevyModel& model, double n, double k) {
  PsiBounds b;
  const double kv = std::max(kappa(k), 1.0);
  const double log_n = std::log(n);
  const double pn = phi_poissonized(model, n);
  const double ln = ell(model, n);
  b.small_ell_branch = ln < log_n / (4.0 * kv);
  b.psi = big_psi(model, n);
  b.psi2 = big_psi2(model, n);
  const double shrink = (1.0 - std::exp(-6.0)) / 3.0;
  if (b.small_ell_branch) {
    b.psi_upper = 1.0 + pn * ln * (2.0 + 4.0 * kv / std::exp(1.0));
    b.psi2_lower = shrink * pn * pn * ln;
    b.psi2_upper = 0.5 + pn * pn * ln * (1.0 + 2.0 * kv / std::exp(1.0));
  } else {
    b.psi_upper = 1.0 + pn * log_n * (0.5 / kv + 1.0 / std::exp(1.0));
    b.psi2_lower = shrink * pn * pn * log_n;
    b.psi2_upper = 0.5 + pn * pn * log_n * (0.5 / kv + std::exp(-2.0));
  }
  return b;
}

bool ell_ratio_bounds_check(const LevyModel& model, std::span<const double> grid, double s0, double k) {
  std::vector<double> xs, ls;
  for (double x : grid) {
    if (x > s0 && x > 1.0) {
      xs.push_back(x);
      ls.push_back(ell(model, x));
    }
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double q = std::log(xs[j]) / std::log(xs[i]);
      const double ratio = ls[j] / ls[i];
      if (!(std::pow(q, -k) < ratio && ratio < std::pow(q, k))) return false;
    }
  }
  return true;
}

std::optional<double> a2_threshold(const LevyModel& model, std::span<const double> grid, double k) {
  std::optional<double> start;
  for (double s : grid) {
    if (!(s > 1.0)) throw InvalidArgument("A2 probe points must exceed 1");
    const bool holds = std::abs(ell_log_slope(model, s)) < k / std::log(s);
    if (holds && !start) start = s;
    if (!holds) start.reset();
  }
  return start;
}

double karamata_reconstruction(const LevyModel& model, double s) {
  if (!(s > 0.0)) throw InvalidArgument("karamata argument must be positive");
  // ∫_1^s dz/(zL(z)) = ∫_0^{log s} D(e^v)/Φ(e^v) dv.
  auto f = [&model](double v) {
    const double e = std::exp(v);
    return phi_log_slope(model, e) / phi_poissonized(model, e);
  };
  const double top = std::log(s);
  std::vector<double> breaks;
  const double a = std::min(0.0, top), b = std::max(0.0, top);
  const auto pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / 4.0)));
  for (std::size_t i = 0; i <= pieces; ++i) breaks.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(pieces));
  QuadOptions opts;
  opts.rel_tol = 1e-10;
  double integral = integrate_pieces(f, breaks, opts).value;
  if (top < 0.0) integral = -integral;
  return phi_poissonized(model, 1.0) * std::exp(integral);
}

}  // namespace regen
