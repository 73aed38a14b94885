#include "regen/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "regen/error.hpp"

namespace regen {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ∫ N0(x) kernel(x) dx over (0, inf). Below x_peak e^{-46} every kernel used
// here is O(x), so the neglected piece is negligible.
QuadResult tail_transform(const LevyModel& model, const std::function<double(double)>& kernel,
                          double x_peak, double x_hi) {
  const double x_lo = std::min(x_peak, model.x_split()) * std::exp(-46.0);
  const double hi = std::min(x_hi, model.x_max());
  const double marks[2] = {x_peak, model.x_split()};
  auto g = [&](double x) { return model.tail(x) * kernel(x); };
  return integrate_log_x(g, x_lo, hi, marks);
}

// Beyond this x the factor e^{-s(1-e^{-x})} is below e^{-60}.
double saturation_point(double s) { return s > 61.0 ? -std::log1p(-60.0 / s) : kInf; }

double peak_of(double s) { return std::min(1.0 / s, 1.0); }

// x - (1 - e^{-x}) without cancellation.
double x_minus_y(double x) {
  if (x < 1e-3) return x * x * (0.5 - x * (1.0 / 6.0 - x * (1.0 / 24.0 - x / 120.0)));
  return x + std::expm1(-x);
}

}  // namespace

namespace detail {

QuadResult phi0_quad(const LevyModel& model, double m) {
  auto k = [m](double x) { return m * std::exp(-m * x); };
  return tail_transform(model, k, 1.0 / m, 60.0 / m);
}

QuadResult phi_quad(const LevyModel& model, double n) {
  auto k = [n](double x) { return n * std::exp(-x + n * std::expm1(-x)); };
  return tail_transform(model, k, peak_of(n), saturation_point(n));
}

QuadResult phi_log_slope_quad(const LevyModel& model, double s) {
  auto k = [s](double x) {
    const double sy = -s * std::expm1(-x);
    return s * std::exp(-x - sy) * (1.0 - sy);
  };
  return tail_transform(model, k, peak_of(s), saturation_point(s));
}

}  // namespace detail

double phi0(const LevyModel& model, double m) {
  model.require_normalized();
  if (!(m >= 0.0) || !std::isfinite(m)) throw InvalidArgument("phi0 argument must be finite and >= 0");
  if (m == 0.0) return 0.0;
  if (auto v = model.phi0_closed_form(m)) return *v;
  return detail::phi0_quad(model, m).value;
}

double phi_poissonized(const LevyModel& model, double n) {
  model.require_normalized();
  if (!(n >= 0.0) || !std::isfinite(n)) throw InvalidArgument("phi argument must be finite and >= 0");
  if (n == 0.0) return 0.0;
  return detail::phi_quad(model, n).value;
}

double phi_series(const LevyModel& model, double n) {
  model.require_normalized();
  if (!(n >= 0.0) || !std::isfinite(n)) throw InvalidArgument("phi argument must be finite and >= 0");
  if (n == 0.0) return 0.0;
  // Sum outward from the Poisson mode so every weight comes from a stable ratio.
  const double mode = std::max(1.0, std::floor(n));
  const double w_mode = std::exp(-n + mode * std::log(n) - std::lgamma(mode + 1.0));
  double sum = w_mode * phi0(model, mode);
  double w = w_mode;
  for (double m = mode + 1.0;; m += 1.0) {
    w *= n / m;
    const double term = w * phi0(model, m);
    sum += term;
    if (m > n && term < 1e-14 * sum) break;
  }
  w = w_mode;
  for (double m = mode - 1.0; m >= 1.0; m -= 1.0) {
    w *= (m + 1.0) / n;
    const double term = w * phi0(model, m);
    sum += term;
    if (term < 1e-14 * sum) break;
  }
  return sum;
}

double phi_log_slope(const LevyModel& model, double s) {
  model.require_normalized();
  if (!(s > 0.0)) throw InvalidArgument("slope argument must be positive");
  return detail::phi_log_slope_quad(model, s).value;
}

double phi_log_curvature(const LevyModel& model, double s) {
  model.require_normalized();
  if (!(s > 0.0)) throw InvalidArgument("curvature argument must be positive");
  auto k = [s](double x) {
    const double sy = -s * std::expm1(-x);
    return s * std::exp(-x - sy) * (1.0 - sy * (3.0 - sy));
  };
  // Sign changes twice; accept an absolute error scaled by the slope itself.
  const double x_lo = std::min(peak_of(s), model.x_split()) * std::exp(-46.0);
  const double marks[2] = {peak_of(s), model.x_split()};
  auto g = [&](double x) { return model.tail(x) * k(x); };
  QuadOptions opts;
  opts.abs_tol = 1e-13 * std::abs(phi_log_slope(model, s));
  opts.fail_abs = 1e-9 * std::abs(phi_log_slope(model, s)) + 1e-14;
  return integrate_log_x(g, x_lo, std::min(saturation_point(s), model.x_max()), marks, opts).value;
}

double phi_derivative_fd(const LevyModel& model, double s) {
  model.require_normalized();
  const double h = 1e-4 * s;
  auto central = [&](double step) {
    return (phi_poissonized(model, s + step) - phi_poissonized(model, s - step)) / (2.0 * step);
  };
  const double coarse = central(h);
  const double fine = central(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

double phi_gap(const LevyModel& model, double m) {
  model.require_normalized();
  if (!(m > 0.0)) return 0.0;
  // m [e^{-mx} - e^{-x - my}] = -m e^{-mx} expm1(m(x - y) - x)
  auto k = [m](double x) { return -m * std::exp(-m * x) * std::expm1(m * x_minus_y(x) - x); };
  return tail_transform(model, k, peak_of(m), saturation_point(m)).value;
}

double ell(const LevyModel& model, double s) {
  if (!(s > 1.0)) throw InvalidArgument("ell requires s > 1");
  const double slope = phi_log_slope(model, s);
  if (!(slope > 0.0) || !std::isfinite(slope)) {
    throw DerivativeUnderflow("s*phi'(s) evaluated to a non-positive value");
  }
  return phi_poissonized(model, s) / slope;
}

double ell_log_slope(const LevyModel& model, double s) {
  // d log L / d log s = D/Φ - C/D with D, C the first two v-derivatives of Φ(e^v).
  const double p = phi_poissonized(model, s);
  const double d = phi_log_slope(model, s);
  const double c = phi_log_curvature(model, s);
  if (!(d > 0.0)) throw DerivativeUnderflow("s*phi'(s) evaluated to a non-positive value");
  return d / p - c / d;
}

double big_psi(const LevyModel& model, double n) {
  model.require_normalized();
  if (!(n >= 0.0) || !std::isfinite(n)) throw InvalidArgument("psi argument must be finite and >= 0");
  if (n == 0.0) return 0.0;
  // Fubini: Ψ(n) = ∫ Ein(n y) nu0(dx), then by parts against N0.
  auto k = [n](double x) {
    const double y = -std::expm1(-x);
    return std::exp(-x) * -std::expm1(-n * y) / y;
  };
  return tail_transform(model, k, 1.0 / n, kInf).value;
}

double big_psi2(const LevyModel& model, double n) {
  model.require_normalized();
  if (!(n >= 0.0) || !std::isfinite(n)) throw InvalidArgument("psi2 argument must be finite and >= 0");
  if (n == 0.0) return 0.0;
  const double top = std::log(n);
  const double bottom = std::min(top, 0.0) - 40.0;
  // Below `bottom`, Φ(e^v) is linear in e^v, so the remaining piece is Φ²/2.
  const double edge = phi_poissonized(model, std::exp(bottom));
  auto f = [&model](double v) {
    const double p = phi_poissonized(model, std::exp(v));
    return p * p;
  };
  std::vector<double> breaks;
  const auto pieces = static_cast<std::size_t>(std::ceil((top - bottom) / 4.0));
  for (std::size_t i = 0; i <= pieces; ++i) {
    breaks.push_back(bottom + (top - bottom) * static_cast<double>(i) / static_cast<double>(pieces));
  }
  QuadOptions opts;
  opts.rel_tol = 1e-11;
  return integrate_pieces(f, breaks, opts).value + 0.5 * edge * edge;
}

ProximityReport phi_proximity_check(const LevyModel& model, std::span<const double> grid) {
  ProximityReport report;
  for (double m : grid) {
    report.grid.push_back(m);
    report.normalized_gap.push_back(m * std::abs(phi_gap(model, m)) / phi_poissonized(model, m));
  }
  const std::size_t count = report.normalized_gap.size();
  if (count >= 2) {
    const std::size_t start = std::min(count / 2, count - 2);
    bool ok = true;
    for (std::size_t i = start + 1; i < count; ++i) {
      ok = ok && report.normalized_gap[i] < report.normalized_gap[i - 1];
    }
    report.decreasing = ok && report.normalized_gap.back() < 1.0;
  }
  return report;
}

ExponentTable build_exponent_table(const LevyModel& model, std::span<const double> grid) {
  model.require_normalized();
  ExponentTable t;
  double prev = -kInf;
  for (double m : grid) {
    if (!(m > prev) || !(m > 0.0)) throw BadGrid("exponent table grid must be positive and increasing");
    prev = m;
    double err = 0.0;
    double p0 = 0.0;
    if (auto closed = model.phi0_closed_form(m)) {
      p0 = *closed;
    } else {
      const QuadResult q = detail::phi0_quad(model, m);
      p0 = q.value;
      err = std::max(err, q.error / q.value);
    }
    const QuadResult ph = detail::phi_quad(model, m);
    const QuadResult sl = detail::phi_log_slope_quad(model, m);
    if (!(sl.value > 0.0)) throw DerivativeUnderflow("s*phi'(s) evaluated to a non-positive value");
    err = std::max({err, ph.error / ph.value, sl.error / sl.value});
    t.grid.push_back(m);
    t.phi0.push_back(p0);
    t.phi.push_back(ph.value);
    t.ell.push_back(ph.value / sl.value);
    t.err.push_back(err);
  }
  return t;
}

void write_csv(const ExponentTable& table, std::ostream& out) {
  out << "m,phi0,phi,ell,err\n";
  out.precision(17);
  for (std::size_t i = 0; i < table.grid.size(); ++i) {
    out << table.grid[i] << ',' << table.phi0[i] << ',' << table.phi[i] << ',' << table.ell[i] << ','
        << table.err[i] << '\n';
  }
}

}  // namespace regen
