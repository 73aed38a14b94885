#include "regen/limit_laws.hpp"

#include <cmath>
#include <string>

#include "regen/error.hpp"
#include "regen/quadrature.hpp"
#include "regen/rng.hpp"

namespace regen {
namespace {

void check_grid(std::span<const double> grid, double upper, double max_step) {
  if (grid.size() < 2 || grid.front() != 0.0) throw BadGrid("grid must start at 0 and hold two points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double h = grid[i] - grid[i - 1];
    if (!(h > 0.0)) throw BadGrid("grid must be strictly increasing");
    if (h > max_step * (1.0 + 1e-9)) throw BadGrid("grid step " + std::to_string(h) + " too coarse");
  }
  if (grid.back() > upper * (1.0 + 1e-12)) throw BadGrid("grid exceeds its range");
}

// Trapezoid sums of kernel(v) W(v) with W built from exact Gaussian increments.
template <class Kernel>
LimitSample integrate_brownian(double sigma, std::span<const double> grid, RandomStream& rng, Kernel&& kernel,
                               double singular_end) {
  LimitSample out;
  out.grid.assign(grid.begin(), grid.end());
  out.y_values.resize(grid.size());
  out.y_values[0] = 0.0;
  std::vector<double> k(grid.size(), 0.0);
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] != singular_end) k[i] = kernel(grid[i]);
  double w = 0.0, f_prev = 0.0, acc = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double h = grid[i] - grid[i - 1];
    if (grid[i] == singular_end) {
      // exact kernel mass over the last cell
      acc += w * kernel.tail_mass(grid[i - 1]);
    } else {
      w += std::sqrt(h) * rng.normal();
      const double f = k[i] * w;
      acc += 0.5 * h * (f_prev + f);
      f_prev = f;
    }
    out.y_values[i] = sigma * acc;
  }
  out.terminal = out.y_values.back();
  return out;
}

struct Y1Kernel {
  double gamma;
  double operator()(double v) const { return std::pow(1.0 - v, (1.0 - gamma) / gamma) / gamma; }
  double tail_mass(double v) const { return std::pow(1.0 - v, 1.0 / gamma); }
};

struct Y2Kernel {
  double operator()(double v) const { return std::exp(-v); }
  double tail_mass(double) const { return 0.0; }
};

}  // namespace

LimitSample sample_y1(double gamma, double sigma, std::span<const double> grid, std::uint64_t seed,
                      std::uint32_t replicate) {
  if (!(gamma > 0.0) || !(sigma >= 0.0)) throw InvalidArgument("sample_y1: need gamma > 0, sigma >= 0");
  check_grid(grid, 1.0, 1e-3);
  RandomStream rng(seed, replicate, streams::kLimitPaths);
  const double singular = gamma > 1.0 ? 1.0 : -1.0;
  return integrate_brownian(sigma, grid, rng, Y1Kernel{gamma}, singular);
}

LimitSample sample_y2(double sigma, double u_max, std::span<const double> grid, std::uint64_t seed,
                      std::uint32_t replicate) {
  if (!(sigma >= 0.0) || !(u_max > 0.0)) throw InvalidArgument("sample_y2: need sigma >= 0, u_max > 0");
  check_grid(grid, u_max, 0.05);
  if (std::abs(grid.back() - u_max) > 1e-9 * u_max) throw BadGrid("sample_y2: grid must end at u_max");
  RandomStream rng(seed, replicate, streams::kLimitPaths);
  return integrate_brownian(sigma, grid, rng, Y2Kernel{}, -1.0);
}

double y1_terminal_variance(double gamma, double sigma) { return sigma * sigma * gamma / (gamma + 2.0); }

double y2_terminal_variance(double sigma, double u_max) {
  // σ² ∫_0^u (e^{-v} - e^{-u})² dv
  const double e = std::exp(-u_max);
  return sigma * sigma * (-0.5 * std::expm1(-2.0 * u_max) + 2.0 * e * std::expm1(-u_max) + u_max * e * e);
}

LimitSample y3_trajectory(const PhiCurve& curve, double n, double u, std::span<const double> t_grid) {
  if (!(n > 1.0) || !std::isfinite(u)) throw InvalidArgument("y3_trajectory: need n > 1 and finite u");
  const double log_n = std::log(n);
  const double sigma = std::sqrt(curve.sigma2());
  const double shift = sigma * u * std::sqrt(log_n);
  const double scale = curve.phi_log(log_n) * std::sqrt(log_n);
  LimitSample out;
  out.grid.assign(t_grid.begin(), t_grid.end());
  out.y_values.reserve(t_grid.size());
  for (double t : t_grid) {
    if (t < 0.0) throw BadGrid("y3_trajectory: negative time");
    const double a = std::max(log_n - t, 0.0);
    const double b = std::max(log_n - t + shift, 0.0);
    const double integral = a == b ? 0.0 : curve.integral_log(b) - curve.integral_log(a);
    out.y_values.push_back(sigma * u - integral / scale);
  }
  out.terminal = out.y_values.empty() ? 0.0 : out.y_values.back();
  return out;
}

RegimeMoments regime_moments(const PhiCurve& curve, double n, const RegimeReport& report) {
  if (!(n > 1.0)) throw InvalidArgument("regime_moments: need n > 1");
  const double log_n = std::log(n);
  const double phi_n = curve.phi_log(log_n);
  const double s2 = curve.sigma2();
  RegimeMoments m;
  m.regime = report.regime;
  m.mu = curve.integral_log(log_n) - curve.integral_log(0.0);
  switch (report.regime) {
    case Regime::Moderate:
    case Regime::Fast: {
      // Terminal variance of σ∫ h_n W for either kernel, times its scale:
      // σ² ∫_0^{log n} (Φ(e^w) - Φ(1))² dw.
      const double phi_1 = curve.phi_log(0.0);
      std::vector<double> breaks;
      for (double w = 0.0; w < log_n; w += 1.0) breaks.push_back(w);
      breaks.push_back(log_n);
      const auto sq = [&](double w) {
        const double d = curve.phi_log(w) - phi_1;
        return d * d;
      };
      m.sigma2 = s2 * integrate_pieces(sq, breaks).value;
      break;
    }
    case Regime::Slow:
      m.sigma2 = phi_n * phi_n * log_n * s2;
      break;
    case Regime::Indeterminate:
      throw IndeterminateRegime("regime_moments: regime is indeterminate");
  }
  return m;
}

double h1_kernel(const PhiCurve& curve, double n, double u) {
  if (!(n > 1.0) || u < 0.0 || u > 1.0) throw InvalidArgument("h1_kernel: need n > 1 and u in [0,1]");
  const double log_n = std::log(n);
  // Φ/L = sΦ'
  return curve.slope_log((1.0 - u) * log_n) * log_n / curve.phi_log(log_n);
}

double h2_kernel(const PhiCurve& curve, double n, double u) {
  if (!(n > 1.0) || u < 0.0) throw InvalidArgument("h2_kernel: need n > 1 and u >= 0");
  const double log_n = std::log(n);
  const double ell = curve.ell(n);
  return curve.slope_log(log_n - u * ell) * ell / curve.phi_log(log_n);
}

}  // namespace regen
