#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "regen/phi_curve.hpp"
#include "regen/regime.hpp"

namespace regen {

struct LimitSample {
  std::vector<double> grid;
  std::vector<double> y_values;
  double terminal = 0.0;
};

// σ ∫_0^{u∧1} γ^{-1}(1-v)^{(1-γ)/γ} W(v) dv by the trapezoid rule over Brownian
// values on the grid. For γ > 1 the kernel blows up at v = 1, so the last cell
// uses W at its left end times the exact kernel integral. Grid: starts at 0,
// increasing, inside [0,1], steps at most 1e-3.
LimitSample sample_y1(double gamma, double sigma, std::span<const double> grid, std::uint64_t seed,
                      std::uint32_t replicate = 0);

// σ ∫_0^u e^{-v} W(v) dv on a grid from 0 to u_max with steps at most 0.05.
LimitSample sample_y2(double sigma, double u_max, std::span<const double> grid, std::uint64_t seed,
                      std::uint32_t replicate = 0);

// Closed-form terminal variances of the two processes above.
double y1_terminal_variance(double gamma, double sigma);
double y2_terminal_variance(double sigma, double u_max);

// G_n[u](t) = σu - (Φ(n)√log n)^{-1} ∫_{(log n - t)+}^{(log n - t + σu√log n)+} Φ(e^v) dv
// over a grid of t. Deterministic in u; Y3 is G_n[U] for a standard normal U.
LimitSample y3_trajectory(const PhiCurve& curve, double n, double u, std::span<const double> t_grid);

struct RegimeMoments {
  Regime regime = Regime::Indeterminate;
  double mu = 0.0;      // centering of K_n
  double sigma2 = 0.0;  // squared scaling
};

// Centering ∫_0^{log n} Φ(e^v) dv, common to all regimes, and the squared
// scaling. Moderate and fast growth use the exact terminal variance of the
// n-dependent Gaussian approximation, σ² ∫_0^{log n} (Φ(e^w) - Φ(1))² dw, which
// tends to Φ²(n) log n Var Y1(1) and Φ²(n) L(n) Var Y2(∞) respectively. Slow
// growth uses Φ²(n) log n σ².
RegimeMoments regime_moments(const PhiCurve& curve, double n, const RegimeReport& report);

// Φ(n^{1-u}) log n / (Φ(n) L(n^{1-u})), u in [0,1].
double h1_kernel(const PhiCurve& curve, double n, double u);
// Φ(ne^{-uL}) L / (Φ(n) L(ne^{-uL})), L = L(n), u >= 0.
double h2_kernel(const PhiCurve& curve, double n, double u);

}  // namespace regen
