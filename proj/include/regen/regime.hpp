#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regen/levy_model.hpp"

namespace regen {

enum class Regime { Moderate, Fast, Slow, Indeterminate };

std::string to_string(Regime r);

struct RegimeReport {
  Regime regime = Regime::Indeterminate;
  double gamma_hat = 0.0;            // meaningful for Moderate only
  std::vector<double> probe_points;
  std::vector<double> ratio_trace;   // L(m) / log m
  double trend = 0.0;                // d log(ratio) / d log log m over the last half
};

// Reads the growth regime off L(m)/log m along a probe grid spanning at least
// six decades:
//   Moderate  last three ratios within a factor 1.5 and no trend (|trend| < 0.1),
//             gamma_hat = their median;
//   Fast      ratio falling (trend < -0.1) and last ratio < 0.2;
//   Slow      ratio rising (trend > 0.1) and increasing over the last half;
//   otherwise Indeterminate.
RegimeReport classify_regime(const LevyModel& model, std::span<const double> probe);

// Probe grids used by the gallery: decades for gamma/compound Poisson, a
// log-geometric grid up to e^400 for the fast tail, up to 1e40 for loglog.
std::vector<double> default_probe_grid(const LevyModel& model);

double kappa(double k);  // k 2^k

// |log(Φ(me^{-s})/Φ(m)) + s/L(m)| <= kappa s² / (L(m) log m) at every s;
// requires m > 1 and |s| < log(m)/2.
bool key_bound_check(const LevyModel& model, double m, std::span<const double> s_grid, double k = 2.0);

// Φ(n) e^{-3s/(2L(n))} <= Φ(ne^{-s}) <= Φ(n) e^{-s/(2L(n))} at every s in
// [0, log n / (2 max(kappa, 1))].
bool cross_sandwich_check(const LevyModel& model, double n, std::span<const double> s_grid, double k = 2.0);

struct PsiBounds {
  bool small_ell_branch = false;  // L(n) < log n / (4 max(kappa,1))
  double psi = 0.0, psi_upper = 0.0;
  double psi2 = 0.0, psi2_lower = 0.0, psi2_upper = 0.0;
};

PsiBounds psi_bounds(const LevyModel& model, double n, double k = 2.0);

// (log y / log x)^{-k} < L(y)/L(x) < (log y / log x)^k for grid points s0 < x < y.
bool ell_ratio_bounds_check(const LevyModel& model, std::span<const double> grid, double s0, double k = 2.0);

// Smallest grid point from which |sL'(s)/L(s)| < k / log s holds at every
// later grid point (grid points must exceed 1).
std::optional<double> a2_threshold(const LevyModel& model, std::span<const double> grid, double k = 2.0);

// Φ(1) exp(∫_1^s dz / (z L(z))).
double karamata_reconstruction(const LevyModel& model, double s);

}  // namespace regen
