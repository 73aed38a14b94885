#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "regen/levy_model.hpp"
#include "regen/quadrature.hpp"

namespace regen {

// Laplace exponent Φ0(m) = m ∫ e^{-mx} N0(x) dx.
double phi0(const LevyModel& model, double m);

// Poissonized exponent Φ(n) = ∫ (1 - e^{-n(1-e^{-x})}) nu0(dx), by quadrature.
double phi_poissonized(const LevyModel& model, double n);

// Same quantity from e^{-n} Σ_{m≥1} n^m Φ0(m)/m!.
double phi_series(const LevyModel& model, double n);

// sΦ'(s), i.e. the derivative of v ↦ Φ(e^v), by quadrature of the
// differentiated integrand.
double phi_log_slope(const LevyModel& model, double s);

// Second derivative of v ↦ Φ(e^v): sΦ'(s) + s²Φ''(s).
double phi_log_curvature(const LevyModel& model, double s);

// Φ'(s) by a central difference with relative step 1e-4, Richardson-extrapolated.
double phi_derivative_fd(const LevyModel& model, double s);

// Φ0(m) - Φ(m), evaluated as one integral so the difference keeps its digits.
double phi_gap(const LevyModel& model, double m);

// L(s) = Φ(s) / (sΦ'(s)); requires s > 1.
double ell(const LevyModel& model, double s);

// Ψ(n) = ∫_0^n Φ(t) dt/t  and  Ψ2(n) = ∫_0^n Φ(t)² dt/t.
double big_psi(const LevyModel& model, double n);
double big_psi2(const LevyModel& model, double n);

// Local log-slope of L: s L'(s) / L(s).
double ell_log_slope(const LevyModel& model, double s);

struct ProximityReport {
  std::vector<double> grid;
  std::vector<double> normalized_gap;  // m |Φ0(m) - Φ(m)| / Φ(m)
  bool decreasing = false;             // over the last half of the grid
};

ProximityReport phi_proximity_check(const LevyModel& model, std::span<const double> grid);

struct ExponentTable {
  std::vector<double> grid;
  std::vector<double> phi0;
  std::vector<double> phi;
  std::vector<double> ell;
  std::vector<double> err;  // largest relative quadrature error estimate per row
};

ExponentTable build_exponent_table(const LevyModel& model, std::span<const double> grid);
void write_csv(const ExponentTable& table, std::ostream& out);

namespace detail {
QuadResult phi0_quad(const LevyModel& model, double m);
QuadResult phi_quad(const LevyModel& model, double n);
QuadResult phi_log_slope_quad(const LevyModel& model, double s);
}  // namespace detail

}  // namespace regen
