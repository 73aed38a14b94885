#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "regen/levy_model.hpp"
#include "regen/path.hpp"
#include "regen/phi_curve.hpp"

namespace regen {

struct CompensatorPath {
  std::vector<double> grid;
  std::vector<double> a_values;       // A_n(T) = ∫_0^T Φ(n e^{-S_t}) dt
  std::vector<double> a_star_values;  // linearized version, frozen after log n
  double n = 0.0;
};

// A_n on a sorted time grid inside the path horizon. Between jumps the level
// is linear, so each piece is a difference of the curve's running integral.
std::vector<double> compensator_values(const PhiCurve& curve, const SubordinatorPath& path, double n,
                                       std::span<const double> grid);

// A_n*(T) = ∫_0^{T ∧ log n} [Φ(ne^{-t}) - Z_t sΦ'(s)|_{s=ne^{-t}}] dt with
// Z_t = S_t - t, integrated by parts piecewise.
std::vector<double> compensator_linearized_values(const PhiCurve& curve, const SubordinatorPath& path,
                                                  double n, std::span<const double> grid);

CompensatorPath compensator(const PhiCurve& curve, const SubordinatorPath& path, double n,
                            std::span<const double> grid);

// A_n over the whole simulated path, i.e. A_n(horizon_t).
double compensator_total(const PhiCurve& curve, const SubordinatorPath& path, double n);

// Reference evaluation of A_n straight from the model by adaptive quadrature
// on every segment (slow; used to validate the tabulated route).
std::vector<double> compensator_values_adaptive(const LevyModel& model, const SubordinatorPath& path, double n,
                                                std::span<const double> grid, double rel_tol = 1e-7);

// ∫_0^inf E e^{-S_t} dt = 1/Φ0(1): bounds the mean of A_n beyond any stopping
// time, per unit of the remaining atom intensity.
double compensator_tail_bound(const LevyModel& model);

// σ² ∫_0^T (Φ(ne^{-t}) - Φ(ne^{-T}))² dt for T <= log n.
double astar_variance_exact(const PhiCurve& curve, double n, double T);

// Potential measure U[0, s] = E ∫ 1{S_t <= s} dt, closed form or tabulated.
class PotentialMeasure {
 public:
  static PotentialMeasure closed_form(const LevyModel& model);
  // values[k] = U[0, k*step]; continued with slope 1 beyond the table.
  static PotentialMeasure from_table(double step, std::vector<double> values);

  double cdf(double s) const;
  double atom_at_zero() const { return cdf(0.0); }
  bool is_closed_form() const noexcept { return closed_; }
  const std::vector<double>& table() const noexcept { return values_; }

 private:
  bool closed_ = false;
  double offset_ = 0.0;  // closed form: U[0,s] = s + offset
  double step_ = 0.0;
  std::vector<double> values_;
};

// Averages the time spent at or below each grid level over simulated paths.
PotentialMeasure estimate_potential_measure(const PathSampler& sampler, double s_max, double step,
                                            std::size_t replicates, std::uint64_t seed);

// Var A_n(inf) = 2 ∫_{(0,inf)} Φ(ne^{-s}) U(ds) ∫_0^inf G_s(v) sΦ'(·)|_{ne^{-s-v}} dv
//                + (Φ(n) U{0})²
// with G_s(v) = U[0,v] - U[s,s+v]; uniform grid of width `step` in s and v.
double variance_exact_terminal(const PhiCurve& curve, double n, const PotentialMeasure& U, double step = 0.01);

}  // namespace regen
