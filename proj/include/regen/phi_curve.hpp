#pragma once

#include <vector>

#include "regen/levy_model.hpp"

namespace regen {

// Φ(e^v) tabulated on a uniform v-grid with its first two v-derivatives and
// interpolated by quintic Hermite pieces, plus the running integral
// F(v) = ∫_{-inf}^v Φ(e^w) dw in closed form on each piece. Built once, then
// shared read-only; every compensator and centering computation goes through it.
class PhiCurve {
 public:
  PhiCurve(const LevyModel& model, double v_max, double step = 1.0 / 16.0, double v_min = -40.0);

  // Raw node data, for stubs and tests. Below v_min the curve continues as
  // phi[0] e^{v - v_min}.
  static PhiCurve from_nodes(double v_min, double step, std::vector<double> phi,
                             std::vector<double> slope, std::vector<double> curvature, double sigma2);

  double phi_log(double v) const;        // Φ(e^v)
  double slope_log(double v) const;      // sΦ'(s) at s = e^v
  double curvature_log(double v) const;  // d²Φ(e^v)/dv²
  double integral_log(double v) const;   // ∫_{-inf}^v Φ(e^w) dw

  double phi(double m) const;            // Φ(m), m ≥ 0
  double ell(double s) const;            // Φ(s) / (sΦ'(s))
  double psi(double n) const;            // Ψ(n) = F(log n)

  double sigma2() const noexcept { return sigma2_; }
  double v_min() const noexcept { return v_min_; }
  double v_max() const noexcept { return v_min_ + step_ * static_cast<double>(phi_.size() - 1); }

 private:
  PhiCurve() = default;
  void build_prefix();
  struct Local {
    std::size_t cell;
    double t;
  };
  Local locate(double v) const;
  void coefficients(std::size_t i, double c[6]) const;

  double v_min_ = 0.0;
  double step_ = 0.0;
  double sigma2_ = 0.0;
  std::vector<double> phi_, slope_, curv_, prefix_;
};

}  // namespace regen
