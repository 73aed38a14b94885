#include "regen/phi_curve.hpp"

#include <cmath>
#include <limits>

#include "regen/error.hpp"
#include "regen/exponents.hpp"

namespace regen {

PhiCurve::PhiCurve(const LevyModel& model, double v_max, double step, double v_min)
    : v_min_(v_min), step_(step), sigma2_(model.sigma2()) {
  model.require_normalized();
  if (!(step > 0.0) || !(v_max > v_min)) throw BadGrid("phi curve needs v_max > v_min and step > 0");
  const auto cells = static_cast<std::size_t>(std::ceil((v_max - v_min) / step));
  phi_.reserve(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    const double s = std::exp(v_min + step * static_cast<double>(i));
    phi_.push_back(phi_poissonized(model, s));
    slope_.push_back(phi_log_slope(model, s));
    curv_.push_back(phi_log_curvature(model, s));
  }
  build_prefix();
}

PhiCurve PhiCurve::from_nodes(double v_min, double step, std::vector<double> phi,
                              std::vector<double> slope, std::vector<double> curvature, double sigma2) {
  if (phi.size() < 2 || slope.size() != phi.size() || curvature.size() != phi.size() || !(step > 0.0)) {
    throw BadGrid("phi curve nodes must be consistent and at least two");
  }
  PhiCurve c;
  c.v_min_ = v_min;
  c.step_ = step;
  c.sigma2_ = sigma2;
  c.phi_ = std::move(phi);
  c.slope_ = std::move(slope);
  c.curv_ = std::move(curvature);
  c.build_prefix();
  return c;
}

void PhiCurve::coefficients(std::size_t i, double c[6]) const {
  const double h = step_;
  const double f0 = phi_[i], f1 = phi_[i + 1];
  const double d0 = h * slope_[i], d1 = h * slope_[i + 1];
  const double s0 = h * h * curv_[i], s1 = h * h * curv_[i + 1];
  c[0] = f0;
  c[1] = d0;
  c[2] = 0.5 * s0;
  c[3] = 10.0 * (f1 - f0) - 6.0 * d0 - 4.0 * d1 - 1.5 * s0 + 0.5 * s1;
  c[4] = -15.0 * (f1 - f0) + 8.0 * d0 + 7.0 * d1 + 1.5 * s0 - s1;
  c[5] = 6.0 * (f1 - f0) - 3.0 * d0 - 3.0 * d1 - 0.5 * s0 + 0.5 * s1;
}

void PhiCurve::build_prefix() {
  prefix_.assign(phi_.size(), 0.0);
  prefix_[0] = phi_[0];
  const double h = step_;
  for (std::size_t i = 0; i + 1 < phi_.size(); ++i) {
    const double cell = h * (0.5 * (phi_[i] + phi_[i + 1]) + h * (slope_[i] - slope_[i + 1]) / 10.0 +
                             h * h * (curv_[i] + curv_[i + 1]) / 120.0);
    prefix_[i + 1] = prefix_[i] + cell;
  }
}

PhiCurve::Local PhiCurve::locate(double v) const {
  const double top = v_max();
  if (v > top * (1.0 + 1e-15) + 1e-12) {
    throw InvalidArgument("phi curve evaluated beyond its table (v = " + std::to_string(v) + ")");
  }
  const double pos = (v - v_min_) / step_;
  auto cell = static_cast<std::size_t>(std::floor(pos));
  cell = std::min(cell, phi_.size() - 2);
  return {cell, pos - static_cast<double>(cell)};
}

double PhiCurve::phi_log(double v) const {
  if (v <= v_min_) return phi_[0] * std::exp(v - v_min_);
  const Local at = locate(v);
  double c[6];
  coefficients(at.cell, c);
  const double t = at.t;
  return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
}

double PhiCurve::slope_log(double v) const {
  if (v <= v_min_) return slope_[0] * std::exp(v - v_min_);
  const Local at = locate(v);
  double c[6];
  coefficients(at.cell, c);
  const double t = at.t;
  return (c[1] + t * (2.0 * c[2] + t * (3.0 * c[3] + t * (4.0 * c[4] + t * 5.0 * c[5])))) / step_;
}

double PhiCurve::curvature_log(double v) const {
  if (v <= v_min_) return curv_[0] * std::exp(v - v_min_);
  const Local at = locate(v);
  double c[6];
  coefficients(at.cell, c);
  const double t = at.t;
  return (2.0 * c[2] + t * (6.0 * c[3] + t * (12.0 * c[4] + t * 20.0 * c[5]))) / (step_ * step_);
}

double PhiCurve::integral_log(double v) const {
  if (v <= v_min_) return phi_[0] * std::exp(v - v_min_);
  const Local at = locate(v);
  double c[6];
  coefficients(at.cell, c);
  const double t = at.t;
  const double poly =
      t * (c[0] + t * (c[1] / 2.0 + t * (c[2] / 3.0 + t * (c[3] / 4.0 + t * (c[4] / 5.0 + t * c[5] / 6.0)))));
  return prefix_[at.cell] + step_ * poly;
}

double PhiCurve::phi(double m) const {
  if (!(m > 0.0)) return 0.0;
  return phi_log(std::log(m));
}

double PhiCurve::ell(double s) const {
  const double v = std::log(s);
  const double d = slope_log(v);
  if (!(d > 0.0)) throw DerivativeUnderflow("tabulated s*phi'(s) is not positive");
  return phi_log(v) / d;
}

double PhiCurve::psi(double n) const {
  if (!(n > 0.0)) return 0.0;
  return integral_log(std::log(n));
}

}  // namespace regen
