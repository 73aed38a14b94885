#include "regen/compensator.hpp"

#include <algorithm>
#include <cmath>

#include "regen/error.hpp"
#include "regen/exponents.hpp"
#include "regen/quadrature.hpp"

namespace regen {
namespace {

void check_grid(const SubordinatorPath& path, std::span<const double> grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || (i > 0 && grid[i] < grid[i - 1])) {
      throw BadGrid("time grid must be nonnegative and sorted");
    }
  }
  if (!grid.empty() && grid.back() > path.horizon_t) throw HorizonTooShort("time grid exceeds the path horizon");
}

void check_curve(const PhiCurve& curve, double n) {
  if (!(n > 0.0)) throw InvalidArgument("intensity must be positive");
  if (std::log(n) > curve.v_max()) throw InvalidArgument("phi curve does not reach log n");
}

// Stretch of constant drift: level s_a at time t_a, valid until t_b.
struct Piece {
  double t_a;
  double s_a;
  double t_b;
};

template <class Visit>
void for_each_piece(const SubordinatorPath& path, Visit visit) {
  double t = 0.0, s = 0.0;
  for (const Jump& j : path.jumps) {
    visit(Piece{t, s, j.t});
    t = j.t;
    s = j.s_pre + j.x;
  }
  visit(Piece{t, s, path.horizon_t});
}

// ∫_0^dt Φ(n e^{-(s_a + d u)}) du.
double piece_integral(const PhiCurve& curve, double log_n, double s_a, double d, double dt) {
  if (dt <= 0.0) return 0.0;
  const double v_a = log_n - s_a;
  const double rise = d * dt;
  if (rise > 1e-3) return (curve.integral_log(v_a) - curve.integral_log(v_a - rise)) / d;
  return dt / 6.0 * (curve.phi_log(v_a) + 4.0 * curve.phi_log(v_a - 0.5 * rise) + curve.phi_log(v_a - rise));
}

}  // namespace

std::vector<double> compensator_values(const PhiCurve& curve, const SubordinatorPath& path, double n,
                                       std::span<const double> grid) {
  check_grid(path, grid);
  check_curve(curve, n);
  const double log_n = std::log(n);
  std::vector<double> out;
  out.reserve(grid.size());
  std::size_t g = 0;
  double acc = 0.0;
  for_each_piece(path, [&](const Piece& p) {
    while (g < grid.size() && grid[g] <= p.t_b) {
      out.push_back(acc + piece_integral(curve, log_n, p.s_a, path.drift, grid[g] - p.t_a));
      ++g;
    }
    acc += piece_integral(curve, log_n, p.s_a, path.drift, p.t_b - p.t_a);
  });
  return out;
}

double compensator_total(const PhiCurve& curve, const SubordinatorPath& path, double n) {
  const double end[1] = {path.horizon_t};
  return compensator_values(curve, path, n, end)[0];
}

std::vector<double> compensator_linearized_values(const PhiCurve& curve, const SubordinatorPath& path,
                                                  double n, std::span<const double> grid) {
  check_grid(path, grid);
  check_curve(curve, n);
  const double log_n = std::log(n);
  const double d = path.drift;
  const double F_top = curve.integral_log(log_n);
  // Z-part of one stretch between times a < b inside [0, log n]:
  //   ∫_a^b Z_t D(ne^{-t}) dt = Z_a Φ_a - Z_b Φ_b + (d - 1) ∫_a^b Φ(ne^{-t}) dt.
  auto z_part = [&](const Piece& p, double b) {
    const double a = p.t_a;
    if (b <= a) return 0.0;
    const double z_a = p.s_a - a;
    const double z_b = p.s_a + d * (b - a) - b;
    const double v_a = log_n - a, v_b = log_n - b;
    return z_a * curve.phi_log(v_a) - z_b * curve.phi_log(v_b) +
           (d - 1.0) * (curve.integral_log(v_a) - curve.integral_log(v_b));
  };
  std::vector<double> out;
  out.reserve(grid.size());
  std::size_t g = 0;
  double acc = 0.0;
  const double cap = std::max(log_n, 0.0);
  for_each_piece(path, [&](const Piece& p) {
    while (g < grid.size() && grid[g] <= p.t_b) {
      const double T = std::min(grid[g], cap);
      const double z = acc + (T > p.t_a ? z_part(p, T) : 0.0);
      out.push_back(F_top - curve.integral_log(log_n - T) - z);
      ++g;
    }
    if (p.t_a < cap) acc += z_part(p, std::min(p.t_b, cap));
  });
  return out;
}

CompensatorPath compensator(const PhiCurve& curve, const SubordinatorPath& path, double n,
                            std::span<const double> grid) {
  CompensatorPath c;
  c.grid.assign(grid.begin(), grid.end());
  c.a_values = compensator_values(curve, path, n, grid);
  c.a_star_values = compensator_linearized_values(curve, path, n, grid);
  c.n = n;
  return c;
}

std::vector<double> compensator_values_adaptive(const LevyModel& model, const SubordinatorPath& path, double n,
                                                std::span<const double> grid, double rel_tol) {
  check_grid(path, grid);
  QuadOptions opts;
  opts.rel_tol = rel_tol;
  opts.fail_rel = 10.0 * rel_tol;
  opts.fail_abs = 1e-12;
  auto piece = [&](const Piece& p, double dt) {
    if (dt <= 0.0) return 0.0;
    auto f = [&](double u) { return phi_poissonized(model, n * std::exp(-(p.s_a + path.drift * u))); };
    return integrate(f, 0.0, dt, opts).value;
  };
  std::vector<double> out;
  std::size_t g = 0;
  double acc = 0.0;
  for_each_piece(path, [&](const Piece& p) {
    while (g < grid.size() && grid[g] <= p.t_b) {
      out.push_back(acc + piece(p, grid[g] - p.t_a));
      ++g;
    }
    acc += piece(p, p.t_b - p.t_a);
  });
  return out;
}

double compensator_tail_bound(const LevyModel& model) { return 1.0 / phi0(model, 1.0); }

double astar_variance_exact(const PhiCurve& curve, double n, double T) {
  check_curve(curve, n);
  const double log_n = std::log(n);
  if (T < 0.0 || T > log_n * (1.0 + 1e-12)) throw InvalidArgument("T must lie in [0, log n]");
  if (T == 0.0) return 0.0;
  const double floor_value = curve.phi_log(log_n - T);
  auto f = [&](double t) {
    const double diff = curve.phi_log(log_n - t) - floor_value;
    return diff * diff;
  };
  std::vector<double> breaks;
  const auto pieces = static_cast<std::size_t>(std::ceil(T / 2.0));
  for (std::size_t i = 0; i <= pieces; ++i) breaks.push_back(T * static_cast<double>(i) / static_cast<double>(pieces));
  QuadOptions opts;
  opts.rel_tol = 1e-10;
  return curve.sigma2() * integrate_pieces(f, breaks, opts).value;
}

PotentialMeasure PotentialMeasure::closed_form(const LevyModel& model) {
  if (const auto* c = std::get_if<CompoundPoissonExp>(&model.kind())) {
    model.require_normalized();
    PotentialMeasure u;
    u.closed_ = true;
    // Renewal count of Exp(mu) jumps: U[0,s] = (1 + mu s) / mu.
    u.offset_ = 1.0 / c->mu;
    return u;
  }
  throw PotentialMeasureUnavailable("no closed-form potential measure for " + model.name());
}

PotentialMeasure PotentialMeasure::from_table(double step, std::vector<double> values) {
  if (!(step > 0.0) || values.size() < 2) throw BadGrid("potential table needs step > 0 and two values");
  PotentialMeasure u;
  u.step_ = step;
  u.values_ = std::move(values);
  return u;
}

double PotentialMeasure::cdf(double s) const {
  if (s < 0.0) return 0.0;
  if (closed_) return s + offset_;
  const double pos = s / step_;
  const auto last = values_.size() - 1;
  if (pos >= static_cast<double>(last)) return values_[last] + (s - step_ * static_cast<double>(last));
  const auto i = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * values_[i] + w * values_[i + 1];
}

PotentialMeasure estimate_potential_measure(const PathSampler& sampler, double s_max, double step,
                                            std::size_t replicates, std::uint64_t seed) {
  if (!(step > 0.0) || !(s_max > step) || replicates == 0) throw BadGrid("bad potential-measure grid");
  const auto levels = static_cast<std::size_t>(std::floor(s_max / step)) + 1;
  std::vector<double> sums(levels, 0.0);
  for (std::size_t r = 0; r < replicates; ++r) {
    const SubordinatorPath path = sampler.sample(s_max + 1.0, 0.0, seed, static_cast<std::uint32_t>(r));
    // Sweep levels upward alongside the jumps: exit time of each level.
    std::size_t j = 0;
    double t0 = 0.0, s0 = 0.0;
    for (std::size_t k = 0; k < levels; ++k) {
      const double level = step * static_cast<double>(k);
      while (j < path.jumps.size() && path.jumps[j].s_pre + path.jumps[j].x <= level) {
        t0 = path.jumps[j].t;
        s0 = path.jumps[j].s_pre + path.jumps[j].x;
        ++j;
      }
      double exit = 0.0;
      if (j < path.jumps.size() && path.jumps[j].s_pre <= level) {
        exit = path.jumps[j].t;
      } else {
        exit = t0 + std::max(0.0, level - s0) / path.drift;
      }
      sums[k] += exit;
    }
  }
  for (double& v : sums) v /= static_cast<double>(replicates);
  return PotentialMeasure::from_table(step, std::move(sums));
}

double variance_exact_terminal(const PhiCurve& curve, double n, const PotentialMeasure& U, double step) {
  check_curve(curve, n);
  const double log_n = std::log(n);
  const double margin = 20.0;
  const auto outer = static_cast<std::size_t>(std::ceil((std::max(log_n, 0.0) + margin) / step));
  double total = 0.0;
  for (std::size_t i = 0; i < outer; ++i) {
    const double s_lo = step * static_cast<double>(i);
    const double s_hi = s_lo + step;
    const double s = 0.5 * (s_lo + s_hi);
    const double mass = U.cdf(s_hi) - U.cdf(s_lo);
    const double outer_phi = curve.phi_log(log_n - s);
    if (outer_phi == 0.0 || mass == 0.0) continue;
    const double u_s = U.cdf(s);
    const auto inner_count = static_cast<std::size_t>(std::ceil((std::max(log_n - s, 0.0) + margin) / step));
    double inner = 0.0;
    for (std::size_t k = 0; k <= inner_count; ++k) {
      const double v = step * static_cast<double>(k);
      const double g = U.cdf(v) - U.cdf(s + v) + u_s;
      const double w = (k == 0 || k == inner_count) ? 0.5 : 1.0;
      inner += w * g * curve.slope_log(log_n - s - v);
    }
    total += outer_phi * inner * step * mass;
  }
  // The diagonal t = u of E(∫ f(S_t) dt)² carries weight U{0}² when the
  // process can sit at its starting level.
  const double diag = U.atom_at_zero() * curve.phi_log(log_n);
  return 2.0 * total + diag * diag;
}

}  // namespace regen
