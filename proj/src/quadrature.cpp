#include "regen/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "regen/error.hpp"

namespace regen {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
using Gauss = boost::math::quadrature::gauss<double, 15>;

struct Segment {
  double a;
  double b;
  double value;
  double error;
  double floor;  // rounding-level error; splitting cannot go below it
};

Segment rule(const std::function<double(double)>& f, double a, double b) {
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double k = f0 * wk[0];
  double g = f0 * wg[0];
  double l1 = std::abs(f0) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fp = f(mid + half * x[i]);
    const double fm = f(mid - half * x[i]);
    k += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 0) g += (fp + fm) * wg[i / 2];
  }
  // Below ~50 ulps of the absolute mass the difference is rounding noise.
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * l1;
  return {a, b, half * k, half * std::max(std::abs(k - g), floor), half * floor};
}

QuadResult run(const std::function<double(double)>& f, std::span<const double> breaks,
               const QuadOptions& opts) {
  std::vector<Segment> segs;
  segs.reserve(64);
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (breaks[i] > breaks[i - 1]) segs.push_back(rule(f, breaks[i - 1], breaks[i]));
  }
  if (segs.empty()) return {};

  double floor_total = 0.0;
  auto totals = [&segs, &floor_total] {
    QuadResult r;
    floor_total = 0.0;
    for (const auto& s : segs) {
      r.value += s.value;
      r.error += s.error;
      floor_total += s.floor;
    }
    return r;
  };

  QuadResult r = totals();
  while (r.error > std::max(opts.rel_tol * std::abs(r.value), opts.abs_tol) &&
         segs.size() < opts.max_segments) {
    auto worst = std::max_element(segs.begin(), segs.end(),
                                  [](const Segment& l, const Segment& rr) { return l.error < rr.error; });
    const Segment w = *worst;
    if (w.error <= w.floor) break;
    const double mid = 0.5 * (w.a + w.b);
    if (!(mid > w.a && mid < w.b)) break;  // interval exhausted in double precision
    *worst = rule(f, w.a, mid);
    segs.push_back(rule(f, mid, w.b));
    r = totals();
  }

  // An estimate that is all rounding noise is as good as the arithmetic allows.
  const double accept = std::max(opts.fail_rel * std::abs(r.value) + opts.fail_abs, 2.0 * floor_total);
  if (!std::isfinite(r.value) || r.error > accept) {
    std::ostringstream msg;
    msg << "quadrature on [" << breaks.front() << ", " << breaks.back()
        << "] did not converge: value " << r.value << ", error estimate " << r.error;
    throw QuadratureFailure(msg.str());
  }
  return r;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts) {
  const double breaks[2] = {a, b};
  return run(f, breaks, opts);
}

QuadResult integrate_pieces(const std::function<double(double)>& f,
                            std::span<const double> breaks, const QuadOptions& opts) {
  return run(f, breaks, opts);
}

}  // namespace regen

namespace regen {

QuadResult integrate_log_x(const std::function<double(double)>& g, double x_lo, double x_hi,
                           std::span<const double> marks, const QuadOptions& opts) {
  if (!(x_lo > 0.0) || !(x_hi > x_lo)) return {};
  const double lo = std::log(x_lo);
  const double hi = std::log(x_hi);
  std::vector<double> cuts{lo, hi};
  for (double m : marks) {
    if (m > 0.0) {
      const double l = std::log(m);
      if (l > lo && l < hi) cuts.push_back(l);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> breaks{cuts.front()};
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double width = cuts[i] - cuts[i - 1];
    if (width <= 0.0) continue;
    const auto pieces = static_cast<std::size_t>(std::ceil(width / 4.0));
    for (std::size_t j = 1; j < pieces; ++j) {
      breaks.push_back(cuts[i - 1] + width * static_cast<double>(j) / static_cast<double>(pieces));
    }
    breaks.push_back(cuts[i]);
  }
  auto h = [&g](double l) {
    const double x = std::exp(l);
    return g(x) * x;
  };
  return integrate_pieces(h, breaks, opts);
}

}  // namespace regen
