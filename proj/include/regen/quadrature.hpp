#pragma once

#include <functional>
#include <span>

namespace regen {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // summed |Kronrod - Gauss| over the final partition
};

struct QuadOptions {
  double rel_tol = 1e-12;      // refinement stops once error <= rel_tol*|value|
  double abs_tol = 1e-300;     // ... or error <= abs_tol
  std::size_t max_segments = 4000;
  double fail_rel = 1e-9;      // accepted when error <= fail_rel*|value| + fail_abs
  double fail_abs = 1e-14;
};

// Globally adaptive 31-point Gauss-Kronrod (bisect the worst segment until the
// summed error estimate meets the target). Throws QuadratureFailure when the
// final estimate is above the acceptance threshold.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

// Same, seeded with the partition given by increasing breakpoints.
QuadResult integrate_pieces(const std::function<double(double)>& f,
                            std::span<const double> breaks,
                            const QuadOptions& opts = {});

}  // namespace regen

namespace regen {

// ∫_{x_lo}^{x_hi} g(x) dx computed in the variable l = log x. The marks
// (typically the kernel's scale and a model split point) become breakpoints;
// the partition is further cut into pieces no wider than 4 in l.
QuadResult integrate_log_x(const std::function<double(double)>& g, double x_lo, double x_hi,
                           std::span<const double> marks, const QuadOptions& opts = {});

}  // namespace regen
