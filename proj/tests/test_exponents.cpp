#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "regen/error.hpp"
#include "regen/exponents.hpp"
#include "regen/regime.hpp"

using namespace regen;

namespace {

std::vector<LevyModel> gallery() {
  return {make_model("gamma", {}), make_model("compound-poisson", {}), make_model("fast", {}),
          make_model("loglog", {})};
}

// Ein(z) = ∫_0^z (1 - e^{-u}) du / u
double ein(double z) {
  if (z < 0.5) {
    double term = z, sum = 0.0;
    for (int k = 1; k < 30; ++k) {
      sum += term / k;
      term *= -z / (k + 1);
    }
    return sum;
  }
  return boost::math::expint(1, z) + std::log(z) + std::numbers::egamma;
}

// Ψ(n) = ∫ nu(dx) Ein(n(1 - e^{-x})) for the unit gamma density x^{-1}e^{-x},
// by the trapezoid rule in log x on a million points.
double psi_gamma_oracle(double n) {
  const double lo = -60.0, hi = std::log(120.0);
  const int points = 1000000;
  const double h = (hi - lo) / (points - 1);
  double sum = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = std::exp(lo + h * i);
    const double f = std::exp(-x) * ein(-n * std::expm1(-x));
    sum += (i == 0 || i == points - 1) ? 0.5 * f : f;
  }
  return sum * h;
}

}  // namespace

TEST_CASE("zero intensity and the Φ(m) <= m bound") {
  for (const auto& m : gallery()) {
    INFO(m.name());
    CHECK(phi_poissonized(m, 0.0) == 0.0);
    CHECK(phi0(m, 0.0) == 0.0);
    for (double n : {0.1, 1.0, 10.0, 1e3, 1e8}) CHECK(phi_poissonized(m, n) <= n);
  }
}

TEST_CASE("series and integral forms agree") {
  for (const auto& m : gallery()) {
    INFO(m.name());
    for (double n : {0.5, 1.0, 5.0, 10.0, 30.0, 50.0}) {
      CHECK(phi_series(m, n) == doctest::Approx(phi_poissonized(m, n)).epsilon(1e-8));
    }
  }
  CHECK(phi_series(make_model("gamma", {}), 100.0) ==
        doctest::Approx(phi_poissonized(make_model("gamma", {}), 100.0)).epsilon(1e-8));
}

TEST_CASE("monotone exponents and moment integrals") {
  for (const auto& m : gallery()) {
    INFO(m.name());
    double p0 = 0, p = 0, s1 = 0, s2 = 0, ratio = 0;
    for (double n = 1.0; n <= 1e9; n *= 10.0) {
      const double a = phi0(m, n), b = phi_poissonized(m, n), c = big_psi(m, n), d = big_psi2(m, n);
      CHECK(a >= p0);
      CHECK(b >= p);
      CHECK(c >= s1);
      CHECK(d >= s2);
      if (m.name() != "compound-poisson") CHECK(d / c > ratio);
      p0 = a, p = b, s1 = c, s2 = d, ratio = d / c;
    }
    CHECK(big_psi(m, 0.0) == 0.0);
    CHECK(big_psi2(m, 0.0) == 0.0);
  }
}

TEST_CASE("Ψ against a brute-force trapezoid") {
  const auto g = make_model("gamma", {});
  CHECK(big_psi(g, 1e4) == doctest::Approx(psi_gamma_oracle(1e4)).epsilon(1e-6));
}

TEST_CASE("L(s) for the gamma subordinator") {
  const auto g = make_model("gamma", {});
  const double s = 1e6;
  const double closed = (1.0 + s) * std::log1p(s) / s;
  CHECK(ell(g, s) == doctest::Approx(closed).epsilon(0.05));
  CHECK(ell(g, s) == doctest::Approx(13.8155).epsilon(1e-3));
  double prev = 1.0;
  for (double x : {1e3, 1e6, 1e9, 1e12}) {
    const double gap = std::abs(ell(g, x) / std::log(x) - 1.0);
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("L(s) for the fast tail is about twice sqrt(log s)") {
  const auto f = make_model("fast", {});
  CHECK(ell(f, std::exp(100.0)) == doctest::Approx(20.0).epsilon(0.02));
}

TEST_CASE("quadrature derivative matches finite differences") {
  for (const auto& m : gallery()) {
    INFO(m.name());
    for (double s : {10.0, 1e3, 1e6}) {
      CHECK(phi_log_slope(m, s) == doctest::Approx(s * phi_derivative_fd(m, s)).epsilon(1e-6));
    }
  }
}

TEST_CASE("no derivative underflow on shipped models above 10") {
  for (const auto& m : gallery()) {
    for (double s = 10.0; s < 1e12; s *= 31.0) CHECK_NOTHROW(ell(m, s));
  }
}

TEST_CASE("Φ0 and Φ draw together") {
  const double g1[] = {1e2, 1e3, 1e4};
  CHECK(phi_proximity_check(make_model("gamma", {}), g1).decreasing);
  const double g2[] = {1e3, 1e6, 1e9};
  CHECK(phi_proximity_check(make_model("loglog", {}), g2).decreasing);
  const auto r = phi_proximity_check(make_model("compound-poisson", {}), g1);
  CHECK(r.normalized_gap.size() == 3);
}

TEST_CASE("second moment integral sandwich when L is small") {
  const auto f = make_model("fast", {});
  for (double v : {300.0, 400.0}) {
    const auto b = psi_bounds(f, std::exp(v), 1.0);
    REQUIRE(b.small_ell_branch);
    CHECK(b.psi2 >= b.psi2_lower);
    CHECK(b.psi <= b.psi_upper);
  }
}

TEST_CASE("Karamata reconstruction of Φ") {
  for (const auto& m : {make_model("gamma", {}), make_model("fast", {}), make_model("loglog", {})}) {
    INFO(m.name());
    auto grid = default_probe_grid(m);
    grid.resize(std::min<std::size_t>(grid.size(), 6));
    for (double s : grid) CHECK(karamata_reconstruction(m, s) == doctest::Approx(phi_poissonized(m, s)).epsilon(0.01));
  }
}

TEST_CASE("slow variation along decades") {
  for (const auto& m : {make_model("gamma", {}), make_model("fast", {}), make_model("loglog", {})}) {
    INFO(m.name());
    double prev = 2.0;
    for (double x = 1e2; x <= 1e12; x *= 100.0) {
      const double r = phi_poissonized(m, 2.0 * x) / phi_poissonized(m, x);
      CHECK(r > 1.0);
      CHECK(r < prev);
      prev = r;
    }
  }
}

TEST_CASE("L ratio bounds on the gamma grid") {
  const double grid[] = {1e2, 1e3, 1e4, 1e6, 1e8, 1e10};
  CHECK(ell_ratio_bounds_check(make_model("gamma", {}), grid, 10.0));
}

TEST_CASE("exponent table rows and csv") {
  const auto g = make_model("gamma", {});
  const double grid[] = {2.0, 10.0, 100.0};
  const auto t = build_exponent_table(g, grid);
  REQUIRE(t.phi.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(t.phi[i] <= grid[i]);
    CHECK(t.ell[i] > 0.0);
    CHECK(t.err[i] < 1e-8);
  }
  std::ostringstream out;
  write_csv(t, out);
  CHECK(out.str().rfind("m,phi0,phi,ell,err\n", 0) == 0);
}
