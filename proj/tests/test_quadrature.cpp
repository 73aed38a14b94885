#include <cmath>
#include <numbers>

#include "doctest.h"
#include "regen/error.hpp"
#include "regen/quadrature.hpp"

using namespace regen;

TEST_CASE("smooth integrands reach near machine precision") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0).value ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("endpoint singularity is refined away") {
  const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("breakpoints at a kink") {
  const double breaks[] = {0.0, 0.3, 1.0};
  const auto r = integrate_pieces([](double x) { return std::abs(x - 0.3); }, breaks);
  CHECK(r.value == doctest::Approx(0.29).epsilon(1e-14));
}

TEST_CASE("log-space integration over many decades") {
  const double marks[] = {1.0};
  const auto r = integrate_log_x([](double x) { return std::exp(-x); }, 1e-20, 60.0, marks);
  CHECK(r.value == doctest::Approx(1.0 - 1e-20).epsilon(1e-12));
  const auto p = integrate_log_x([](double x) { return 1.0 / std::sqrt(x); }, 1e-12, 1.0, {});
  CHECK(p.value == doctest::Approx(2.0 - 2e-6).epsilon(1e-12));
}

TEST_CASE("zero integrand is exact") {
  const auto r = integrate([](double) { return 0.0; }, 0.0, 5.0);
  CHECK(r.value == 0.0);
  CHECK(r.error == 0.0);
}

TEST_CASE("unresolvable oscillation fails loudly") {
  QuadOptions opts;
  opts.max_segments = 10;
  CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / x) / x; }, 1e-4, 1.0, opts), QuadratureFailure);
}
