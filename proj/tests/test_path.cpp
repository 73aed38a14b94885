#include <boost/math/special_functions/expint.hpp>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "regen/error.hpp"
#include "regen/path.hpp"
#include "regen/stats.hpp"

using namespace regen;

namespace {

SubordinatorPath staircase() {
  SubordinatorPath p;
  p.jumps = {{1.0, 0.0, 2.0}};
  p.horizon_t = 2.0;
  p.horizon_s = 2.0;
  return p;
}

double replay_level(const SubordinatorPath& p, double t) {
  double level = 0.0, last = 0.0;
  for (const auto& j : p.jumps) {
    if (j.t > t) break;
    level += p.drift * (j.t - last) + j.x;
    last = j.t;
  }
  return level + p.drift * (t - last);
}

}  // namespace

TEST_CASE("nothing to cross") {
  const auto cp = make_model("compound-poisson", {});
  const auto p = sample_path(cp, 0.0, 0.0, 1);
  CHECK(p.jumps.empty());
  CHECK(p.horizon_t == 0.0);
  CHECK(p.horizon_s == 0.0);
}

TEST_CASE("staircase passage") {
  const auto p = staircase();
  const auto pass = passage_time(p, 1.0);
  CHECK(pass.tau == 1.0);
  CHECK(pass.overshoot == 1.0);
  CHECK(passage_time(p, 0.0).tau == 0.0);
  CHECK(passage_time(p, 0.0).overshoot == 0.0);
  CHECK_THROWS_AS(passage_time(p, 3.0), HorizonTooShort);
  CHECK(level_at(p, 0.0) == 0.0);
  CHECK(level_at(p, 0.999) == 0.0);
  CHECK(level_at(p, 1.0) == 2.0);
  CHECK_THROWS_AS(level_at(p, 2.5), HorizonTooShort);
}

TEST_CASE("path invariants and level reconstruction") {
  const auto g = make_model("gamma", {});
  const PathSampler sampler(g, 1e-6);
  std::mt19937_64 gen(3);
  for (std::uint32_t r = 0; r < 20; ++r) {
    const auto p = sampler.sample(8.0, 1.0, 99, r);
    REQUIRE(p.horizon_s >= 8.0);
    for (std::size_t i = 1; i < p.jumps.size(); ++i) {
      const auto& a = p.jumps[i - 1];
      const auto& b = p.jumps[i];
      REQUIRE(b.t > a.t);
      CHECK(b.s_pre == doctest::Approx(a.s_pre + a.x + p.drift * (b.t - a.t)).epsilon(1e-12));
      CHECK(a.x > p.eps);
    }
    std::uniform_real_distribution<double> t_dist(0.0, p.horizon_t);
    double prev_t = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double t = t_dist(gen);
      CHECK(level_at(p, t) == doctest::Approx(replay_level(p, t)).epsilon(1e-12));
      if (t > prev_t) CHECK(level_at(p, t) >= level_at(p, prev_t));
      prev_t = t;
    }
    const auto pass = passage_time(p, 5.0);
    CHECK(pass.overshoot >= 0.0);
    CHECK(level_at(p, pass.tau) >= 5.0 - 1e-12);
    CHECK(level_at(p, pass.tau * (1.0 - 1e-12)) < 5.0);
  }
}

TEST_CASE("jump count and first two moments of S_1") {
  const auto g = make_model("gamma", {});
  const double eps = 1e-8;
  const PathSampler sampler(g, eps);
  CHECK(sampler.jump_rate() == doctest::Approx(boost::math::expint(1, eps)).epsilon(1e-10));
  const int reps = 10000;
  std::vector<double> counts(reps), s1(reps);
  for (int r = 0; r < reps; ++r) {
    const auto p = sampler.sample(0.0, 1.0, 2024, static_cast<std::uint32_t>(r));
    counts[r] = static_cast<double>(p.jumps.size());
    s1[r] = p.horizon_s;
  }
  const auto sc = summarize(counts), ss = summarize(s1);
  CHECK(std::abs(sc.mean - sampler.jump_rate()) < 3.0 * sc.se_mean);
  CHECK(std::abs(ss.mean - 1.0) < 4.0 * std::sqrt(g.sigma2()) / 100.0);
  CHECK(std::abs(ss.var - g.sigma2()) < 4.0 * ss.se_var);
}

TEST_CASE("refining the truncation only adds jumps") {
  const auto g = make_model("gamma", {});
  const PathSampler coarse(g, 1e-3), fine(g, 1e-6);
  for (std::uint32_t r = 0; r < 50; ++r) {
    const auto a = coarse.sample(0.0, 3.0, 11, r);
    const auto b = fine.sample(0.0, 3.0, 11, r);
    REQUIRE(b.jumps.size() >= a.jumps.size());
    for (const auto& j : a.jumps) {
      const auto it = std::find_if(b.jumps.begin(), b.jumps.end(), [&j](const Jump& k) { return k.t == j.t; });
      REQUIRE(it != b.jumps.end());
      CHECK(it->x == doctest::Approx(j.x).epsilon(1e-10));
    }
    for (const auto& j : b.jumps) {
      if (j.x > 1e-3 * (1 + 1e-9)) {
        CHECK(std::any_of(a.jumps.begin(), a.jumps.end(), [&j](const Jump& k) { return k.t == j.t; }));
      }
    }
  }
}

TEST_CASE("renewal central limit theorem for the passage time") {
  const auto g = make_model("gamma", {});
  const double n = 1e4, level = std::log(n), s2 = g.sigma2();
  const PathSampler sampler(g, choose_eps(g, n));
  const int reps = 5000;
  std::vector<double> z(reps);
  int inside = 0;
  for (int r = 0; r < reps; ++r) {
    const auto p = sampler.sample(level, 0.0, 77, static_cast<std::uint32_t>(r));
    const double tau = passage_time(p, level).tau;
    // E tau = U[0, level) = level + sigma^2/2 + o(1)
    z[r] = (tau - level - 0.5 * s2) / std::sqrt(s2 * level);
    inside += tau >= 0.5 * level && tau <= 2.0 * level;
  }
  const auto s = summarize(z);
  CHECK(std::abs(s.mean) < 4.0 / std::sqrt(reps));
  CHECK(std::abs(s.var - 1.0) < 0.15);
  CHECK(static_cast<double>(inside) / reps >= 1.0 - 8.0 * s2 / level);
}

TEST_CASE("truncation budget") {
  const auto g = make_model("gamma", {});
  CHECK_THROWS_AS(PathSampler(g, 0.1, TruncationBudget{1e6, 0.01}), TruncationBudgetExceeded);
  const double eps = choose_eps(g, 1e6, 0.01);
  const PathSampler ok(g, eps, TruncationBudget{1e6, 0.01});
  CHECK(ok.occupancy_error_bound(1e6) <= 0.01);
  CHECK(ok.occupancy_error_bound(1e6) > 0.001);
  CHECK(choose_eps(make_model("compound-poisson", {}), 1e6) == 0.0);
}

TEST_CASE("inverse tail") {
  const auto g = make_model("gamma", {});
  const PathSampler sampler(g, 1e-7);
  for (double w : {1e-5, 0.3, 2.0, 10.0}) CHECK(g.tail(sampler.size_for(w)) == doctest::Approx(w).epsilon(1e-9));
  CHECK_THROWS(sampler.size_for(0.0));
}

TEST_CASE("binary dump round trip") {
  const auto p = sample_path(make_model("gamma", {}), 5.0, 1e-5, 4);
  std::stringstream buf;
  write_binary(p, buf);
  CHECK(buf.str().size() == 8 + 24 * p.jumps.size());
  const auto jumps = read_binary(buf);
  REQUIRE(jumps.size() == p.jumps.size());
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    CHECK(jumps[i].t == p.jumps[i].t);
    CHECK(jumps[i].s_pre == p.jumps[i].s_pre);
    CHECK(jumps[i].x == p.jumps[i].x);
  }
  std::stringstream bad("abc");
  CHECK_THROWS_AS(read_binary(bad), IOError);
}
