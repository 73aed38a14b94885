#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "regen/atoms.hpp"
#include "regen/error.hpp"
#include "regen/occupancy.hpp"
#include "regen/path.hpp"
#include "regen/stats.hpp"

using namespace regen;

namespace {

SubordinatorPath one_box() {
  SubordinatorPath p;
  p.jumps = {{1.0, 0.0, 10.0}};
  p.horizon_t = 2.0;
  p.horizon_s = 10.0;
  return p;
}

// All-pairs count: jump i is occupied iff some location lies in ]s_pre, s_pre + x[.
OccupancyResult brute_force(const SubordinatorPath& p, const std::vector<double>& loc, double T) {
  OccupancyResult r;
  std::size_t inside = 0;
  for (const auto& j : p.jumps) {
    if (j.t > T) continue;
    std::size_t c = 0;
    for (double y : loc) c += y > j.s_pre && y < j.s_pre + j.x;
    if (c > 0) {
      ++r.k_total;
      r.k_process.push_back({j.t, 1});
      r.composition.push_back(c);
      inside += c;
    }
  }
  for (double y : loc) r.uncovered_atoms += y > p.horizon_s;
  r.outside_atoms = loc.size() - inside - r.uncovered_atoms;
  return r;
}

SubordinatorPath micro_path(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> count(0, 10);
  std::uniform_int_distribution<int> half_units(1, 6);
  std::bernoulli_distribution coin(0.5);
  SubordinatorPath p;
  p.drift = coin(gen) ? 0.0 : 0.5;
  double t = 0.0, level = 0.0;
  const int jumps = count(gen);
  for (int i = 0; i < jumps; ++i) {
    const double dt = 0.5 * half_units(gen);
    level += p.drift * dt;
    t += dt;
    const double x = coin(gen) ? 0.5 * half_units(gen) : std::uniform_real_distribution<double>(0.01, 3.0)(gen);
    p.jumps.push_back({t, level, x});
    level += x;
  }
  p.horizon_t = t + 1.0;
  p.horizon_s = level + p.drift;
  return p;
}

}  // namespace

TEST_CASE("empty atom set") {
  const auto r = count_occupied(one_box(), std::vector<double>{});
  CHECK(r.k_total == 0);
  CHECK(r.composition.empty());
  CHECK(count_occupied_multiplicative(one_box(), std::vector<double>{}).k_total == 0);
}

TEST_CASE("a single box") {
  const std::vector<double> loc{1.0, 2.0, 3.0};
  const auto r = count_occupied(one_box(), loc);
  CHECK(r.k_total == 1);
  CHECK(r.composition == std::vector<std::size_t>{3});
  CHECK(r.k_process.size() == 1);
  CHECK(r.k_process[0].t == 1.0);
  std::vector<double> u;
  for (double y : loc) u.push_back(-std::expm1(-y));
  const auto m = count_occupied_multiplicative(one_box(), u);
  CHECK(m.k_total == 1);
  CHECK(m.composition == r.composition);
  CHECK(count_occupied(one_box(), loc, 0.0).k_total == 0);
}

TEST_CASE("endpoints are not inside") {
  const std::vector<double> loc{0.0, 10.0};
  const auto r = count_occupied(one_box(), loc);
  CHECK(r.k_total == 0);
  CHECK(r.outside_atoms == 2);
}

TEST_CASE("unsorted input is rejected") {
  const std::vector<double> loc{3.0, 1.0};
  CHECK_THROWS_AS(count_occupied(one_box(), loc), UnsortedInput);
  CHECK_THROWS_AS(count_occupied_multiplicative(one_box(), std::vector<double>{0.5, 0.1}), UnsortedInput);
}

TEST_CASE("merge scan equals brute force on micro instances") {
  std::mt19937_64 gen(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = micro_path(gen);
    std::vector<double> loc(std::uniform_int_distribution<int>(0, 10)(gen));
    for (auto& y : loc) {
      y = std::bernoulli_distribution(0.5)(gen) ? 0.5 * std::uniform_int_distribution<int>(0, 40)(gen)
                                                 : std::uniform_real_distribution<double>(0.0, p.horizon_s + 1.0)(gen);
    }
    std::sort(loc.begin(), loc.end());
    for (double T : {kForever, 0.5 * p.horizon_t}) {
      const auto fast = count_occupied(p, loc, T);
      const auto slow = brute_force(p, loc, T);
      REQUIRE(fast.k_total == slow.k_total);
      CHECK(fast.composition == slow.composition);
      CHECK(fast.uncovered_atoms == slow.uncovered_atoms);
      CHECK(fast.outside_atoms == slow.outside_atoms);
      REQUIRE(fast.k_process.size() == slow.k_process.size());
      for (std::size_t i = 0; i < fast.k_process.size(); ++i) {
        CHECK(fast.k_process[i].t == slow.k_process[i].t);
        CHECK(fast.k_process[i].increment == 1);
      }
      const std::size_t total =
          std::accumulate(fast.composition.begin(), fast.composition.end(), std::size_t{0}) + fast.outside_atoms +
          fast.uncovered_atoms;
      CHECK(total == loc.size());
    }
  }
}

TEST_CASE("multiplicative picture counts the same boxes") {
  const auto g = make_model("gamma", {});
  const PathSampler sampler(g, 1e-7);
  for (std::uint32_t seed = 0; seed < 100; ++seed) {
    const auto path = sampler.sample(std::log(1e3) + 5.0, 0.0, seed, 0);
    const auto loc = project(sample_atoms(1e3, seed), 1e3);
    std::vector<double> u(loc.size());
    std::transform(loc.begin(), loc.end(), u.begin(), [](double y) { return -std::expm1(-y); });
    const auto a = count_occupied(path, loc), m = count_occupied_multiplicative(path, u);
    REQUIRE(a.k_total == m.k_total);
    CHECK(a.composition == m.composition);
    CHECK(a.outside_atoms == m.outside_atoms);
    CHECK(a.uncovered_atoms == m.uncovered_atoms);
  }
}

TEST_CASE("few boxes are hit after the passage over log n") {
  const std::vector<double> low{0.5, 1.0};
  auto p = one_box();
  CHECK(truncation_tail_bound(1e4, p, low) == 0.0);

  const auto g = make_model("gamma", {});
  const double n = 1e4;
  const PathSampler sampler(g, choose_eps(g, n));
  const int reps = 5000;
  std::vector<double> tail(reps);
  for (int r = 0; r < reps; ++r) {
    const auto rep = static_cast<std::uint32_t>(r);
    const auto path = sampler.sample(std::log(n) + 12.0, 0.0, 14, rep);
    tail[r] = truncation_tail_from_thresholds(n, path, gap_thresholds(path, 14, rep));
  }
  const auto s = summarize(tail);
  CHECK(s.mean >= 0.0);
  CHECK(s.mean <= 1.0 + 3.0 * s.se_mean);
}

TEST_CASE("json record") {
  const std::vector<double> loc{1.0, 2.0, 3.0, 11.0};
  const auto j = to_json(count_occupied(one_box(), loc));
  CHECK(j["k_total"] == 1);
  CHECK(j["composition"] == nlohmann::json::array({3}));
  CHECK(j["uncovered_atoms"] == 1);
}
