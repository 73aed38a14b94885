#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "regen/atoms.hpp"
#include "regen/error.hpp"
#include "regen/occupancy.hpp"
#include "regen/path.hpp"
#include "regen/stats.hpp"

using namespace regen;

TEST_CASE("atom count, locations and marks") {
  const double n_max = 50.0;
  const int reps = 10000;
  std::vector<double> counts(reps), ys, marks;
  for (int r = 0; r < reps; ++r) {
    const auto set = sample_atoms(n_max, 8, static_cast<std::uint32_t>(r));
    counts[r] = static_cast<double>(set.atoms.size());
    for (std::size_t i = 0; i < set.atoms.size(); ++i) {
      if (i > 0) REQUIRE(set.atoms[i].y >= set.atoms[i - 1].y);
      REQUIRE(set.atoms[i].y > 0.0);
      REQUIRE(set.atoms[i].mark >= 0.0);
      REQUIRE(set.atoms[i].mark <= n_max);
      if (r < 400) {
        ys.push_back(set.atoms[i].y);
        marks.push_back(set.atoms[i].mark / n_max);
      }
    }
  }
  const auto sc = summarize(counts);
  CHECK(std::abs(sc.mean - n_max) < 3.0 * std::sqrt(n_max / reps));
  CHECK(std::abs(sc.var - n_max) < 4.0 * sc.se_var);
  const auto sy = summarize(ys), sm = summarize(marks);
  CHECK(std::abs(sy.mean - 1.0) < 4.0 * sy.se_mean);
  CHECK(std::abs(sy.var - 1.0) < 4.0 * sy.se_var);
  CHECK(std::abs(sm.mean - 0.5) < 4.0 * sm.se_mean);
  CHECK(sample_atoms(0.0, 1).atoms.empty());
}

TEST_CASE("largest location sits near log n") {
  std::vector<double> maxima;
  for (std::uint32_t r = 0; r < 1001; ++r) maxima.push_back(sample_atoms(1e4, 21, r).atoms.back().y);
  std::nth_element(maxima.begin(), maxima.begin() + 500, maxima.end());
  CHECK(std::abs(maxima[500] - std::log(1e4)) < 2.0);
}

TEST_CASE("projection thins monotonely") {
  const auto set = sample_atoms(100.0, 5);
  CHECK(project(set, 100.0).size() == set.atoms.size());
  CHECK(project(set, 0.0).empty());
  CHECK_THROWS_AS(project(set, 101.0), BadIntensity);
  for (std::uint32_t r = 0; r < 100; ++r) {
    const auto s = sample_atoms(100.0, 6, r);
    const auto small = project(s, 30.0), large = project(s, 70.0);
    REQUIRE(std::is_sorted(small.begin(), small.end()));
    CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
  }
}

TEST_CASE("occupancy grows with n and T") {
  const auto g = make_model("gamma", {});
  const PathSampler sampler(g, 1e-7);
  for (std::uint32_t r = 0; r < 30; ++r) {
    const auto path = sampler.sample(std::log(1e3) + 10.0, 0.0, 12, r);
    const auto atoms = sample_atoms(1e3, 12, r);
    std::size_t prev_n = 0;
    for (double n : {10.0, 100.0, 500.0, 1000.0}) {
      const auto loc = project(atoms, n);
      const auto k = count_occupied(path, loc).k_total;
      CHECK(k >= prev_n);
      prev_n = k;
      std::size_t prev_t = 0;
      for (double T : {0.0, 1.0, 3.0, 6.0, kForever}) {
        const auto kt = count_occupied(path, loc, T).k_total;
        CHECK(kt >= prev_t);
        prev_t = kt;
      }
    }
  }
}

TEST_CASE("threshold shortcut matches explicit atoms in law") {
  const auto g = make_model("gamma", {});
  const auto path = sample_path(g, std::log(100.0) + 12.0, 1e-6, 31);
  const int reps = 4000;
  std::vector<double> k_atoms(reps), k_direct(reps);
  for (int r = 0; r < reps; ++r) {
    const auto rep = static_cast<std::uint32_t>(r);
    const auto th_a = gap_thresholds(path, sample_atoms(100.0, 40, rep));
    const auto th_d = gap_thresholds(path, 41, rep);
    k_atoms[r] = static_cast<double>(occupied_times(path, th_a, 100.0).size());
    k_direct[r] = static_cast<double>(occupied_times(path, th_d, 100.0).size());
  }
  const auto a = summarize(k_atoms), d = summarize(k_direct);
  CHECK(std::abs(a.mean - d.mean) < 4.0 * std::hypot(a.se_mean, d.se_mean));
  CHECK(std::abs(a.var - d.var) < 4.0 * std::hypot(a.se_var, d.se_var));
}

TEST_CASE("explicit thresholds reproduce direct counting") {
  const auto g = make_model("gamma", {});
  for (std::uint32_t r = 0; r < 20; ++r) {
    const auto path = sample_path(g, std::log(200.0) + 12.0, 1e-6, 50 + r);
    const auto atoms = sample_atoms(200.0, 60, r);
    const auto th = gap_thresholds(path, atoms);
    for (double n : {5.0, 50.0, 200.0}) {
      CHECK(occupied_times(path, th, n).size() == count_occupied(path, project(atoms, n)).k_total);
    }
  }
}

TEST_CASE("atom csv") {
  std::ostringstream out;
  write_csv(sample_atoms(3.0, 2), out);
  CHECK(out.str().rfind("y,mark\n", 0) == 0);
}
