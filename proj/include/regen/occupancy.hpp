#pragma once

#include <limits>
#include <span>
#include <vector>

#include "json.hpp"
#include "regen/path.hpp"

namespace regen {

struct KStep {
  double t = 0.0;
  int increment = 1;
};

struct OccupancyResult {
  std::size_t k_total = 0;
  std::vector<KStep> k_process;          // one +1 step per occupied gap, by time
  std::vector<std::size_t> composition;  // atoms per occupied gap, in time order
  std::size_t outside_atoms = 0;         // atoms on drift stretches, endpoints or in gaps after T
  std::size_t uncovered_atoms = 0;       // atoms beyond the path horizon
};

inline constexpr double kForever = std::numeric_limits<double>::infinity();

// Gaps ]s_pre, s_pre + x[ of jumps with t <= T that contain at least one of
// the sorted locations. Single merge-scan.
OccupancyResult count_occupied(const SubordinatorPath& path, std::span<const double> locations,
                               double T = kForever);

// Same count in the multiplicative picture: gaps ]1-e^{-a}, 1-e^{-b}[ and
// locations u = 1 - e^{-y} in (0, 1).
OccupancyResult count_occupied_multiplicative(const SubordinatorPath& path,
                                              std::span<const double> uniform_locations, double T = kForever);

// Sorted times of the gaps occupied at intensity n, given per-jump thresholds.
std::vector<double> occupied_times(const SubordinatorPath& path, std::span<const double> thresholds, double n);

// K_n - K_n(tau_n), with tau_n the passage time over log n.
double truncation_tail_bound(double n, const SubordinatorPath& path, std::span<const double> locations);
double truncation_tail_from_thresholds(double n, const SubordinatorPath& path,
                                      std::span<const double> thresholds);

nlohmann::json to_json(const OccupancyResult& r);

}  // namespace regen
