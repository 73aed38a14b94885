#include "regen/occupancy.hpp"

#include <algorithm>
#include <cmath>

#include "regen/error.hpp"

namespace regen {
namespace {

void require_sorted(std::span<const double> v) {
  if (!std::is_sorted(v.begin(), v.end())) throw UnsortedInput("locations must be sorted ascending");
}

template <class Map>
OccupancyResult scan(const SubordinatorPath& path, std::span<const double> locations, double T, Map map) {
  require_sorted(locations);
  OccupancyResult r;
  const double top = map(path.horizon_s);
  std::size_t j = 0;
  std::size_t current = path.jumps.size();  // jump whose gap holds the running count
  std::size_t count = 0;
  auto flush = [&] {
    if (count > 0) {
      r.k_process.push_back({path.jumps[current].t, 1});
      r.composition.push_back(count);
    }
    count = 0;
  };
  for (double y : locations) {
    if (y > top) {
      ++r.uncovered_atoms;
      continue;
    }
    while (j < path.jumps.size() && map(path.jumps[j].s_pre + path.jumps[j].x) <= y) ++j;
    const bool inside = j < path.jumps.size() && map(path.jumps[j].s_pre) < y && path.jumps[j].t <= T;
    if (!inside) {
      ++r.outside_atoms;
      continue;
    }
    if (j != current) {
      flush();
      current = j;
    }
    ++count;
  }
  flush();
  r.k_total = r.composition.size();
  return r;
}

}  // namespace

OccupancyResult count_occupied(const SubordinatorPath& path, std::span<const double> locations, double T) {
  return scan(path, locations, T, [](double y) { return y; });
}

OccupancyResult count_occupied_multiplicative(const SubordinatorPath& path,
                                              std::span<const double> uniform_locations, double T) {
  return scan(path, uniform_locations, T, [](double y) { return -std::expm1(-y); });
}

std::vector<double> occupied_times(const SubordinatorPath& path, std::span<const double> thresholds, double n) {
  if (thresholds.size() != path.jumps.size()) throw InvalidArgument("one threshold per jump expected");
  std::vector<double> times;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] <= n) times.push_back(path.jumps[i].t);
  }
  return times;
}

namespace {

double tau_of(double n, const SubordinatorPath& path) {
  return n > 1.0 ? passage_time(path, std::log(n)).tau : 0.0;
}

}  // namespace

double truncation_tail_bound(double n, const SubordinatorPath& path, std::span<const double> locations) {
  const OccupancyResult all = count_occupied(path, locations);
  const double tau = tau_of(n, path);
  const auto before = std::count_if(all.k_process.begin(), all.k_process.end(),
                                    [tau](const KStep& s) { return s.t <= tau; });
  return static_cast<double>(all.k_total) - static_cast<double>(before);
}

double truncation_tail_from_thresholds(double n, const SubordinatorPath& path,
                                      std::span<const double> thresholds) {
  const std::vector<double> times = occupied_times(path, thresholds, n);
  const double tau = tau_of(n, path);
  const auto before = std::upper_bound(times.begin(), times.end(), tau) - times.begin();
  return static_cast<double>(times.size()) - static_cast<double>(before);
}

nlohmann::json to_json(const OccupancyResult& r) {
  return {{"k_total", r.k_total}, {"composition", r.composition}, {"uncovered_atoms", r.uncovered_atoms}};
}

}  // namespace regen
