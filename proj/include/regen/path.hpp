#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "regen/levy_model.hpp"

namespace regen {

struct Jump {
  double t = 0.0;      // jump time
  double s_pre = 0.0;  // level just before the jump
  double x = 0.0;      // jump size
};

// Jumps above a truncation level eps plus the linear drift that replaces the
// mean of the removed small jumps. Between jumps the level grows at `drift`.
struct SubordinatorPath {
  std::vector<Jump> jumps;
  double drift = 0.0;
  double eps = 0.0;
  double horizon_t = 0.0;
  double horizon_s = 0.0;
};

struct TruncationBudget {
  double n = 0.0;    // atom intensity the path will be used with
  double tol = 0.01; // allowed n ∫_0^eps x nu0(dx)
};

// Precomputes everything that depends only on (model, eps): the jump rate
// N0(eps), the drift and an inverse-tail table. Immutable; sample() is safe to
// call concurrently.
class PathSampler {
 public:
  PathSampler(const LevyModel& model, double eps, std::optional<TruncationBudget> budget = std::nullopt);

  // A path that runs until the level reaches target_level, then for a further
  // extra_time. The randomness is the stream family (seed, replicate, *).
  SubordinatorPath sample(double target_level, double extra_time, std::uint64_t seed,
                          std::uint32_t replicate = 0) const;

  double eps() const noexcept { return eps_; }
  double jump_rate() const noexcept { return rate_; }
  double drift() const noexcept { return drift_; }
  // n ∫_0^eps x nu0(dx): expected atoms lost to truncated gaps is below this.
  double occupancy_error_bound(double n) const noexcept { return n * drift_; }
  // Jump size x with N0(x) = w, for 0 < w <= jump_rate().
  double size_for(double w) const;

  const LevyModel& model() const noexcept { return model_; }

 private:
  LevyModel model_;
  double eps_;
  double rate_;
  double drift_;
  std::vector<double> log_x_;     // increasing
  std::vector<double> log_tail_;  // decreasing
};

// Largest eps (to a few digits) with n ∫_0^eps x nu0(dx) <= budget; 0 for
// finite-activity models, which need no truncation.
double choose_eps(const LevyModel& model, double n, double budget = 0.01);

SubordinatorPath sample_path(const LevyModel& model, double target_level, double eps, std::uint64_t seed,
                             std::optional<TruncationBudget> budget = std::nullopt);

struct Passage {
  double tau = 0.0;
  double overshoot = 0.0;
};

// First t with S_t >= level (tau = 0 at level 0).
Passage passage_time(const SubordinatorPath& path, double level);
// inf{t : S_t > level}; the time spent at or below level.
double exit_time(const SubordinatorPath& path, double level);
double level_at(const SubordinatorPath& path, double t);

// Little-endian u64 count followed by (t, s_pre, x) float64 triples.
void write_binary(const SubordinatorPath& path, std::ostream& out);
std::vector<Jump> read_binary(std::istream& in);

}  // namespace regen
