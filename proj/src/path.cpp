#include "regen/path.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "regen/error.hpp"
#include "regen/rng.hpp"

namespace regen {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Arrival {
  double t;
  double w;
};

}  // namespace

PathSampler::PathSampler(const LevyModel& model, double eps, std::optional<TruncationBudget> budget)
    : model_(model), eps_(eps) {
  model_.require_normalized();
  if (model_.finite_activity()) {
    if (!(eps >= 0.0)) throw InvalidArgument("eps must be >= 0");
    rate_ = eps > 0.0 ? model_.tail(eps) : model_.tail_at_zero();
  } else {
    if (!(eps > 0.0)) throw InvalidArgument("infinite-activity models need eps > 0");
    rate_ = model_.tail(eps);
  }
  drift_ = model_.small_jump_mean(eps);
  if (budget) {
    const double bound = occupancy_error_bound(budget->n);
    if (bound > budget->tol) {
      std::ostringstream msg;
      msg << "truncation at eps=" << eps << " gives occupancy error bound " << bound << " > " << budget->tol;
      throw TruncationBudgetExceeded(msg.str());
    }
  }
  if (!model_.inverse_tail_closed_form(rate_)) {
    // Bracketing table for the numeric inverse: log N0 against log x.
    double l = std::log(eps);
    const double l_stop = std::log(1e4);
    while (true) {
      const double lt = std::log(model_.tail(std::exp(l)));
      log_x_.push_back(l);
      log_tail_.push_back(lt);
      if (!(lt > -690.0) || l > l_stop) break;
      l += 0.05;
    }
  }
}

double PathSampler::size_for(double w) const {
  if (auto x = model_.inverse_tail_closed_form(w)) return *x;
  if (!(w > 0.0)) throw InverseTailFailure("tail value must be positive");
  const double lw = std::log(w);
  if (lw >= log_tail_.front()) return eps_;
  // First table index whose log-tail is below lw.
  const auto it = std::partition_point(log_tail_.begin(), log_tail_.end(), [lw](double v) { return v >= lw; });
  if (it == log_tail_.end()) throw InverseTailFailure("tail value below the inverse table");
  const auto j = static_cast<std::size_t>(it - log_tail_.begin());
  auto f = [this, lw](double l) { return std::log(model_.tail(std::exp(l))) - lw; };
  double a = log_x_[j - 1], b = log_x_[j];
  const double fa = log_tail_[j - 1] - lw, fb = log_tail_[j] - lw;
  if (fa == 0.0) return std::exp(a);
  auto tol = [](double lo, double hi) { return std::abs(hi - lo) <= 4e-15 * std::max(1.0, std::abs(lo)); };
  std::uintmax_t iters = 60;
  try {
    const auto root = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    return std::exp(0.5 * (root.first + root.second));
  } catch (const std::exception& e) {
    throw InverseTailFailure(std::string("inverse tail root finding failed: ") + e.what());
  }
}

SubordinatorPath PathSampler::sample(double target_level, double extra_time, std::uint64_t seed,
                                     std::uint32_t replicate) const {
  SubordinatorPath path;
  path.drift = drift_;
  path.eps = eps_;
  double level = 0.0;
  double t_last = 0.0;
  double stop_at = target_level <= 0.0 ? std::max(0.0, extra_time) : kInf;
  bool reached = target_level <= 0.0;

  auto drift_crossing = [&](double until) {
    if (reached || drift_ <= 0.0) return;
    const double tc = t_last + (target_level - level) / drift_;
    if (tc <= until) {
      reached = true;
      stop_at = tc + extra_time;
    }
  };
  auto finish = [&](double horizon) {
    path.horizon_t = horizon;
    path.horizon_s = level + drift_ * (horizon - t_last);
    return path;
  };

  std::vector<Arrival> block;
  for (std::uint32_t k = 0; k < streams::kPathBlocksEnd; ++k) {
    const double start = static_cast<double>(k);
    if (stop_at <= start) return finish(stop_at);
    // Arrivals in [k, k+1) x [0, rate]: marks w by cumulative exponential
    // spacings (so a smaller rate keeps a prefix), times uniform.
    RandomStream rng(seed, replicate, k);
    block.clear();
    for (double w = rng.exponential(); w <= rate_; w += rng.exponential()) {
      block.push_back({start + rng.uniform(), w});
    }
    std::sort(block.begin(), block.end(), [](const Arrival& l, const Arrival& r) { return l.t < r.t; });
    for (const Arrival& a : block) {
      drift_crossing(a.t);
      if (a.t > stop_at) return finish(stop_at);
      const double s_pre = level + drift_ * (a.t - t_last);
      const double x = size_for(a.w);
      path.jumps.push_back({a.t, s_pre, x});
      level = s_pre + x;
      t_last = a.t;
      if (!reached && level >= target_level) {
        reached = true;
        stop_at = a.t + extra_time;
      }
    }
    drift_crossing(start + 1.0);
  }
  throw HorizonTooShort("path did not reach its target level");
}

double choose_eps(const LevyModel& model, double n, double budget) {
  model.require_normalized();
  if (model.finite_activity()) return 0.0;
  if (!(n > 0.0) || !(budget > 0.0)) throw InvalidArgument("choose_eps needs n > 0 and budget > 0");
  double lo = std::log(1e-300), hi = 0.0;
  if (n * model.small_jump_mean(1.0) <= budget) return 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-6; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (n * model.small_jump_mean(std::exp(mid)) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(lo);
}

SubordinatorPath sample_path(const LevyModel& model, double target_level, double eps, std::uint64_t seed,
                             std::optional<TruncationBudget> budget) {
  return PathSampler(model, eps, budget).sample(target_level, 0.0, seed);
}

namespace {

double post_level(const Jump& j) { return j.s_pre + j.x; }

// Level right after jump i-1 (0 before the first jump) and its time.
std::pair<double, double> anchor_before(const SubordinatorPath& path, std::size_t i) {
  if (i == 0) return {0.0, 0.0};
  return {path.jumps[i - 1].t, post_level(path.jumps[i - 1])};
}

double drift_time(const SubordinatorPath& path, std::size_t i, double level) {
  const auto [t0, s0] = anchor_before(path, i);
  return t0 + (level - s0) / path.drift;
}

}  // namespace

Passage passage_time(const SubordinatorPath& path, double level) {
  if (level <= 0.0) return {0.0, 0.0};
  if (path.horizon_s < level) throw HorizonTooShort("path stops below the requested level");
  const auto it = std::partition_point(path.jumps.begin(), path.jumps.end(),
                                       [level](const Jump& j) { return post_level(j) < level; });
  const auto i = static_cast<std::size_t>(it - path.jumps.begin());
  if (it == path.jumps.end() || it->s_pre >= level) {
    if (path.drift <= 0.0) throw HorizonTooShort("level not crossed");
    return {drift_time(path, i, level), 0.0};
  }
  return {it->t, post_level(*it) - level};
}

double exit_time(const SubordinatorPath& path, double level) {
  if (path.horizon_s <= level) throw HorizonTooShort("path does not exceed the requested level");
  const auto it = std::partition_point(path.jumps.begin(), path.jumps.end(),
                                       [level](const Jump& j) { return post_level(j) <= level; });
  const auto i = static_cast<std::size_t>(it - path.jumps.begin());
  if (it == path.jumps.end() || it->s_pre > level) {
    if (path.drift <= 0.0) throw HorizonTooShort("level not exceeded");
    return std::max(0.0, drift_time(path, i, level));
  }
  return it->t;
}

double level_at(const SubordinatorPath& path, double t) {
  if (t < 0.0) throw InvalidArgument("time must be >= 0");
  if (t > path.horizon_t) throw HorizonTooShort("time beyond the path horizon");
  const auto it =
      std::partition_point(path.jumps.begin(), path.jumps.end(), [t](const Jump& j) { return j.t <= t; });
  if (it == path.jumps.begin()) return path.drift * t;
  const Jump& last = *(it - 1);
  return post_level(last) + path.drift * (t - last.t);
}

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw IOError("truncated path dump");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

}  // namespace

void write_binary(const SubordinatorPath& path, std::ostream& out) {
  put_u64(out, path.jumps.size());
  for (const Jump& j : path.jumps) {
    put_u64(out, std::bit_cast<std::uint64_t>(j.t));
    put_u64(out, std::bit_cast<std::uint64_t>(j.s_pre));
    put_u64(out, std::bit_cast<std::uint64_t>(j.x));
  }
  if (!out) throw IOError("failed writing path dump");
}

std::vector<Jump> read_binary(std::istream& in) {
  const std::uint64_t count = get_u64(in);
  std::vector<Jump> jumps;
  jumps.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 20)));
  for (std::uint64_t i = 0; i < count; ++i) {
    Jump j;
    j.t = std::bit_cast<double>(get_u64(in));
    j.s_pre = std::bit_cast<double>(get_u64(in));
    j.x = std::bit_cast<double>(get_u64(in));
    jumps.push_back(j);
  }
  return jumps;
}

}  // namespace regen
