#include "regen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "regen/error.hpp"

namespace regen {

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

Summary summarize(std::span<const double> x) {
  Summary s;
  s.count = x.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (x.empty()) {
    s.se_mean = s.se_var = inf;
    return s;
  }
  const auto n = static_cast<double>(x.size());
  s.mean = pairwise_sum(x) / n;
  std::vector<double> d2(x.size()), d3(x.size()), d4(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - s.mean;
    d2[i] = d * d;
    d3[i] = d2[i] * d;
    d4[i] = d2[i] * d2[i];
  }
  const double m2 = pairwise_sum(d2) / n, m3 = pairwise_sum(d3) / n, m4 = pairwise_sum(d4) / n;
  s.var = x.size() > 1 ? m2 * n / (n - 1.0) : 0.0;
  s.se_mean = x.size() > 1 ? std::sqrt(s.var / n) : inf;
  s.se_var = x.size() > 3 ? std::sqrt(std::max(m4 - (n - 3.0) / (n - 1.0) * s.var * s.var, 0.0) / n) : inf;
  s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return s;
}

double ks_normal(std::span<const double> x) {
  if (x.size() < 100) throw TooFewSamples("ks_normal needs at least 100 values");
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  const auto n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = 0.5 * std::erfc(-v[i] / std::numbers::sqrt2);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace regen
