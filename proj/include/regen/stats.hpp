#pragma once

#include <cstddef>
#include <span>

namespace regen {

// Recursive halving; the result depends only on the order of the input.
double pairwise_sum(std::span<const double> x);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double var = 0.0;       // unbiased; 0 for a single value
  double se_mean = 0.0;   // inf below two values
  double se_var = 0.0;    // from the fourth central moment; inf below four values
  double skewness = 0.0;  // m3 / m2^{3/2}; 0 for a constant sample
};

Summary summarize(std::span<const double> x);

// sup |F_n - Φ| against the standard normal; at least 100 values.
double ks_normal(std::span<const double> x);

}  // namespace regen
