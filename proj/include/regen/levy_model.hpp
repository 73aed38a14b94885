#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>

namespace regen {

struct GammaLike {
  double a = 1.0;      // rate of the Levy density a x^{-1} e^{-theta x}
  double theta = 1.0;  // exponential decay
};

struct CompoundPoissonExp {
  double lam = 1.0;  // jump rate
  double mu = 1.0;   // exponential jump-size parameter
};

struct TailSpecified {
  std::function<double(double)> tail;  // raw N0(x) for x > 0, nonincreasing
  double x_min = 1.0;                  // split point for quadrature
  double x_max = 80.0;                 // tail treated as zero beyond this
  std::string label = "tail";
};

using LevyKind = std::variant<GammaLike, CompoundPoissonExp, TailSpecified>;

// A Levy measure nu0 on (0, inf), described either by a closed form or by its
// tail N0(x) = nu0[x, inf). Models are built raw and turned into the time-scaled
// version with E S_1 = 1 by normalized(); the transforms require the latter.
class LevyModel {
 public:
  explicit LevyModel(LevyKind kind);

  static LevyModel gamma_like(double a, double theta);
  static LevyModel compound_poisson_exp(double lam, double mu);
  static LevyModel tail_specified(TailSpecified spec);

  [[nodiscard]] LevyModel normalized() const;
  bool is_normalized() const noexcept { return normalized_; }
  void require_normalized() const;

  const LevyKind& kind() const noexcept { return kind_; }
  std::string name() const;

  // ∫ N0 dx of the raw model (the time-rescale factor).
  double mean_mass() const noexcept { return mean_mass_; }
  // Var S_1 of the normalized model.
  double sigma2() const noexcept { return sigma2_; }

  double tail(double x) const;
  bool finite_activity() const noexcept;
  double tail_at_zero() const;

  // Closed-form Laplace exponent when the kind has one.
  std::optional<double> phi0_closed_form(double m) const;
  // x with tail(x) = w, when invertible in closed form.
  std::optional<double> inverse_tail_closed_form(double w) const;

  double small_jump_mean(double eps) const;      // ∫_0^eps x nu0(dx)
  double small_jump_hit_mass(double eps) const;  // ∫_0^eps (1 - e^{-x}) nu0(dx)

  double x_split() const noexcept;  // natural quadrature breakpoint
  double x_max() const noexcept;    // tail negligible beyond

 private:
  double raw_tail(double x) const;

  LevyKind kind_;
  bool normalized_ = false;
  double scale_ = 1.0;  // multiplies the raw tail
  double mean_mass_ = 0.0;
  double sigma2_ = 0.0;
};

// Shipped slowly varying tails (raw, before normalization).
//   fast:   N0(x) = exp(sqrt(log(1 + 1/x))) e^{-x}
//   loglog: N0(x) = log(e + log(1 + 1/x)) e^{-x}
LevyModel fast_tail_model();
LevyModel loglog_tail_model();

// Builds a normalized model from a gallery name ("gamma", "compound-poisson",
// "fast", "loglog") and its numeric parameters.
LevyModel make_model(const std::string& name, const std::map<std::string, double>& params);

}  // namespace regen
