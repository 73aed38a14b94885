#include "regen/levy_model.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "regen/error.hpp"
#include "regen/quadrature.hpp"

namespace regen {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

LevyModel::LevyModel(LevyKind kind) : kind_(std::move(kind)) {
  std::visit(Overloaded{
                 [this](const GammaLike& g) {
                   check_positive(g.a, "a");
                   check_positive(g.theta, "theta");
                   mean_mass_ = g.a / g.theta;
                   sigma2_ = 1.0 / g.theta;
                 },
                 [this](const CompoundPoissonExp& c) {
                   check_positive(c.lam, "lam");
                   check_positive(c.mu, "mu");
                   mean_mass_ = c.lam / c.mu;
                   sigma2_ = 2.0 / c.mu;
                 },
                 [this](const TailSpecified& t) {
                   if (!t.tail) throw InvalidArgument("tail-specified model needs a tail function");
                   check_positive(t.x_min, "x_min");
                   if (!(t.x_max > t.x_min)) throw InvalidArgument("x_max must exceed x_min");
                   const double marks[1] = {t.x_min};
                   const double lo = t.x_min * std::exp(-60.0);
                   auto first = [&t](double x) { return t.tail(x); };
                   auto second = [&t](double x) { return 2.0 * x * t.tail(x); };
                   // Below lo the tail is slowly varying, so ∫_0^lo N0 ≈ lo N0(lo).
                   mean_mass_ = integrate_log_x(first, lo, t.x_max, marks).value + lo * t.tail(lo);
                   sigma2_ = integrate_log_x(second, lo, t.x_max, marks).value / mean_mass_;
                   check_positive(mean_mass_, "mean mass of tail");
                 },
             },
             kind_);
}

LevyModel LevyModel::gamma_like(double a, double theta) { return LevyModel(GammaLike{a, theta}); }

LevyModel LevyModel::compound_poisson_exp(double lam, double mu) {
  return LevyModel(CompoundPoissonExp{lam, mu});
}

LevyModel LevyModel::tail_specified(TailSpecified spec) { return LevyModel(std::move(spec)); }

LevyModel LevyModel::normalized() const {
  LevyModel out = *this;
  out.normalized_ = true;
  out.scale_ = 1.0 / mean_mass_;
  return out;
}

void LevyModel::require_normalized() const {
  if (!normalized_) throw NonNormalizedModel("model must be normalized to E S_1 = 1 first");
}

std::string LevyModel::name() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&os](const GammaLike& g) { os << "gamma(a=" << g.a << ",theta=" << g.theta << ")"; },
                 [&os](const CompoundPoissonExp& c) {
                   os << "compound-poisson(lam=" << c.lam << ",mu=" << c.mu << ")";
                 },
                 [&os](const TailSpecified& t) { os << t.label; },
             },
             kind_);
  return os.str();
}

double LevyModel::raw_tail(double x) const {
  return std::visit(Overloaded{
                        [x](const GammaLike& g) { return g.a * boost::math::expint(1, g.theta * x); },
                        [x](const CompoundPoissonExp& c) { return c.lam * std::exp(-c.mu * x); },
                        [x](const TailSpecified& t) { return t.tail(x); },
                    },
                    kind_);
}

double LevyModel::tail(double x) const {
  if (!(x > 0.0)) throw InvalidArgument("tail argument must be positive");
  return scale_ * raw_tail(x);
}

bool LevyModel::finite_activity() const noexcept {
  return std::holds_alternative<CompoundPoissonExp>(kind_);
}

double LevyModel::tail_at_zero() const {
  if (const auto* c = std::get_if<CompoundPoissonExp>(&kind_)) return scale_ * c->lam;
  return std::numeric_limits<double>::infinity();
}

std::optional<double> LevyModel::phi0_closed_form(double m) const {
  if (const auto* g = std::get_if<GammaLike>(&kind_)) return scale_ * g->a * std::log1p(m / g->theta);
  if (const auto* c = std::get_if<CompoundPoissonExp>(&kind_)) return scale_ * c->lam * m / (c->mu + m);
  return std::nullopt;
}

std::optional<double> LevyModel::inverse_tail_closed_form(double w) const {
  if (const auto* c = std::get_if<CompoundPoissonExp>(&kind_)) {
    const double top = scale_ * c->lam;
    if (!(w > 0.0) || w > top) return std::nullopt;
    return std::log(top / w) / c->mu;
  }
  return std::nullopt;
}

double LevyModel::small_jump_mean(double eps) const {
  if (!(eps > 0.0)) return 0.0;
  if (const auto* g = std::get_if<GammaLike>(&kind_)) {
    return scale_ * g->a * -std::expm1(-g->theta * eps) / g->theta;
  }
  if (const auto* c = std::get_if<CompoundPoissonExp>(&kind_)) {
    const double u = c->mu * eps;
    // λ ∫_0^ε μ x e^{-μx} dx = (λ/μ)(1 - e^{-u}(1+u))
    const double core = -std::expm1(-u) - u * std::exp(-u);
    return scale_ * c->lam * core / c->mu;
  }
  // By parts: ∫_0^ε x nu0(dx) = ∫_0^ε N0 dx - ε N0(ε).
  const double lo = eps * std::exp(-60.0);
  auto f = [this](double x) { return tail(x); };
  const double area = integrate_log_x(f, lo, eps, {}).value + lo * tail(lo);
  return std::max(0.0, area - eps * tail(eps));
}

double LevyModel::small_jump_hit_mass(double eps) const {
  if (!(eps > 0.0)) return 0.0;
  // ∫_0^ε (1-e^{-x}) nu0(dx) = ∫_0^ε e^{-x} N0(x) dx - (1-e^{-ε}) N0(ε).
  const double lo = eps * std::exp(-60.0);
  auto f = [this](double x) { return std::exp(-x) * tail(x); };
  const double area = integrate_log_x(f, lo, eps, {}).value + lo * tail(lo);
  return std::max(0.0, area + std::expm1(-eps) * tail(eps));
}

double LevyModel::x_split() const noexcept {
  return std::visit(Overloaded{
                        [](const GammaLike& g) { return 1.0 / g.theta; },
                        [](const CompoundPoissonExp& c) { return 1.0 / c.mu; },
                        [](const TailSpecified& t) { return t.x_min; },
                    },
                    kind_);
}

double LevyModel::x_max() const noexcept {
  return std::visit(Overloaded{
                        [](const GammaLike& g) { return 75.0 / g.theta; },
                        [](const CompoundPoissonExp& c) { return 75.0 / c.mu; },
                        [](const TailSpecified& t) { return t.x_max; },
                    },
                    kind_);
}

LevyModel fast_tail_model() {
  TailSpecified spec;
  spec.tail = [](double x) { return std::exp(std::sqrt(std::log1p(1.0 / x)) - x); };
  spec.label = "fast";
  return LevyModel::tail_specified(std::move(spec));
}

LevyModel loglog_tail_model() {
  TailSpecified spec;
  spec.tail = [](double x) { return std::log(std::numbers::e + std::log1p(1.0 / x)) * std::exp(-x); };
  spec.label = "loglog";
  return LevyModel::tail_specified(std::move(spec));
}

LevyModel make_model(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&params](const char* key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (name == "gamma") return LevyModel::gamma_like(get("a", 1.0), get("theta", 1.0)).normalized();
  if (name == "compound-poisson") {
    return LevyModel::compound_poisson_exp(get("lam", 1.0), get("mu", 1.0)).normalized();
  }
  if (name == "fast") return fast_tail_model().normalized();
  if (name == "loglog") return loglog_tail_model().normalized();
  throw InvalidArgument("unknown model '" + name + "'");
}

}  // namespace regen
