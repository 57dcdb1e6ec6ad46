#include "wtchaos/weighted_translation.hpp"

#include <cmath>

#include "wtchaos/errors.hpp"

namespace wtchaos {

WeightedTranslation::WeightedTranslation(WeightSpec w, GroupElement a, double p)
    : w_(std::move(w)), a_(a), p_(p) {
  if (!(p_ >= 1.0) || !std::isfinite(p_)) throw SpecificationError("p must be >= 1");
  check_member(w_.group(), a_);
  if (is_identity(w_.group(), a_))
    throw SpecificationError("translation element a must not be the identity");
}

std::optional<long> WeightedTranslation::integer_p() const {
  if (p_ == std::floor(p_) && p_ <= 64.0) return static_cast<long>(p_);
  return std::nullopt;
}

WeightedTranslation bilateral_shift(WeightSpec w, double p) {
  return WeightedTranslation(std::move(w), GroupElement(-1), p);
}

WeightedTranslation inverse_operator(const WeightedTranslation& t) {
  return WeightedTranslation(inverse_weight(t.weight(), t.a()), inverse(t.group(), t.a()), t.p());
}

Rational phi_exact(const WeightedTranslation& t, std::int64_t n, const GroupElement& x,
                   const ExactOptions& opts) {
  if (n < 1) throw DomainError("phi requires n >= 1");
  ExactCocycleWalker walker(t, x, opts);
  Rational out = 1;
  for (std::int64_t j = 1; j <= n; ++j) out = walker.advance();
  return out;
}

LogValue phi(const WeightedTranslation& t, std::int64_t n, const GroupElement& x) {
  if (n < 1) throw DomainError("phi requires n >= 1");
  CocycleWalker walker(t, x);
  double log_phi = 0.0;
  for (std::int64_t j = 1; j <= n; ++j) log_phi = walker.advance();
  return LogValue::from_log(log_phi);
}

CocycleWalker::CocycleWalker(const WeightedTranslation& t, GroupElement x)
    : t_(&t), cursor_(std::move(x)) {
  check_member(t.group(), cursor_);
}

double CocycleWalker::advance() {
  cursor_ = compose(t_->group(), cursor_, t_->a());
  log_phi_.add(t_->weight().log_eval(cursor_));
  ++steps_;
  return log_phi_.value();
}

ExactCocycleWalker::ExactCocycleWalker(const WeightedTranslation& t, GroupElement x,
                                       ExactOptions opts)
    : t_(&t), cursor_(std::move(x)), opts_(opts) {
  check_member(t.group(), cursor_);
}

const Rational& ExactCocycleWalker::advance() {
  cursor_ = compose(t_->group(), cursor_, t_->a());
  phi_ *= t_->weight().eval(cursor_);
  check_bits(phi_, opts_, "phi_n");
  return phi_;
}

namespace {

long require_integer_p(const WeightedTranslation& t) {
  const auto p = t.integer_p();
  if (!p) throw PreconditionError("exact norms require an integer p");
  return *p;
}

}  // namespace

Rational orbit_norm_pow_exact(const WeightedTranslation& t, const RationalVector& f,
                              std::int64_t n, const ExactOptions& opts) {
  if (n < 1) throw DomainError("orbit_norm requires n >= 1");
  if (f.empty()) throw DomainError("orbit_norm: empty support");
  const long p = require_integer_p(t);
  Rational total = 0;
  for (const auto& [x, v] : f) total += pow_int(Rational(phi_exact(t, n, x, opts) * abs(v)), p);
  check_bits(total, opts, "orbit norm");
  return total;
}

std::vector<Rational> orbit_norm_pow_series_exact(const WeightedTranslation& t,
                                                  const RationalVector& f, std::int64_t horizon,
                                                  const ExactOptions& opts) {
  if (horizon < 1) throw DomainError("orbit_norm_series requires N >= 1");
  if (f.empty()) throw DomainError("orbit_norm_series: empty support");
  const long p = require_integer_p(t);
  std::vector<ExactCocycleWalker> walkers;
  std::vector<Rational> moduli;
  for (const auto& [x, v] : f) {
    walkers.emplace_back(t, x, opts);
    moduli.push_back(abs(v));
  }
  std::vector<Rational> series;
  series.reserve(static_cast<std::size_t>(horizon));
  for (std::int64_t n = 1; n <= horizon; ++n) {
    Rational total = 0;
    for (std::size_t i = 0; i < walkers.size(); ++i)
      total += pow_int(Rational(walkers[i].advance() * moduli[i]), p);
    check_bits(total, opts, "orbit norm");
    series.push_back(std::move(total));
  }
  return series;
}

}  // namespace wtchaos
