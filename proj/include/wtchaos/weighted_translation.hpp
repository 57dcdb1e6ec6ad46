#pragma once

// Weighted translations T_{a,w} f = w * (f translated by a) on l^p(G), with G discrete.
//
// (T f)(x) = w(x) f(x a^{-1}), so T^n = T_{a^n} M_{phi_n} with the cocycle
//   phi_n(x) = prod_{j=1..n} w(x a^j)
// and ||T^n f||_p^p = sum_x phi_n(x)^p |f(x)|^p. For the bilateral shift (a = -1 on Z)
// phi_n(x) multiplies the weights on the window {x-n, ..., x-1}.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "wtchaos/group.hpp"
#include "wtchaos/log_value.hpp"
#include "wtchaos/rational.hpp"
#include "wtchaos/sparse_vector.hpp"
#include "wtchaos/weights.hpp"

namespace wtchaos {

enum class ArithmeticMode { Rational, Log };

class WeightedTranslation {
 public:
  /// Requires p >= 1, a in the weight's group and a != identity.
  WeightedTranslation(WeightSpec w, GroupElement a, double p);

  const GroupSpec& group() const { return w_.group(); }
  const GroupElement& a() const { return a_; }
  const WeightSpec& weight() const { return w_; }
  double p() const { return p_; }

  /// p as an integer when it is one; exact norms need it.
  std::optional<long> integer_p() const;

 private:
  WeightSpec w_;
  GroupElement a_;
  double p_;
};

/// B_w = T_{-1,w} on l^p(Z).
WeightedTranslation bilateral_shift(WeightSpec w, double p);

/// S_{a,w} = T_{a^{-1}, 1/w(. a)}; throws PreconditionError if w is not invertible.
WeightedTranslation inverse_operator(const WeightedTranslation& t);

/// Exact phi_n(x). Throws NumericRangeError past the bit cap.
Rational phi_exact(const WeightedTranslation& t, std::int64_t n, const GroupElement& x,
                   const ExactOptions& opts = {});

/// phi_n(x) as a compensated sum of logs.
LogValue phi(const WeightedTranslation& t, std::int64_t n, const GroupElement& x);

/// Running log phi_n(x) for n = 1..horizon, advanced one factor at a time.
class CocycleWalker {
 public:
  CocycleWalker(const WeightedTranslation& t, GroupElement x);
  /// Multiplies in the next factor and returns log phi_n(x) for the new n.
  double advance();
  std::int64_t steps() const { return steps_; }

 private:
  const WeightedTranslation* t_;
  GroupElement cursor_;
  CompensatedSum log_phi_;
  std::int64_t steps_ = 0;
};

/// Exact running phi_n(x).
class ExactCocycleWalker {
 public:
  ExactCocycleWalker(const WeightedTranslation& t, GroupElement x, ExactOptions opts = {});
  const Rational& advance();

 private:
  const WeightedTranslation* t_;
  GroupElement cursor_;
  Rational phi_ = 1;
  ExactOptions opts_;
};

namespace detail {

inline void require_nonnegative_power(std::int64_t n) {
  if (n < 0) throw DomainError("power must be nonnegative");
}

template <class Scalar>
Scalar cocycle_factor(const WeightedTranslation& t, std::int64_t n, const GroupElement& x,
                      const ExactOptions& opts) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return phi_exact(t, n, x, opts);
  } else {
    return Scalar(phi(t, n, x).value());
  }
}

}  // namespace detail

/// (T^n f)(x a^n) = phi_n(x) f(x). Exact for RationalVector.
template <class Scalar>
SparseVector<Scalar> apply_power(const WeightedTranslation& t, const SparseVector<Scalar>& f,
                                 std::int64_t n, const ExactOptions& opts = {}) {
  detail::require_nonnegative_power(n);
  if (n == 0) return f;
  const GroupElement shift = power(t.group(), t.a(), n);
  SparseVector<Scalar> out;
  for (const auto& [x, v] : f) {
    const Scalar factor = detail::cocycle_factor<Scalar>(t, n, x, opts);
    out.add(compose(t.group(), x, shift), Scalar(factor * v));
  }
  return out;
}

/// S f with S the inverse operator; rejects the zero vector.
template <class Scalar>
SparseVector<Scalar> apply_inverse(const WeightedTranslation& t, const SparseVector<Scalar>& f,
                                   const ExactOptions& opts = {}) {
  if (f.empty()) throw DomainError("apply_inverse: zero vector");
  return apply_power(inverse_operator(t), f, 1, opts);
}

/// M_w f = w f pointwise.
template <class Scalar>
SparseVector<Scalar> multiply(const WeightSpec& w, const SparseVector<Scalar>& f) {
  SparseVector<Scalar> out;
  for (const auto& [x, v] : f) {
    if constexpr (std::is_same_v<Scalar, Rational>)
      out.set(x, Rational(w.eval(x) * v));
    else
      out.set(x, Scalar(std::exp(w.log_eval(x)) * v));
  }
  return out;
}

/// ||T^n f||_p without materialising T^n f.
template <class Scalar>
LogValue orbit_norm(const WeightedTranslation& t, const SparseVector<Scalar>& f, std::int64_t n) {
  if (n < 1) throw DomainError("orbit_norm requires n >= 1");
  if (f.empty()) throw DomainError("orbit_norm: empty support");
  std::vector<LogValue> terms;
  terms.reserve(f.size());
  for (const auto& [x, v] : f)
    terms.push_back(pow(phi(t, n, x) * ScalarTraits<Scalar>::log_modulus(v), t.p()));
  return pow(log_sum_exp(terms), 1.0 / t.p());
}

/// ||T^n f||_p for n = 1..horizon.
template <class Scalar>
std::vector<LogValue> orbit_norm_series(const WeightedTranslation& t,
                                        const SparseVector<Scalar>& f, std::int64_t horizon) {
  if (horizon < 1) throw DomainError("orbit_norm_series requires N >= 1");
  if (f.empty()) throw DomainError("orbit_norm_series: empty support");
  std::vector<CocycleWalker> walkers;
  std::vector<LogValue> log_f;
  for (const auto& [x, v] : f) {
    walkers.emplace_back(t, x);
    log_f.push_back(ScalarTraits<Scalar>::log_modulus(v));
  }
  std::vector<LogValue> series;
  series.reserve(static_cast<std::size_t>(horizon));
  std::vector<LogValue> terms(walkers.size());
  for (std::int64_t n = 1; n <= horizon; ++n) {
    for (std::size_t i = 0; i < walkers.size(); ++i)
      terms[i] = pow(LogValue::from_log(walkers[i].advance()) * log_f[i], t.p());
    series.push_back(pow(log_sum_exp(terms), 1.0 / t.p()));
  }
  return series;
}

/// Exact ||T^n f||_p^p; requires integer p.
Rational orbit_norm_pow_exact(const WeightedTranslation& t, const RationalVector& f,
                              std::int64_t n, const ExactOptions& opts = {});

/// Exact ||T^n f||_p^p for n = 1..horizon; requires integer p.
std::vector<Rational> orbit_norm_pow_series_exact(const WeightedTranslation& t,
                                                  const RationalVector& f, std::int64_t horizon,
                                                  const ExactOptions& opts = {});

}  // namespace wtchaos
