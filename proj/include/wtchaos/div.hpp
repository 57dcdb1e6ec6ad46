#pragma once

// Finite-horizon diagnostics for distributionally irregular vectors: a vector whose
// orbit comes close to 0 along one full-upper-density set and is unbounded along
// another. Membership is a limit statement, so everything here reports density
// estimates and sandwich/containment checks at a fixed horizon.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wtchaos/density.hpp"
#include "wtchaos/log_value.hpp"
#include "wtchaos/sparse_vector.hpp"
#include "wtchaos/weighted_translation.hpp"
#include "wtchaos/weights.hpp"

namespace wtchaos {

struct IrregularityEvidence {
  std::vector<LogValue> norms;  // ||T^n y||_p, n = 1..N
  double near_zero_threshold = 0.0;   // delta
  double unbounded_threshold = 0.0;   // Lambda
  IndexSet near_zero;                 // {n : ||T^n y|| < delta}
  IndexSet unbounded;                 // {n : ||T^n y|| > Lambda}
  DensityEstimate near_zero_density;
  DensityEstimate unbounded_density;
  LogValue max_norm;
};

IrregularityEvidence evidence_from_norms(std::vector<LogValue> norms, double delta, double lambda,
                                         double theta = kDefaultTailFraction);

template <class Scalar>
IrregularityEvidence irregularity_evidence(const WeightedTranslation& t,
                                           const SparseVector<Scalar>& y, std::int64_t horizon,
                                           double delta, double lambda,
                                           double theta = kDefaultTailFraction) {
  if (y.empty()) throw DomainError("irregularity_evidence: zero vector");
  return evidence_from_norms(orbit_norm_series(t, y, horizon), delta, lambda, theta);
}

/// Orbit norms of y and |y| agree: exactly for rationals, to 1e-12 otherwise.
template <class Scalar>
bool modulus_check(const WeightedTranslation& t, const SparseVector<Scalar>& y,
                   std::int64_t horizon) {
  if (y.empty()) throw DomainError("modulus_check: empty support");
  const SparseVector<Scalar> m = abs(y);
  if constexpr (std::is_same_v<Scalar, Rational>) {
    if (t.integer_p())
      return orbit_norm_pow_series_exact(t, y, horizon) == orbit_norm_pow_series_exact(t, m, horizon);
  }
  const auto a = orbit_norm_series(t, y, horizon);
  const auto b = orbit_norm_series(t, m, horizon);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (relative_difference(a[i], b[i]) > 1e-12) return false;
  return true;
}

/// Positive combination sum_j c_j |y_j|.
template <class Scalar>
SparseVector<Scalar> cone_combine(const std::vector<SparseVector<Scalar>>& vectors,
                                  const std::vector<Scalar>& coefficients) {
  if (vectors.size() != coefficients.size())
    throw DomainError("cone_combine: one coefficient per vector");
  SparseVector<Scalar> out;
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    const Scalar& c = coefficients[j];
    if (!ScalarTraits<Scalar>::is_nonnegative_real(c) || ScalarTraits<Scalar>::is_zero(c))
      throw DomainError("cone_combine: coefficients must be strictly positive");
    for (const auto& [g, v] : vectors[j]) out.add(g, Scalar(c * ScalarTraits<Scalar>::modulus(v)));
  }
  return out;
}

/// ||T^n (sum c_j |y_j|)|| >= c_j ||T^n |y_j| || for every j and n = 1..N.
template <class Scalar>
bool cone_domination_check(const WeightedTranslation& t,
                           const std::vector<SparseVector<Scalar>>& vectors,
                           const std::vector<Scalar>& coefficients,
                           const SparseVector<Scalar>& combined, std::int64_t horizon) {
  const auto total = orbit_norm_series(t, combined, horizon);
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].empty()) continue;
    const auto part = orbit_norm_series(t, abs(vectors[j]), horizon);
    const LogValue c = ScalarTraits<Scalar>::log_modulus(coefficients[j]);
    for (std::size_t n = 0; n < part.size(); ++n) {
      const LogValue lower = c * part[n];
      if (total[n].log_magnitude <
          lower.log_magnitude - 1e-12 * std::max(1.0, std::abs(lower.log_magnitude)))
        return false;
    }
  }
  return true;
}

template <class Scalar>
struct RealOf {
  using type = double;
};
template <>
struct RealOf<Rational> {
  using type = Rational;
};

template <class Real>
struct EquivalenceWitness {
  Real c1;
  Real c2;
};

/// c1 = min |y|/|z|, c2 = max |y|/|z| over the common support; absent unless the supports agree.
template <class Scalar>
auto equivalence_member(const SparseVector<Scalar>& y, const SparseVector<Scalar>& z)
    -> std::optional<EquivalenceWitness<typename RealOf<Scalar>::type>> {
  using Real = typename RealOf<Scalar>::type;
  if (y.empty() || y.support() != z.support()) return std::nullopt;
  std::optional<Real> lo, hi;
  for (const auto& [g, v] : y) {
    Real ratio;
    if constexpr (std::is_same_v<Scalar, Rational>)
      ratio = abs(v) / abs(z.get(g));
    else
      ratio = std::abs(v) / std::abs(z.get(g));
    if (!lo || ratio < *lo) lo = ratio;
    if (!hi || ratio > *hi) hi = ratio;
  }
  return EquivalenceWitness<Real>{*lo, *hi};
}

/// y1 = y (2 - chi_K) / 3 and y2 = y (1 + chi_K) / 3; y must be nonnegative and
/// K a nonempty proper subset of its support.
template <class Scalar>
std::pair<SparseVector<Scalar>, SparseVector<Scalar>> split_vector(const SparseVector<Scalar>& y,
                                                                   const ElementSet& k) {
  for (const auto& [g, v] : y)
    if (!ScalarTraits<Scalar>::is_nonnegative_real(v))
      throw PreconditionError("split_vector: y must be entrywise nonnegative");
  if (k.empty()) throw PreconditionError("split_vector: K must be nonempty");
  const ElementSet support = y.support();
  for (const auto& g : k)
    if (!support.count(g)) throw PreconditionError("split_vector: K must lie inside the support");
  if (k.size() == support.size())
    throw PreconditionError("split_vector: K must be a proper subset of the support");

  SparseVector<Scalar> y1, y2;
  const Scalar three(3);
  for (const auto& [g, v] : y) {
    const bool in_k = k.count(g) > 0;
    y1.set(g, Scalar(v * Scalar(in_k ? 1 : 2) / three));
    y2.set(g, Scalar(v * Scalar(in_k ? 2 : 1) / three));
  }
  return {std::move(y1), std::move(y2)};
}

/// Translation by a group element without weights: (shifted)(x * shift) = f(x).
template <class Scalar>
SparseVector<Scalar> translate_vector(const GroupSpec& group, const SparseVector<Scalar>& f,
                                      const GroupElement& shift) {
  SparseVector<Scalar> out;
  for (const auto& [x, v] : f) out.set(compose(group, x, shift), v);
  return out;
}

/// {n > |m| : ||T^n(T_{a^m} y)|| > Lambda M^{2|m|}} is contained in {n : ||T^n y|| > Lambda}.
bool translate_containment_check(const WeightedTranslation& t, const ComplexVector& y,
                                 std::int64_t m, std::int64_t horizon, double lambda);

struct MirrorReport {
  std::int64_t horizon = 0;
  double p = 2.0;
  std::vector<std::int64_t> samples;
  double max_deviation = 0.0;   // max |phi_n(g,0) phi_n(g,1) - 1|
  bool reciprocity_holds = false;
  bool mixed_dominates = false;  // ||T^n(chi_(g,0) + chi_(g,1))|| >= max of the parts
  IrregularityEvidence component0;  // orbit of chi_(g0, 0)
  IrregularityEvidence component1;  // orbit of chi_(g0, 1)
};

/// Builds the mirror weight on Z x Z_2 with a = (-1, 0) and checks that the two
/// cyclic copies have reciprocal orbit norms.
MirrorReport mirror_two_component_check(const WeightSpec& base, std::int64_t horizon,
                                        const std::vector<std::int64_t>& samples, double p = 2.0,
                                        double delta = 0.1, double lambda = 1e3,
                                        double theta = kDefaultTailFraction,
                                        double tolerance = 1e-10);

}  // namespace wtchaos
