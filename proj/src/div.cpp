#include "wtchaos/div.hpp"

#include <cmath>
#include <cstdlib>

#include "wtchaos/errors.hpp"

namespace wtchaos {

IrregularityEvidence evidence_from_norms(std::vector<LogValue> norms, double delta, double lambda,
                                         double theta) {
  if (norms.empty()) throw DomainError("irregularity evidence needs N >= 1");
  if (!(delta > 0.0) || !(lambda > 0.0)) throw DomainError("thresholds must be positive");
  const auto horizon = static_cast<std::int64_t>(norms.size());
  const double log_delta = std::log(delta);
  const double log_lambda = std::log(lambda);
  IrregularityEvidence ev;
  ev.near_zero_threshold = delta;
  ev.unbounded_threshold = lambda;
  ev.near_zero = IndexSet::from_predicate(horizon, [&](std::int64_t n) {
    return norms[static_cast<std::size_t>(n - 1)].log_or_neg_inf() < log_delta;
  });
  ev.unbounded = IndexSet::from_predicate(horizon, [&](std::int64_t n) {
    return norms[static_cast<std::size_t>(n - 1)].log_or_neg_inf() > log_lambda;
  });
  ev.near_zero_density = density_estimate(ev.near_zero, theta);
  ev.unbounded_density = density_estimate(ev.unbounded, theta);
  ev.max_norm = LogValue::zero();
  for (const auto& v : norms)
    if (v > ev.max_norm) ev.max_norm = v;
  ev.norms = std::move(norms);
  return ev;
}

bool translate_containment_check(const WeightedTranslation& t, const ComplexVector& y,
                                 std::int64_t m, std::int64_t horizon, double lambda) {
  const auto inv = invertibility_check(t.weight());
  if (!inv.invertible) throw PreconditionError("translate check needs an invertible weight");
  const ComplexVector shifted = translate_vector(t.group(), y, power(t.group(), t.a(), m));
  const auto base = orbit_norm_series(t, y, horizon);
  const auto moved = orbit_norm_series(t, shifted, horizon);
  const double log_scaled =
      std::log(lambda) + 2.0 * static_cast<double>(std::llabs(m)) * log_of(inv.bound_m);
  const double log_lambda = std::log(lambda);
  for (std::int64_t n = std::llabs(m) + 1; n <= horizon; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    if (moved[i].log_or_neg_inf() > log_scaled && !(base[i].log_or_neg_inf() > log_lambda))
      return false;
  }
  return true;
}

MirrorReport mirror_two_component_check(const WeightSpec& base, std::int64_t horizon,
                                        const std::vector<std::int64_t>& samples, double p,
                                        double delta, double lambda, double theta,
                                        double tolerance) {
  if (!invertibility_check(base).invertible)
    throw PreconditionError("mirror check needs an invertible base weight");
  if (samples.empty()) throw DomainError("mirror check needs at least one sample point");
  const WeightedTranslation t(mirror_product_weight(base, 2), GroupElement(-1, 0), p);

  MirrorReport report;
  report.horizon = horizon;
  report.p = p;
  report.samples = samples;
  report.mixed_dominates = true;
  for (const auto g : samples) {
    const auto upper = RealVector::indicator(GroupElement(g, 0));
    const auto lower = RealVector::indicator(GroupElement(g, 1));
    const auto s0 = orbit_norm_series(t, upper, horizon);
    const auto s1 = orbit_norm_series(t, lower, horizon);
    const auto mixed = orbit_norm_series(t, upper + lower, horizon);
    for (std::size_t i = 0; i < s0.size(); ++i) {
      const double dev = std::abs(std::expm1(s0[i].log_magnitude + s1[i].log_magnitude));
      report.max_deviation = std::max(report.max_deviation, dev);
      const double top = std::max(s0[i].log_magnitude, s1[i].log_magnitude);
      if (mixed[i].log_magnitude < top - 1e-12 * std::max(1.0, std::abs(top)))
        report.mixed_dominates = false;
    }
  }
  report.reciprocity_holds = report.max_deviation <= tolerance;
  const std::int64_t g0 = samples.front();
  report.component0 =
      irregularity_evidence(t, RealVector::indicator(GroupElement(g0, 0)), horizon, delta, lambda, theta);
  report.component1 =
      irregularity_evidence(t, RealVector::indicator(GroupElement(g0, 1)), horizon, delta, lambda, theta);
  return report;
}

}  // namespace wtchaos
