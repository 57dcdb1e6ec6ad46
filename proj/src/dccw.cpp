#include "wtchaos/dccw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "wtchaos/errors.hpp"

namespace wtchaos {

namespace {

constexpr double kLogTieSlack = 1e-12;
constexpr std::int64_t kRecomputeEvery = 256;

struct WindowWeights {
  std::int64_t lo = 0;
  std::vector<Rational> exact;  // empty in log mode
  std::vector<double> logs;
};

WindowWeights sample_window(const WeightSpec& w, Window window, ArithmeticMode mode) {
  if (w.group().is_product()) throw SpecificationError("interval search is defined on Z only");
  WindowWeights out;
  out.lo = window.lo;
  const auto len = static_cast<std::size_t>(window.length());
  out.logs.reserve(len);
  if (mode == ArithmeticMode::Rational) out.exact.reserve(len);
  for (std::int64_t z = window.lo; z <= window.hi; ++z) {
    const GroupElement g(z);
    if (mode == ArithmeticMode::Rational) {
      out.exact.push_back(w.eval(g));
      out.logs.push_back(log_of(out.exact.back()));
    } else {
      out.logs.push_back(w.log_eval(g));
    }
  }
  return out;
}

IntervalSearchEntry search_intervals(const WindowWeights& ww, std::int64_t n, ArithmeticMode mode,
                                     const ExactOptions& opts) {
  const auto len = static_cast<std::int64_t>(ww.logs.size());
  if (n < 1) throw DomainError("interval length must be >= 1");
  if (len < n) throw DomainError("window shorter than interval length " + std::to_string(n));
  const auto idx = [](std::int64_t i) { return static_cast<std::size_t>(i); };

  IntervalSearchEntry entry;
  entry.n = n;
  std::int64_t best_offset = 0;

  if (mode == ArithmeticMode::Rational) {
    Rational product = 1;
    for (std::int64_t i = 0; i < n; ++i) product *= ww.exact[idx(i)];
    check_bits(product, opts, "interval product");
    Rational best = product;
    for (std::int64_t s = 1; s + n <= len; ++s) {
      product *= ww.exact[idx(s + n - 1)];
      product /= ww.exact[idx(s - 1)];
      check_bits(product, opts, "interval product");
      if (product > best) {
        best = product;
        best_offset = s;
      }
    }
    entry.u_exact = Rational(1 / best);
    entry.log_product = log_of(best);
  } else {
    const auto window_sum = [&](std::int64_t s) {
      CompensatedSum acc;
      for (std::int64_t i = s; i < s + n; ++i) acc.add(ww.logs[idx(i)]);
      return acc.value();
    };
    double sum = window_sum(0);
    double best = sum;
    for (std::int64_t s = 1; s + n <= len; ++s) {
      if (s % kRecomputeEvery == 0)
        sum = window_sum(s);
      else
        sum += ww.logs[idx(s + n - 1)] - ww.logs[idx(s - 1)];
      if (sum > best + kLogTieSlack * std::max(1.0, std::abs(best))) {
        best = window_sum(s);
        best_offset = s;
      }
    }
    entry.log_product = best;
  }
  entry.start = ww.lo + best_offset;
  entry.u = LogValue::from_log(-entry.log_product);
  return entry;
}

bool is_shift(const WeightedTranslation& t) {
  return !t.group().is_product() && (t.a().z == -1 || t.a().z == 1);
}

LogValue log_add(LogValue a, LogValue b) {
  const LogValue terms[] = {a, b};
  return log_sum_exp(terms);
}

bool log_leq(LogValue a, LogValue b) {
  if (a.is_zero()) return true;
  if (b.is_zero()) return false;
  return a.log_magnitude <= b.log_magnitude + kLogTieSlack * std::max(1.0, std::abs(b.log_magnitude));
}

}  // namespace

std::string to_string(SummabilityVerdict v) {
  switch (v) {
    case SummabilityVerdict::SummableEvidence: return "summable_evidence";
    case SummabilityVerdict::DivergingEvidence: return "diverging_evidence";
    case SummabilityVerdict::Inconclusive: break;
  }
  return "inconclusive";
}

IntervalSearchEntry best_interval(const WeightSpec& w, std::int64_t n, Window window,
                                  ArithmeticMode mode, const ExactOptions& opts) {
  if (window.length() < n) throw DomainError("window shorter than interval length");
  return search_intervals(sample_window(w, window, mode), n, mode, opts);
}

std::map<std::int64_t, GroupElement> ConditionIIReport::maximisers() const {
  std::map<std::int64_t, GroupElement> out;
  for (const auto& e : entries) out.emplace(e.n, e.g);
  return out;
}

std::optional<CorollaryWitness> corollary_witness(const WeightSpec& w, std::int64_t horizon,
                                                  Window window) {
  std::set<Rational> values;
  for (std::int64_t z = window.lo; z <= window.hi; ++z) values.insert(w.eval(GroupElement(z)));
  for (auto it = values.rbegin(); it != values.rend(); ++it) {
    const Rational& level = *it;
    if (level <= 1) break;
    Rational floor = 1;
    if (auto below = std::next(it); below != values.rend() && *below > floor) floor = *below;
    const Rational threshold = (level + floor) / 2;
    auto lengths = run_length_profile(w, threshold, window);
    if (!lengths.empty() && lengths.back() >= horizon)
      return CorollaryWitness{level, threshold, std::move(lengths)};
  }
  return std::nullopt;
}

ConditionIIReport condition_ii_diagnostic(const WeightedTranslation& t, std::int64_t horizon,
                                          Window window, std::optional<IndexSet> b,
                                          ArithmeticMode mode, const ExactOptions& opts) {
  if (horizon < 1) throw DomainError("condition (ii) requires N >= 1");
  if (window.hi < window.lo) throw DomainError("empty search window");
  ConditionIIReport report;
  report.b = b ? *b : IndexSet::full(horizon);
  report.window = window;
  report.exact = mode == ArithmeticMode::Rational;
  const IndexSet members = report.b.restricted(1, horizon);
  if (members.empty()) throw DomainError("condition (ii): B has no members in [1, N]");

  if (is_shift(t)) {
    const WindowWeights ww = sample_window(t.weight(), window, mode);
    for (const auto n : members.members()) {
      const IntervalSearchEntry best = search_intervals(ww, n, mode, opts);
      ConditionIIEntry e;
      e.n = n;
      e.interval_start = best.start;
      e.g = GroupElement(t.a().z == -1 ? best.start + n : best.start - 1);
      e.u = best.u;
      e.u_exact = best.u_exact;
      report.entries.push_back(std::move(e));
    }
  } else {
    // General a: maximise phi_n(x) over every x whose z-coordinate lies in the window.
    std::vector<GroupElement> points;
    for (std::int64_t z = window.lo; z <= window.hi; ++z) {
      if (t.group().is_product())
        for (std::int64_t c = 0; c < t.group().modulus; ++c) points.emplace_back(z, c);
      else
        points.emplace_back(z);
    }
    std::vector<CocycleWalker> walkers;
    std::vector<ExactCocycleWalker> exact_walkers;
    for (const auto& x : points) {
      if (mode == ArithmeticMode::Rational)
        exact_walkers.emplace_back(t, x, opts);
      else
        walkers.emplace_back(t, x);
    }
    for (std::int64_t n = 1; n <= horizon; ++n) {
      std::size_t best_i = 0;
      Rational best_exact;
      double best_log = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (mode == ArithmeticMode::Rational) {
          const Rational& v = exact_walkers[i].advance();
          if (i == 0 || v > best_exact) {
            best_exact = v;
            best_i = i;
          }
        } else {
          const double v = walkers[i].advance();
          if (i == 0 || v > best_log + kLogTieSlack * std::max(1.0, std::abs(best_log))) {
            best_log = v;
            best_i = i;
          }
        }
      }
      if (!members.contains(n)) continue;
      ConditionIIEntry e;
      e.n = n;
      e.g = points[best_i];
      if (mode == ArithmeticMode::Rational) {
        e.u_exact = Rational(1 / best_exact);
        e.u = LogValue::from_rational(*e.u_exact);
      } else {
        e.u = LogValue::from_log(-best_log);
      }
      report.entries.push_back(std::move(e));
    }
  }

  Rational exact_sum = 0;
  LogValue log_sum = LogValue::zero();
  for (auto& e : report.entries) {
    log_sum = log_add(log_sum, e.u);
    e.partial_sum = log_sum;
    if (e.u_exact) {
      exact_sum += *e.u_exact;
      check_bits(exact_sum, opts, "condition (ii) partial sum");
      e.partial_sum_exact = exact_sum;
    }
  }

  report.tail_start = (horizon + 1) / 2;
  double ratio = std::numeric_limits<double>::quiet_NaN();
  const ConditionIIEntry* first_tail = nullptr;
  bool bounded_below = true;
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto& e = report.entries[i];
    if (e.n < report.tail_start) continue;
    if (!first_tail) first_tail = &e;
    if (e.u < first_tail->u) bounded_below = false;
    if (i + 1 < report.entries.size()) {
      const auto& next = report.entries[i + 1];
      const double r = (e.u_exact && next.u_exact)
                           ? to_double(Rational(*next.u_exact / *e.u_exact))
                           : std::exp(next.u.log_magnitude - e.u.log_magnitude);
      ratio = std::isnan(ratio) ? r : std::max(ratio, r);
    }
  }
  report.decay_ratio = ratio;
  if (!std::isnan(ratio) && ratio < 1.0)
    report.verdict = SummabilityVerdict::SummableEvidence;
  else if (first_tail && !std::isnan(ratio) && bounded_below)
    report.verdict = SummabilityVerdict::DivergingEvidence;
  else
    report.verdict = SummabilityVerdict::Inconclusive;

  if (is_shift(t)) report.corollary_witness = corollary_witness(t.weight(), horizon, window);
  return report;
}

ConditionIReport condition_i_diagnostic(const WeightedTranslation& t, const ElementSet& k,
                                        std::int64_t horizon, const std::vector<double>& deltas,
                                        double theta) {
  if (k.empty()) throw PreconditionError("condition (i) requires a nonempty set K");
  if (horizon < 1) throw DomainError("condition (i) requires N >= 1");
  ConditionIReport report;
  report.k = k;
  report.tail_fraction = theta;
  report.s = orbit_norm_series(t, RealVector::indicator_of(k), horizon);
  for (const double delta : deltas) {
    if (!(delta > 0.0)) throw DomainError("delta grid entries must be positive");
    const double log_delta = std::log(delta);
    ConditionIDelta entry;
    entry.delta = delta;
    entry.a = IndexSet::from_predicate(horizon, [&](std::int64_t n) {
      return report.s[static_cast<std::size_t>(n - 1)].log_or_neg_inf() < log_delta;
    });
    entry.density = density_estimate(entry.a, theta);
    if (entry.density.upper_est >= 1.0 - theta) report.full_density_evidence = true;
    report.per_delta.push_back(std::move(entry));
  }
  return report;
}

SynthesisPlan build_synthesis_plan(const WeightedTranslation& t, const IndexSet& b,
                                   const std::map<std::int64_t, GroupElement>& g,
                                   std::int64_t truncation, ArithmeticMode mode,
                                   const ExactOptions& opts) {
  if (truncation < 1) throw DomainError("truncation horizon must be >= 1");
  const IndexSet members = b.restricted(1, truncation);
  if (members.empty()) throw DomainError("synthesis plan: B has no members in [1, N]");

  SynthesisPlan plan;
  plan.b = b;
  plan.truncation = truncation;
  plan.exact = mode == ArithmeticMode::Rational;
  plan.truncation_note = "r_n = sum of a_i over i in B with n <= i <= " +
                         std::to_string(truncation) + " (tail beyond the horizon dropped)";

  for (const auto n : members.members()) {
    const auto it = g.find(n);
    if (it == g.end())
      throw PreconditionError("synthesis plan: no point g_n for n = " + std::to_string(n));
    PlanEntry e;
    e.n = n;
    e.g = it->second;
    if (plan.exact) {
      e.phi_exact = phi_exact(t, n, e.g, opts);
      e.a_exact = Rational(1 / *e.phi_exact);
      e.phi = LogValue::from_rational(*e.phi_exact);
    } else {
      e.phi = phi(t, n, e.g);
    }
    e.a = LogValue::from_log(-e.phi.log_magnitude);
    plan.entries.push_back(std::move(e));
  }

  Rational exact_tail = 0;
  LogValue log_tail = LogValue::zero();
  for (auto it = plan.entries.rbegin(); it != plan.entries.rend(); ++it) {
    if (plan.exact) {
      exact_tail += *it->a_exact;
      check_bits(exact_tail, opts, "tail sum r_n");
      it->r_exact = exact_tail;
      it->c_squared_exact = Rational(1 / (exact_tail * *it->phi_exact * *it->phi_exact));
      check_bits(*it->c_squared_exact, opts, "c_n^2");
      it->r = LogValue::from_rational(exact_tail);
    } else {
      log_tail = log_add(log_tail, it->a);
      it->r = log_tail;
    }
    it->c_phi = LogValue::from_log(-0.5 * it->r.log_magnitude);
    it->c = LogValue::from_log(-0.5 * it->r.log_magnitude - it->phi.log_magnitude);
  }
  return plan;
}

PlanInvariantReport check_plan_invariants(const SynthesisPlan& plan) {
  PlanInvariantReport report;
  report.exact = plan.exact;
  std::vector<LogValue> cs, as;
  for (const auto& e : plan.entries) {
    cs.push_back(e.c);
    as.push_back(e.a);
  }
  report.coefficient_sum = log_sum_exp(cs);
  report.cauchy_schwarz_bound =
      LogValue::from_value(2.0) * pow(log_sum_exp(as), 0.5);

  if (plan.exact) {
    report.c_phi_identity = std::all_of(plan.entries.begin(), plan.entries.end(), [](const auto& e) {
      return *e.c_squared_exact * *e.phi_exact * *e.phi_exact * *e.r_exact == 1;
    });
    report.c_phi_nondecreasing = true;
    for (std::size_t i = 1; i < plan.entries.size(); ++i)
      if (*plan.entries[i].r_exact > *plan.entries[i - 1].r_exact)
        report.c_phi_nondecreasing = false;

    Rational a_sum = 0;
    for (const auto& e : plan.entries) a_sum += *e.a_exact;
    report.cauchy_schwarz = false;
    for (unsigned bits = 64; bits <= 4096; bits *= 2) {
      Rational lhs_lo = 0, lhs_hi = 0;
      for (const auto& e : plan.entries) {
        const auto [lo, hi] = sqrt_enclosure(*e.c_squared_exact, bits);
        lhs_lo += lo;
        lhs_hi += hi;
      }
      const auto [rhs_lo, rhs_hi] = sqrt_enclosure(a_sum, bits);
      if (lhs_hi <= 2 * rhs_lo) {
        report.cauchy_schwarz = true;
        break;
      }
      if (lhs_lo > 2 * rhs_hi) break;
    }
  } else {
    report.c_phi_identity = std::all_of(plan.entries.begin(), plan.entries.end(), [](const auto& e) {
      return relative_difference(e.c * e.phi, e.c_phi) <= 1e-12;
    });
    report.c_phi_nondecreasing = true;
    for (std::size_t i = 1; i < plan.entries.size(); ++i)
      if (!log_leq(plan.entries[i - 1].c_phi, plan.entries[i].c_phi))
        report.c_phi_nondecreasing = false;
    report.cauchy_schwarz = log_leq(report.coefficient_sum, report.cauchy_schwarz_bound);
  }
  return report;
}

SynthesizedVector synthesize_vector(const SynthesisPlan& plan, double p) {
  if (plan.entries.empty()) throw PreconditionError("empty synthesis plan");
  SynthesizedVector out;
  out.plan = plan;
  ElementSet seen;
  RationalVector squared;
  std::vector<LogValue> cs;
  for (const auto& e : plan.entries) {
    if (!seen.insert(e.g).second) out.collisions.push_back(e.g);
    out.y.add(e.g, std::complex<double>(e.c.value(), 0.0));
    if (plan.exact) squared.add(e.g, *e.c_squared_exact);
    cs.push_back(e.c);
  }
  if (plan.exact && out.collisions.empty()) out.squared_exact = std::move(squared);
  out.norm = lp_norm(out.y, p);
  out.coefficient_sum = log_sum_exp(cs);
  out.norm_bound_holds = log_leq(out.norm, out.coefficient_sum);
  return out;
}

DccVerification verify_dcc(const WeightedTranslation& t, const SynthesizedVector& y,
                           const std::vector<ElementSet>& x_basis, const IndexSet& a,
                           std::int64_t horizon, double unbounded_threshold, ArithmeticMode mode,
                           const ExactOptions& opts) {
  if (horizon < 1) throw DomainError("verify_dcc requires N >= 1");
  DccVerification out;
  out.unbounded_threshold = unbounded_threshold;

  const std::int64_t tail = (horizon + 1) / 2;
  for (const auto& k : x_basis) {
    if (k.empty()) throw PreconditionError("verify_dcc: empty basis set");
    DecayEntry d;
    d.k = k;
    const auto series = orbit_norm_series(t, RealVector::indicator_of(k), horizon);
    for (const auto n : a.members()) {
      if (n < tail || n > horizon) continue;
      const LogValue v = series[static_cast<std::size_t>(n - 1)];
      if (!d.max_tail_norm || v > *d.max_tail_norm) d.max_tail_norm = v;
      ++d.tail_count;
    }
    out.decay.push_back(std::move(d));
  }

  const auto p_int = t.integer_p();
  const bool exact = mode == ArithmeticMode::Rational && y.plan.exact && y.squared_exact &&
                     p_int && *p_int % 2 == 0;
  const auto norms = orbit_norm_series(t, y.y, horizon);

  std::vector<ExactCocycleWalker> walkers;
  std::vector<Rational> weights;  // |y(x)|^p
  if (exact) {
    for (const auto& [x, sq] : *y.squared_exact) {
      walkers.emplace_back(t, x, opts);
      weights.push_back(pow_int(sq, *p_int / 2));
    }
  }

  out.all_lower_bounds_pass = true;
  out.max_bound = LogValue::zero();
  auto entry = y.plan.entries.begin();
  for (std::int64_t n = 1; n <= horizon; ++n) {
    Rational lhs = 0;
    if (exact) {
      for (std::size_t i = 0; i < walkers.size(); ++i)
        lhs += pow_int(walkers[i].advance(), *p_int) * weights[i];
      check_bits(lhs, opts, "||T^n y||_p^p");
    }
    if (entry == y.plan.entries.end() || entry->n != n) continue;
    LowerBoundEntry lb;
    lb.n = n;
    lb.norm = norms[static_cast<std::size_t>(n - 1)];
    lb.bound = entry->c_phi;
    lb.exact = exact;
    if (exact) {
      const Rational bound_sq = *entry->c_squared_exact * *entry->phi_exact * *entry->phi_exact;
      lb.passed = lhs >= pow_int(bound_sq, *p_int / 2);
    } else {
      lb.passed = log_leq(lb.bound, lb.norm);
    }
    out.all_lower_bounds_pass = out.all_lower_bounds_pass && lb.passed;
    if (lb.bound > out.max_bound) out.max_bound = lb.bound;
    out.lower_bounds.push_back(lb);
    ++entry;
  }
  out.divergent_bound_evidence =
      !out.max_bound.is_zero() && out.max_bound.value() >= unbounded_threshold;
  return out;
}

}  // namespace wtchaos
