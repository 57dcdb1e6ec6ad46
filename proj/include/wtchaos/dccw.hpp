#pragma once

// Checking the weighted-translation chaos criterion (DCCW) at a finite horizon and
// synthesising the vector whose orbit is unbounded along B.
//
//   (i)  ||phi_n|_{K}||_p -> 0 along a set A of full upper density;
//   (ii) sum_{n in B} lambda(K_n)^{1/p} / ||phi_n|_{K_n}||_p < inf with dens(B) > 0.
//
// On a discrete group the sets K_n are singletons {g_n}, so (ii) reads
// sum_{n in B} 1 / phi_n(g_n) < inf, and for the bilateral shift 1 / phi_n(g_n) is the
// product of w^{-1} over an interval of length n. All verdicts are finite-horizon evidence.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wtchaos/density.hpp"
#include "wtchaos/log_value.hpp"
#include "wtchaos/rational.hpp"
#include "wtchaos/sparse_vector.hpp"
#include "wtchaos/weighted_translation.hpp"
#include "wtchaos/weights.hpp"

namespace wtchaos {

struct IntervalSearchEntry {
  std::int64_t n = 0;
  std::int64_t start = 0;  // the interval is [start, start + n)
  double log_product = 0.0;
  LogValue u;  // prod over the interval of 1/w
  std::optional<Rational> u_exact;
};

/// Length-n interval inside the window maximising the product of w; smallest start on ties.
IntervalSearchEntry best_interval(const WeightSpec& w, std::int64_t n, Window window,
                                  ArithmeticMode mode = ArithmeticMode::Rational,
                                  const ExactOptions& opts = {});

enum class SummabilityVerdict { SummableEvidence, DivergingEvidence, Inconclusive };
std::string to_string(SummabilityVerdict v);

struct CorollaryWitness {
  Rational level;             // w >= level on every run found
  Rational strict_threshold;  // C > 1 with {w > C} = {w >= level} inside the window
  std::vector<std::int64_t> run_lengths;
};

struct ConditionIIEntry {
  std::int64_t n = 0;
  GroupElement g;                       // maximiser of phi_n over the window
  std::optional<std::int64_t> interval_start;  // shift operators only
  LogValue u;                           // 1 / phi_n(g)
  std::optional<Rational> u_exact;
  LogValue partial_sum;
  std::optional<Rational> partial_sum_exact;
};

struct ConditionIIReport {
  IndexSet b;
  Window window;
  std::vector<ConditionIIEntry> entries;
  std::int64_t tail_start = 1;  // ceil(N / 2)
  double decay_ratio = 0.0;     // max over the tail of u_{next} / u_n; NaN with < 2 tail terms
  SummabilityVerdict verdict = SummabilityVerdict::Inconclusive;
  std::optional<CorollaryWitness> corollary_witness;
  bool exact = false;

  std::map<std::int64_t, GroupElement> maximisers() const;
};

/// Condition (ii) evidence over n in B (default [1, N]).
ConditionIIReport condition_ii_diagnostic(const WeightedTranslation& t, std::int64_t horizon,
                                          Window window, std::optional<IndexSet> b = std::nullopt,
                                          ArithmeticMode mode = ArithmeticMode::Rational,
                                          const ExactOptions& opts = {});

/// Largest weight level whose superlevel runs in the window include one of length >= horizon.
std::optional<CorollaryWitness> corollary_witness(const WeightSpec& w, std::int64_t horizon,
                                                  Window window);

struct ConditionIDelta {
  double delta = 0.0;
  IndexSet a;  // {n : s_n < delta}
  DensityEstimate density;
};

struct ConditionIReport {
  ElementSet k;
  std::vector<LogValue> s;  // s_n = ||phi_n|_K||_p, n = 1..N
  std::vector<ConditionIDelta> per_delta;
  double tail_fraction = kDefaultTailFraction;
  bool full_density_evidence = false;
};

ConditionIReport condition_i_diagnostic(const WeightedTranslation& t, const ElementSet& k,
                                        std::int64_t horizon, const std::vector<double>& deltas,
                                        double theta = kDefaultTailFraction);

struct PlanEntry {
  std::int64_t n = 0;
  GroupElement g;
  LogValue phi;   // phi_n(g_n)
  LogValue a;     // 1 / phi_n(g_n)
  LogValue r;     // sum_{i in B, n <= i <= N} a_i
  LogValue c;     // 1 / (sqrt(r_n) phi_n(g_n))
  LogValue c_phi; // r_n^{-1/2}
  std::optional<Rational> phi_exact, a_exact, r_exact, c_squared_exact;
};

struct SynthesisPlan {
  IndexSet b;
  std::int64_t truncation = 0;
  std::vector<PlanEntry> entries;
  bool exact = false;
  /// The tail sums r_n stop at the truncation horizon.
  std::string truncation_note;
};

SynthesisPlan build_synthesis_plan(const WeightedTranslation& t, const IndexSet& b,
                                   const std::map<std::int64_t, GroupElement>& g,
                                   std::int64_t truncation,
                                   ArithmeticMode mode = ArithmeticMode::Rational,
                                   const ExactOptions& opts = {});

struct PlanInvariantReport {
  bool cauchy_schwarz = false;        // sum c_n <= 2 sqrt(sum a_n)
  bool c_phi_identity = false;        // c_n phi_n(g_n) = r_n^{-1/2}
  bool c_phi_nondecreasing = false;
  bool exact = false;
  LogValue coefficient_sum;
  LogValue cauchy_schwarz_bound;

  bool holds() const { return cauchy_schwarz && c_phi_identity && c_phi_nondecreasing; }
};

/// Exact when the plan is: the square roots are bracketed by rational enclosures.
PlanInvariantReport check_plan_invariants(const SynthesisPlan& plan);

struct SynthesizedVector {
  ComplexVector y;
  /// |y(x)|^2 = c_n^2 exactly; absent in log mode or after a support collision.
  std::optional<RationalVector> squared_exact;
  std::vector<GroupElement> collisions;
  LogValue norm;
  LogValue coefficient_sum;
  bool norm_bound_holds = false;  // ||y||_p <= sum c_n
  SynthesisPlan plan;

  bool collision_flag() const { return !collisions.empty(); }
};

/// y = sum_{n in B, n <= N} c_n chi_{g_n}.
SynthesizedVector synthesize_vector(const SynthesisPlan& plan, double p);

struct DecayEntry {
  ElementSet k;
  std::optional<LogValue> max_tail_norm;  // max over n in A cap [ceil(N/2), N]
  std::size_t tail_count = 0;
};

struct LowerBoundEntry {
  std::int64_t n = 0;
  LogValue norm;   // ||T^n y||_p
  LogValue bound;  // c_n phi_n(g_n)
  bool passed = false;
  bool exact = false;
};

struct DccVerification {
  std::vector<DecayEntry> decay;
  std::vector<LowerBoundEntry> lower_bounds;
  bool all_lower_bounds_pass = false;
  LogValue max_bound;
  double unbounded_threshold = 0.0;
  bool divergent_bound_evidence = false;  // max bound >= unbounded_threshold
};

/// Exact comparisons are used when the plan is exact, the support has no collisions
/// and p is an even integer; otherwise log-space with 1e-12 relative slack.
DccVerification verify_dcc(const WeightedTranslation& t, const SynthesizedVector& y,
                           const std::vector<ElementSet>& x_basis, const IndexSet& a,
                           std::int64_t horizon, double unbounded_threshold = 1e3,
                           ArithmeticMode mode = ArithmeticMode::Rational,
                           const ExactOptions& opts = {});

}  // namespace wtchaos
