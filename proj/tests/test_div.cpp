#include <doctest.h>

#include <complex>
#include <random>

#include "wtchaos/dccw.hpp"
#include "wtchaos/div.hpp"
#include "wtchaos/errors.hpp"

using namespace wtchaos;
using C = std::complex<double>;

namespace {
Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}
WeightedTranslation shift(WeightSpec w, double p = 2.0) { return bilateral_shift(std::move(w), p); }
GroupElement at(std::int64_t z) { return GroupElement(z); }

SynthesizedVector cubic_synthesized(const IndexSet& b, std::int64_t horizon) {
  const auto t = shift(cubic_runs_weight());
  std::map<std::int64_t, GroupElement> g;
  for (std::int64_t n = 1; n <= horizon; ++n) g.emplace(n, at(n * n * n + n));
  return synthesize_vector(build_synthesis_plan(t, b, g, horizon), 2.0);
}

ComplexVector random_vector(std::mt19937_64& rng, int points) {
  std::uniform_int_distribution<std::int64_t> pos(-50, 300);
  std::normal_distribution<double> val;
  ComplexVector f;
  for (int i = 0; i < points; ++i) f.set(at(pos(rng)), C(val(rng), val(rng)));
  return f;
}
}  // namespace

TEST_CASE("irregularity evidence examples") {
  const auto c1 = shift(constant_weight(q(1)));
  auto ev = irregularity_evidence(c1, 0.6 * RealVector::indicator(at(3)) + 0.8 * RealVector::indicator(at(9)), 100, 0.1, 10.0);
  CHECK(ev.near_zero.empty());
  CHECK(ev.unbounded.empty());

  ev = irregularity_evidence(shift(constant_weight(q(2))), RealVector::indicator(at(0)), 100, 0.1, 1e3);
  CHECK(ev.near_zero.empty());
  std::vector<std::int64_t> expected;
  for (std::int64_t n = 10; n <= 100; ++n) expected.push_back(n);
  CHECK(ev.unbounded.members() == expected);
  CHECK(ev.unbounded_density.upper_est >= 0.9);

  CHECK_THROWS_AS(irregularity_evidence(c1, RealVector{}, 10, 0.1, 10.0), DomainError);
}

TEST_CASE("irregularity evidence of the synthesized cubic-runs vector") {
  // Every orbit norm up to n = 200 stays above c_20 phi_n(g_20) >= 1, so the
  // near-zero set is empty at this horizon.
  const auto y = cubic_synthesized(IndexSet::full(20), 20);
  const auto ev = irregularity_evidence(shift(cubic_runs_weight()), y.y, 200, 0.1, 1e3);
  CHECK(ev.near_zero.empty());
  CHECK(ev.max_norm.log_magnitude >= 9.5 * std::log(2.0));
  CHECK(ev.unbounded_density.upper_est >= 0.9);
}

TEST_CASE("irregular sets are disjoint when delta <= Lambda") {
  std::mt19937_64 rng(61);
  const auto t = shift(cubic_runs_weight());
  for (int i = 0; i < 20; ++i) {
    const auto ev = irregularity_evidence(t, random_vector(rng, 5), 120, 0.5, 2.0);
    for (const auto n : ev.near_zero.members()) REQUIRE_FALSE(ev.unbounded.contains(n));
  }
}

TEST_CASE("modulus check examples") {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  ComplexVector y;
  for (int i = 0; i < 10; ++i) y.set(at(static_cast<std::int64_t>(rng() % 500)), std::polar(1.0 + i, angle(rng)));
  CHECK(modulus_check(shift(cubic_runs_weight()), y, 100));

  const RationalVector d = RationalVector::indicator(at(0)) - RationalVector::indicator(at(1));
  CHECK(abs(d) == RationalVector::indicator(at(0)) + RationalVector::indicator(at(1)));
  CHECK(modulus_check(shift(cubic_runs_weight()), d, 100));
  CHECK_THROWS_AS(modulus_check(shift(cubic_runs_weight()), ComplexVector{}, 10), DomainError);
}

TEST_CASE("cone combinations") {
  const RealVector y = RealVector::indicator(at(0)) - 2.0 * RealVector::indicator(at(4));
  CHECK(cone_combine<double>({y}, {1.0}) == abs(y));
  const auto combo = cone_combine<double>({RealVector::indicator(at(0)), RealVector::indicator(at(1))}, {1.0, 2.0});
  CHECK(combo == RealVector::indicator(at(0)) + 2.0 * RealVector::indicator(at(1)));
  CHECK_THROWS_AS(cone_combine<double>({y}, {0.0}), DomainError);
  CHECK_THROWS_AS(cone_combine<double>({y}, {-1.0}), DomainError);
  CHECK_THROWS_AS(cone_combine<double>({y, y}, {1.0}), DomainError);

  const auto t = shift(cubic_runs_weight());
  const auto a = cubic_synthesized(IndexSet::full(12), 12).y;
  const auto b = cubic_synthesized(IndexSet(12, {2, 4, 6, 8, 10, 12}), 12).y;
  const std::vector<ComplexVector> parts = {a, b};
  const std::vector<C> coeffs = {C(0.5, 0.0), C(3.0, 0.0)};
  const ComplexVector sum = cone_combine(parts, coeffs);
  CHECK(cone_domination_check(t, parts, coeffs, sum, 150));

  std::mt19937_64 rng(63);
  std::uniform_real_distribution<double> coef(0.01, 5.0);
  for (int i = 0; i < 20; ++i) {
    const std::vector<ComplexVector> vs = {random_vector(rng, 4), random_vector(rng, 6), random_vector(rng, 3)};
    const std::vector<C> cs = {C(coef(rng), 0.0), C(coef(rng), 0.0), C(coef(rng), 0.0)};
    REQUIRE(cone_domination_check(t, vs, cs, cone_combine(vs, cs), 80));
  }
}

TEST_CASE("equivalence classes") {
  const RationalVector y = RationalVector::indicator(at(0)) + RationalVector::indicator(at(1));
  RationalVector z;
  z.set(at(0), q(2));
  z.set(at(1), q(1, 2));
  const auto w = equivalence_member(y, z);
  REQUIRE(w);
  CHECK(w->c1 == q(1, 2));
  CHECK(w->c2 == 2);
  CHECK_FALSE(equivalence_member(RationalVector::indicator(at(0)), RationalVector::indicator(at(1))));

  std::mt19937_64 rng(64);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  for (int i = 0; i < 30; ++i) {
    const ComplexVector a = random_vector(rng, 6);
    ComplexVector b;
    for (const auto& [g, v] : a) b.set(g, v * std::polar(1.0, angle(rng)));
    const auto same = equivalence_member(a, b);
    REQUIRE(same);
    CHECK(same->c1 == doctest::Approx(1.0));
    CHECK(same->c2 == doctest::Approx(1.0));

    ComplexVector c;
    for (const auto& [g, v] : a) c.set(g, v * (1.0 + static_cast<double>(rng() % 7)));
    const auto ac = equivalence_member(a, c);
    const auto ca = equivalence_member(c, a);
    REQUIRE(ac);
    REQUIRE(ca);
    CHECK(ca->c1 == doctest::Approx(1.0 / ac->c2));
    CHECK(ca->c2 == doctest::Approx(1.0 / ac->c1));
  }
}

TEST_CASE("split vector examples") {
  auto [y1, y2] = split_vector(RationalVector::indicator(at(0)) + RationalVector::indicator(at(1)), {at(0)});
  CHECK(y1.get(at(0)) == q(1, 3));
  CHECK(y1.get(at(1)) == q(2, 3));
  CHECK(y2.get(at(0)) == q(2, 3));
  CHECK(y2.get(at(1)) == q(1, 3));

  const RationalVector y = Rational(3) * (RationalVector::indicator(at(0)) + RationalVector::indicator(at(1)));
  auto [a, b] = split_vector(y, {at(1)});
  CHECK(a == Rational(2) * RationalVector::indicator(at(0)) + RationalVector::indicator(at(1)));
  CHECK(b == RationalVector::indicator(at(0)) + Rational(2) * RationalVector::indicator(at(1)));
  CHECK(a + b == y);

  CHECK_THROWS_AS(split_vector(y, {at(0), at(1)}), PreconditionError);
  CHECK_THROWS_AS(split_vector(y, {}), PreconditionError);
  CHECK_THROWS_AS(split_vector(y, {at(7)}), PreconditionError);
  CHECK_THROWS_AS(split_vector(RationalVector::indicator(at(0)) - RationalVector::indicator(at(1)), {at(0)}), PreconditionError);
  CHECK_THROWS_AS(split_vector(RationalVector::indicator(at(0)), {at(0)}), PreconditionError);
}

TEST_CASE("split vector sandwich and independence") {
  std::mt19937_64 rng(65);
  const auto t = shift(cubic_runs_weight());
  for (int trial = 0; trial < 40; ++trial) {
    RationalVector y;
    for (int i = 0; i < 6; ++i) y.set(at(static_cast<std::int64_t>(rng() % 200) - 50), q(1 + static_cast<long>(rng() % 9), 1 + static_cast<long>(rng() % 4)));
    if (y.size() < 2) continue;
    ElementSet k = {y.begin()->first};
    const auto [y1, y2] = split_vector(y, k);
    REQUIRE(y1 + y2 == y);
    Rational ratio = 0;
    bool proportional = true;
    for (const auto& [g, v] : y) {
      for (const auto* part : {&y1, &y2}) {
        REQUIRE(part->get(g) * 3 >= v);
        REQUIRE(part->get(g) <= v);
      }
      const Rational r = y1.get(g) / y2.get(g);
      if (sgn(ratio) == 0) ratio = r;
      else if (r != ratio) proportional = false;
    }
    REQUIRE_FALSE(proportional);

    // Evidence sets of y carry over with Lambda scaled by 1/3.
    const auto ev = irregularity_evidence(t, y, 100, 0.05, 3.0);
    for (const auto* part : {&y1, &y2}) {
      const auto ep = irregularity_evidence(t, *part, 100, 0.05, 1.0);
      for (const auto n : ev.near_zero.members()) REQUIRE(ep.near_zero.contains(n));
      for (const auto n : ev.unbounded.members()) REQUIRE(ep.unbounded.contains(n));
    }
  }
}

TEST_CASE("translate containment") {
  std::mt19937_64 rng(66);
  const auto t = shift(cubic_runs_weight());
  for (int i = 0; i < 20; ++i) {
    const ComplexVector y = random_vector(rng, 5);
    for (std::int64_t m = -5; m <= 5; ++m) REQUIRE(translate_containment_check(t, y, m, 50, 4.0));
  }
  const auto y = cubic_synthesized(IndexSet::full(15), 15).y;
  for (std::int64_t m = -5; m <= 5; ++m) CHECK(translate_containment_check(t, y, m, 120, 100.0));
}

TEST_CASE("mirror example") {
  auto r = mirror_two_component_check(cubic_runs_weight(), 3, {0});
  CHECK(r.reciprocity_holds);
  CHECK(r.max_deviation <= 1e-12);
  CHECK(r.component0.norms[2].value() == doctest::Approx(0.125));
  CHECK(r.component1.norms[2].value() == doctest::Approx(8.0));
  CHECK(r.mixed_dominates);

  r = mirror_two_component_check(constant_weight(q(2)), 5, {0, 3});
  CHECK(r.reciprocity_holds);
  CHECK(r.component0.norms[4].value() == doctest::Approx(32.0));
  CHECK(r.component1.norms[4].value() == doctest::Approx(1.0 / 32.0));

  CHECK_THROWS_AS(mirror_two_component_check(cubic_runs_weight(), 5, {}), DomainError);
  CHECK_THROWS_AS(mirror_two_component_check(constant_weight(q(2), GroupSpec::product_with_cyclic(2)), 5, {0}), SpecificationError);
}
