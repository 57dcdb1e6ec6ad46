#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wtchaos/errors.hpp"
#include "wtchaos/weights.hpp"

using namespace wtchaos;

namespace {
const GroupSpec Z = GroupSpec::integers();
const GroupSpec Z2 = GroupSpec::product_with_cyclic(2);
Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}
}  // namespace

TEST_CASE("eval examples") {
  const WeightSpec w = cubic_runs_weight();
  CHECK(w.eval(GroupElement(1)) == 2);
  CHECK(w.eval(GroupElement(2)) == 1);
  CHECK(w.eval(GroupElement(-5)) == q(1, 2));
  const WeightSpec m = mirror_product_weight(w);
  CHECK(m.eval(GroupElement(1, 1)) == q(1, 2));
  CHECK(m.eval(GroupElement(1, 0)) == 2);
}

TEST_CASE("cubic runs match the defining formula") {
  const WeightSpec w = cubic_runs_weight();
  for (std::int64_t z = -50; z <= 20000; ++z) REQUIRE(w.eval(GroupElement(z)) == oracle::cubic_runs(z));
}

TEST_CASE("periodic and table rules") {
  const WeightSpec p = periodic_weight({q(1), q(3), q(1, 2)});
  CHECK(p.eval(GroupElement(4)) == 3);
  CHECK(p.eval(GroupElement(-1)) == q(1, 2));
  CHECK(p.declared_sup() == 3);
  CHECK(p.declared_inf() == q(1, 2));

  const WeightSpec t = table_weight({{GroupElement(0), q(5)}, {GroupElement(7), q(1, 4)}}, q(1));
  CHECK(t.eval(GroupElement(0)) == 5);
  CHECK(t.eval(GroupElement(7)) == q(1, 4));
  CHECK(t.eval(GroupElement(8)) == 1);
  CHECK(t.declared_sup() == 5);
  CHECK(t.declared_inf() == q(1, 4));
}

TEST_CASE("declared bounds are enforced") {
  CHECK_THROWS_AS(WeightSpec(Z, rules::Constant{q(1)}, q(1), q(0)), SpecificationError);
  CHECK_THROWS_AS(WeightSpec(Z, rules::Constant{q(1)}, q(1, 2), q(1)), SpecificationError);
  const WeightSpec tight = with_declared_bounds(constant_weight(q(2)), q(1), q(1, 2));
  CHECK_THROWS_AS(tight.eval(GroupElement(0)), InvariantViolation);
  CHECK_THROWS_AS(tight.log_eval(GroupElement(0)), InvariantViolation);
  CHECK_THROWS_AS(constant_weight(q(0)), SpecificationError);
  CHECK_THROWS_AS(constant_weight(q(1)).eval(GroupElement(0, 0)), SpecificationError);
}

TEST_CASE("presets stay inside their declared bounds") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::int64_t> z(-1000000, 1000000);
  const std::vector<WeightSpec> presets = {cubic_runs_weight(), two_sided_weight(q(1), q(2)),
                                           constant_weight(q(3, 2)), periodic_weight({q(1, 3), q(4)})};
  for (const auto& w : presets) {
    for (int i = 0; i < 100000; ++i) {
      const GroupElement g(z(rng));
      const Rational v = w.eval(g);
      REQUIRE(v >= w.declared_inf());
      REQUIRE(v <= w.declared_sup());
    }
  }
}

TEST_CASE("invertibility examples") {
  auto r = invertibility_check(cubic_runs_weight());
  CHECK(r.invertible);
  CHECK(r.bound_m == 2);
  r = invertibility_check(constant_weight(q(1)));
  CHECK(r.invertible);
  CHECK(r.bound_m == 1);
  r = invertibility_check(two_sided_weight(q(1), q(2)));
  CHECK(r.invertible);
  CHECK(r.bound_m == 2);
  CHECK(invertibility_check(constant_weight(q(1, 8))).bound_m == 8);
}

TEST_CASE("inverse weight examples") {
  const WeightSpec c = inverse_weight(constant_weight(q(2)), GroupElement(-1));
  CHECK(std::holds_alternative<rules::Constant>(c.rule()));
  CHECK(c.eval(GroupElement(9)) == q(1, 2));
  CHECK(inverse_weight(cubic_runs_weight(), GroupElement(-1)).eval(GroupElement(2)) == q(1, 2));
  CHECK(inverse_weight(two_sided_weight(q(1), q(2)), GroupElement(-1)).eval(GroupElement(0)) == 1);

  const WeightSpec v = inverse_weight(cubic_runs_weight(), GroupElement(-1));
  CHECK(v.declared_sup() == 2);
  CHECK(v.declared_inf() == q(1, 2));
}

TEST_CASE("inverse weight matches 1/w(x a) and round-trips") {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<std::int64_t> z(-200, 2000);
  const WeightSpec w = cubic_runs_weight();
  for (const std::int64_t shift : {-1, 1, 3}) {
    const GroupElement a(shift);
    const WeightSpec v = inverse_weight(w, a);
    const WeightSpec back = inverse_weight(v, GroupElement(-shift));
    for (int i = 0; i < 2000; ++i) {
      const std::int64_t x = z(rng);
      REQUIRE(v.eval(GroupElement(x)) == 1 / oracle::cubic_runs(x + shift));
      REQUIRE(back.eval(GroupElement(x)) == w.eval(GroupElement(x)));
    }
  }
  const WeightSpec m = mirror_product_weight(cubic_runs_weight());
  const WeightSpec mv = inverse_weight(m, GroupElement(-1, 0));
  CHECK(mv.eval(GroupElement(2, 0)) == q(1, 2));
  CHECK(mv.eval(GroupElement(2, 1)) == 2);
}

TEST_CASE("mirror product reciprocity") {
  for (const auto& base : {cubic_runs_weight(), two_sided_weight(q(1, 3), q(5)), periodic_weight({q(2), q(7, 3)})}) {
    const WeightSpec m = mirror_product_weight(base);
    for (std::int64_t z = -300; z <= 1500; ++z)
      REQUIRE(m.eval(GroupElement(z, 0)) * m.eval(GroupElement(z, 1)) == 1);
  }
  CHECK_THROWS_AS(mirror_product_weight(constant_weight(q(2), Z2)), SpecificationError);
}

TEST_CASE("run length profile examples") {
  CHECK(run_length_profile(cubic_runs_weight(), q(3, 2), {0, 70}) == std::vector<std::int64_t>{1, 2, 3, 4});
  const auto runs = superlevel_runs(cubic_runs_weight(), q(3, 2), {0, 70});
  REQUIRE(runs.size() == 4);
  CHECK(runs[1].start == 8);
  CHECK(runs[3].start == 64);
  CHECK(run_length_profile(constant_weight(q(1)), q(3, 2), {-1000, 1000}).empty());
  CHECK(run_length_profile(two_sided_weight(q(1), q(2)), q(3, 2), {-10, 10}) == std::vector<std::int64_t>{11});
  // A run cut by the window edge is clipped.
  CHECK(run_length_profile(cubic_runs_weight(), q(3, 2), {28, 66}) == std::vector<std::int64_t>{2, 3});
}

TEST_CASE("run lengths against a brute-force scan") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> value(1, 4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Rational> values;
    for (int i = 0; i < 7; ++i) values.push_back(q(value(rng), 2));
    const WeightSpec w = periodic_weight(values);
    std::vector<std::int64_t> expected;
    std::int64_t run = 0;
    for (std::int64_t z = -20; z <= 40; ++z) {
      const Rational v = values[static_cast<std::size_t>(((z % 7) + 7) % 7)];
      if (v > 1) {
        ++run;
      } else if (run) {
        expected.push_back(run);
        run = 0;
      }
    }
    if (run) expected.push_back(run);
    std::sort(expected.begin(), expected.end());
    CHECK(run_length_profile(w, q(1), {-20, 40}) == expected);
  }
}

TEST_CASE("table csv") {
  std::istringstream in("position,value\n0,5\n3,1/4\n-2,0.5\ndefault,1\n");
  const WeightSpec w = read_table_csv(in);
  CHECK(w.eval(GroupElement(0)) == 5);
  CHECK(w.eval(GroupElement(3)) == q(1, 4));
  CHECK(w.eval(GroupElement(-2)) == q(1, 2));
  CHECK(w.eval(GroupElement(100)) == 1);

  std::istringstream product("0:1,3\ndefault,2\n");
  const WeightSpec wp = read_table_csv(product, Z2);
  CHECK(wp.eval(GroupElement(0, 1)) == 3);
  CHECK(wp.eval(GroupElement(0, 0)) == 2);

  std::istringstream missing("0,5\n");
  CHECK_THROWS_AS(read_table_csv(missing), SpecificationError);
  std::istringstream negative("0,-5\ndefault,1\n");
  CHECK_THROWS_AS(read_table_csv(negative), SpecificationError);
}
