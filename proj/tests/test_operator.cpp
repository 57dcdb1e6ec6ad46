#include <doctest.h>

#include <complex>
#include <random>

#include "oracles.hpp"
#include "wtchaos/div.hpp"
#include "wtchaos/errors.hpp"
#include "wtchaos/weighted_translation.hpp"

using namespace wtchaos;
using C = std::complex<double>;

namespace {
const GroupSpec Z = GroupSpec::integers();
Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}
WeightedTranslation shift(WeightSpec w, double p = 2.0) { return bilateral_shift(std::move(w), p); }

ComplexVector random_vector(std::mt19937_64& rng, int points, std::int64_t lo, std::int64_t hi) {
  std::uniform_int_distribution<std::int64_t> pos(lo, hi);
  std::normal_distribution<double> val;
  ComplexVector f;
  for (int i = 0; i < points; ++i) f.set(GroupElement(pos(rng)), C(val(rng), val(rng)));
  return f;
}

RationalVector random_rational_vector(std::mt19937_64& rng, int points) {
  std::uniform_int_distribution<std::int64_t> pos(-40, 200);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
  RationalVector f;
  for (int i = 0; i < points; ++i) f.set(GroupElement(pos(rng)), q(num(rng), den(rng)));
  return f;
}
}  // namespace

TEST_CASE("rational parsing and helpers") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-2/7") == q(-2, 7));
  CHECK(parse_rational("0.125") == q(1, 8));
  CHECK(parse_rational("1e-3") == q(1, 1000));
  CHECK(parse_rational("2.5E2") == 250);
  CHECK_THROWS_AS(parse_rational("abc"), SpecificationError);
  CHECK_THROWS_AS(parse_rational("1/0"), SpecificationError);
  CHECK(to_string(q(6, 4)) == "3/2");
  CHECK(log_of(pow_int(q(2), 5000)) == doctest::Approx(5000 * std::log(2.0)));
  const auto [lo, hi] = sqrt_enclosure(q(2), 64);
  CHECK(lo * lo <= 2);
  CHECK(hi * hi >= 2);
  CHECK(hi - lo <= Rational(1) / Rational(BigInt(1) << 60));
  CHECK_THROWS_AS(check_bits(pow_int(q(3), 20000), ExactOptions{}, "x"), NumericRangeError);
}

TEST_CASE("log values") {
  const LogValue two = LogValue::from_value(2.0);
  CHECK((two * two).value() == doctest::Approx(4.0));
  CHECK((two / two).value() == doctest::Approx(1.0));
  CHECK(LogValue::zero().is_zero());
  CHECK((LogValue::zero() * two).is_zero());
  CHECK(LogValue::from_log(1e6).value() == std::numeric_limits<double>::infinity());
  CHECK(LogValue::from_log(-1e6).value() == 0.0);
  CHECK(LogValue::zero() < LogValue::from_log(-1e9));
  const std::vector<LogValue> terms = {LogValue::from_log(1000.0), LogValue::from_log(1000.0), LogValue::zero()};
  CHECK(log_sum_exp(terms).log_magnitude == doctest::Approx(1000.0 + std::log(2.0)));
  CHECK(LogValue::from_rational(q(1, 8)).log_magnitude == doctest::Approx(-3 * std::log(2.0)));
  CHECK(relative_difference(LogValue::from_log(1.0), LogValue::from_log(1.0 + 1e-14)) < 2e-14);
}

TEST_CASE("operator construction") {
  CHECK_THROWS_AS(WeightedTranslation(cubic_runs_weight(), GroupElement(-1), 0.5), SpecificationError);
  CHECK_THROWS_AS(WeightedTranslation(cubic_runs_weight(), GroupElement(0), 2.0), SpecificationError);
  CHECK_THROWS_AS(WeightedTranslation(cubic_runs_weight(), GroupElement(0, 0), 2.0), SpecificationError);
  CHECK(shift(cubic_runs_weight(), 2.0).integer_p() == 2);
  CHECK_FALSE(shift(cubic_runs_weight(), 2.5).integer_p());
}

TEST_CASE("phi examples") {
  const auto c2 = shift(constant_weight(q(2)));
  CHECK(phi_exact(c2, 5, GroupElement(17)) == 32);
  CHECK(phi(c2, 5, GroupElement(17)).value() == doctest::Approx(32.0));
  const auto cr = shift(cubic_runs_weight());
  CHECK(phi_exact(cr, 3, GroupElement(0)) == q(1, 8));
  CHECK(phi_exact(cr, 3, GroupElement(30)) == 8);
  CHECK(phi(cr, 3, GroupElement(30)).value() == doctest::Approx(8.0));
  CHECK_THROWS_AS(phi_exact(cr, 0, GroupElement(0)), DomainError);
}

TEST_CASE("phi agrees with the product oracle for several translation elements") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::int64_t> x(-100, 1500);
  const WeightSpec w = cubic_runs_weight();
  const auto back = shift(w);
  const WeightedTranslation fwd(w, GroupElement(1), 2.0);
  for (int i = 0; i < 300; ++i) {
    const std::int64_t pt = x(rng);
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 40);
    const Rational expected = oracle::shift_phi(oracle::cubic_runs, n, pt);
    REQUIRE(phi_exact(back, n, GroupElement(pt)) == expected);
    REQUIRE(phi(back, n, GroupElement(pt)).log_magnitude == doctest::Approx(log_of(expected)).epsilon(1e-12));
    REQUIRE(phi_exact(fwd, n, GroupElement(pt)) == oracle::forward_phi(oracle::cubic_runs, n, pt));
  }
}

TEST_CASE("phi overflow in rational mode is a numeric range error") {
  const auto c2 = shift(constant_weight(q(2)));
  CHECK_THROWS_AS(phi_exact(c2, 100000, GroupElement(0)), NumericRangeError);
  CHECK(phi(c2, 100000, GroupElement(0)).log_magnitude == doctest::Approx(100000 * std::log(2.0)));
}

TEST_CASE("apply_power examples") {
  const auto one = RationalVector::indicator(GroupElement(0));
  CHECK(apply_power(shift(constant_weight(q(1))), one, 2) == RationalVector::indicator(GroupElement(-2)));
  CHECK(apply_power(shift(constant_weight(q(2))), one, 3) == Rational(8) * RationalVector::indicator(GroupElement(-3)));
  CHECK(apply_power(shift(cubic_runs_weight()), one, 3) == q(1, 8) * RationalVector::indicator(GroupElement(-3)));
  CHECK(apply_power(shift(cubic_runs_weight()), one, 0) == one);
  CHECK_THROWS_AS(apply_power(shift(cubic_runs_weight()), one, -1), DomainError);
}

TEST_CASE("single step matches the defining formula") {
  std::mt19937_64 rng(32);
  const auto t = shift(cubic_runs_weight());
  for (int i = 0; i < 50; ++i) {
    const RationalVector f = random_rational_vector(rng, 6);
    const RationalVector tf = apply_power(t, f, 1);
    for (std::int64_t x = -60; x <= 220; ++x)
      REQUIRE(tf.get(GroupElement(x)) == oracle::cubic_runs(x) * f.get(GroupElement(x + 1)));
  }
}

TEST_CASE("semigroup law, exact") {
  std::mt19937_64 rng(33);
  const auto t = shift(cubic_runs_weight());
  const WeightedTranslation t2(periodic_weight({q(3), q(1, 2), q(5, 4)}), GroupElement(2), 1.0);
  for (int i = 0; i < 60; ++i) {
    const RationalVector f = random_rational_vector(rng, 5);
    const std::int64_t m = static_cast<std::int64_t>(rng() % 21), n = static_cast<std::int64_t>(rng() % 20);
    REQUIRE(apply_power(t, f, m + n) == apply_power(t, apply_power(t, f, n), m));
    REQUIRE(apply_power(t2, f, m + n) == apply_power(t2, apply_power(t2, f, n), m));
  }
}

TEST_CASE("inverse operator") {
  const auto t = shift(constant_weight(q(2)));
  CHECK(apply_inverse(t, RationalVector::indicator(GroupElement(-1))) == q(1, 2) * RationalVector::indicator(GroupElement(0)));
  CHECK_THROWS_AS(apply_inverse(t, RationalVector{}), DomainError);

  const auto cr = shift(cubic_runs_weight());
  RationalVector f;
  f.set(GroupElement(5), q(3));
  f.set(GroupElement(7), q(-2));
  CHECK(apply_inverse(cr, apply_power(cr, f, 1)) == f);
  CHECK(apply_power(cr, apply_inverse(cr, f), 1) == f);

  std::mt19937_64 rng(34);
  const WeightedTranslation mirror(mirror_product_weight(cubic_runs_weight()), GroupElement(-1, 0), 2.0);
  for (int i = 0; i < 40; ++i) {
    RationalVector g;
    for (int k = 0; k < 4; ++k)
      g.set(GroupElement(static_cast<std::int64_t>(rng() % 100) - 20, static_cast<std::int64_t>(rng() % 2)), q(1 + static_cast<long>(rng() % 5), 3));
    REQUIRE(apply_power(mirror, apply_inverse(mirror, g), 1) == g);
    REQUIRE(apply_inverse(mirror, apply_power(mirror, g, 1)) == g);
  }
}

TEST_CASE("multiply examples") {
  CHECK(multiply(constant_weight(q(3)), RationalVector::indicator(GroupElement(0))) == Rational(3) * RationalVector::indicator(GroupElement(0)));
  CHECK(multiply(cubic_runs_weight(), RationalVector::indicator(GroupElement(1))) == Rational(2) * RationalVector::indicator(GroupElement(1)));
  CHECK(multiply(cubic_runs_weight(), RationalVector{}).empty());
  const ComplexVector z = multiply(cubic_runs_weight(), ComplexVector::indicator(GroupElement(-3)));
  CHECK(z.get(GroupElement(-3)).real() == doctest::Approx(0.5));
}

TEST_CASE("orbit norm examples") {
  const auto c2 = shift(constant_weight(q(2)));
  const auto chi0 = RealVector::indicator(GroupElement(0));
  CHECK(orbit_norm(c2, chi0, 5).value() == doctest::Approx(32.0));
  CHECK_THROWS_AS(orbit_norm(c2, RealVector{}, 1), DomainError);
  CHECK_THROWS_AS(orbit_norm(c2, chi0, 0), DomainError);

  std::mt19937_64 rng(35);
  const auto c1 = shift(constant_weight(q(1)), 3.0);
  for (int i = 0; i < 20; ++i) {
    const ComplexVector f = random_vector(rng, 8, -50, 50);
    CHECK(relative_difference(orbit_norm(c1, f, 1 + static_cast<std::int64_t>(rng() % 30)), lp_norm(f, 3.0)) < 1e-12);
  }

  const WeightedTranslation cr1 = shift(cubic_runs_weight(), 1.0);
  RationalVector f;
  f.set(GroupElement(0), q(1));
  f.set(GroupElement(1), q(1));
  // phi_3(0) = (1/2)^3 and phi_3(1) = w(0) w(-1) w(-2) = 1 * (1/2)^2.
  CHECK(orbit_norm_pow_exact(cr1, f, 3) == q(1, 8) + q(1, 4));
  CHECK(orbit_norm(cr1, f, 3).value() == doctest::Approx(0.375));
}

TEST_CASE("orbit norm series examples") {
  const auto chi0 = RationalVector::indicator(GroupElement(0));
  auto s = orbit_norm_series(shift(constant_weight(q(2))), chi0, 3);
  REQUIRE(s.size() == 3);
  CHECK(s[0].value() == doctest::Approx(2.0));
  CHECK(s[2].value() == doctest::Approx(8.0));
  s = orbit_norm_series(shift(constant_weight(q(1))), chi0, 3);
  CHECK(s[1].value() == doctest::Approx(1.0));
  const auto cr = shift(cubic_runs_weight());
  CHECK(orbit_norm_pow_series_exact(cr, chi0, 3) == std::vector<Rational>{q(1, 4), q(1, 16), q(1, 64)});
  s = orbit_norm_series(cr, chi0, 3);
  CHECK(s[2].value() == doctest::Approx(0.125));
  CHECK_THROWS_AS(orbit_norm_pow_series_exact(shift(cubic_runs_weight(), 1.5), chi0, 3), PreconditionError);
}

TEST_CASE("series equals pointwise orbit norms and the norm of T^n f") {
  std::mt19937_64 rng(36);
  const WeightedTranslation t(mirror_product_weight(cubic_runs_weight()), GroupElement(-1, 0), 2.5);
  for (int i = 0; i < 20; ++i) {
    ComplexVector f;
    for (int k = 0; k < 6; ++k)
      f.set(GroupElement(static_cast<std::int64_t>(rng() % 400) - 100, static_cast<std::int64_t>(rng() % 2)), C(1.0 + k, -0.5 * k));
    const auto series = orbit_norm_series(t, f, 40);
    for (std::int64_t n = 1; n <= 40; n += 3) {
      const auto i_n = static_cast<std::size_t>(n - 1);
      REQUIRE(relative_difference(series[i_n], orbit_norm(t, f, n)) < 1e-12);
      REQUIRE(relative_difference(series[i_n], lp_norm(apply_power(t, f, n), 2.5)) < 1e-12);
    }
  }
}

TEST_CASE("exact series equals exact norms of T^n f") {
  std::mt19937_64 rng(37);
  const auto t = shift(cubic_runs_weight(), 2.0);
  for (int i = 0; i < 20; ++i) {
    const RationalVector f = random_rational_vector(rng, 5);
    const auto series = orbit_norm_pow_series_exact(t, f, 30);
    for (std::int64_t n = 1; n <= 30; ++n)
      REQUIRE(series[static_cast<std::size_t>(n - 1)] == lp_norm_pow_exact(apply_power(t, f, n), 2));
  }
}

TEST_CASE("modulus invariance") {
  std::mt19937_64 rng(38);
  const auto t = shift(cubic_runs_weight());
  for (int i = 0; i < 30; ++i) {
    const ComplexVector f = random_vector(rng, 10, -100, 500);
    CHECK(modulus_check(t, f, 60));
    const RationalVector r = random_rational_vector(rng, 6);
    CHECK(orbit_norm_pow_series_exact(t, r, 40) == orbit_norm_pow_series_exact(t, abs(r), 40));
  }
}

TEST_CASE("translate bounds with M^(2|m|)") {
  std::mt19937_64 rng(39);
  const auto t = shift(cubic_runs_weight());
  const double log_m = std::log(2.0);
  for (int i = 0; i < 20; ++i) {
    const ComplexVector f = random_vector(rng, 6, -30, 400);
    const auto base = orbit_norm_series(t, f, 50);
    for (std::int64_t m = -5; m <= 5; ++m) {
      const auto moved = orbit_norm_series(t, translate_vector(t.group(), f, power(t.group(), t.a(), m)), 50);
      const double slack = 2.0 * static_cast<double>(std::llabs(m)) * log_m + 1e-9;
      for (std::int64_t n = std::llabs(m) + 1; n <= 50; ++n) {
        const double d = moved[static_cast<std::size_t>(n - 1)].log_magnitude - base[static_cast<std::size_t>(n - 1)].log_magnitude;
        REQUIRE(std::abs(d) <= slack);
      }
    }
  }
}

TEST_CASE("mirror pairing of cocycles") {
  const WeightedTranslation t(mirror_product_weight(cubic_runs_weight()), GroupElement(-1, 0), 2.0);
  for (std::int64_t z = -40; z <= 400; z += 7)
    for (std::int64_t n = 1; n <= 30; ++n)
      REQUIRE(phi_exact(t, n, GroupElement(z, 0)) * phi_exact(t, n, GroupElement(z, 1)) == 1);
}

TEST_CASE("orbit norm equals dense single-step application") {
  std::mt19937_64 rng(40);
  const auto t = shift(cubic_runs_weight(), 2.0);
  const std::int64_t lo = -120;
  const oracle::DenseShift dense([](std::int64_t z) { return to_double(oracle::cubic_runs(z)); }, lo, 400);
  for (int i = 0; i < 25; ++i) {
    const ComplexVector f = random_vector(rng, 7, -40, 200);
    Eigen::VectorXcd v = to_dense(f, lo, 400);
    const auto series = orbit_norm_series(t, f, 50);
    for (std::int64_t n = 1; n <= 50; ++n) {
      v = dense.step(v);
      REQUIRE(oracle::rel(series[static_cast<std::size_t>(n - 1)].value(), oracle::lp(v, 2.0)) < 1e-10);
    }
    const ComplexVector direct = apply_power(t, f, 50);
    const ComplexVector stepped = from_dense(v, lo);
    CHECK(stepped.support() == direct.support());
    for (const auto& [g, value] : direct) CHECK(std::abs(stepped.get(g) - value) <= 1e-10 * std::abs(value));
  }
}

TEST_CASE("long horizons stay finite in log mode") {
  const auto c2 = shift(constant_weight(q(2)));
  const auto s = orbit_norm_series(c2, RealVector::indicator(GroupElement(0)), 10000);
  CHECK(s.back().value() == std::numeric_limits<double>::infinity());
  CHECK(s.back().log_magnitude == doctest::Approx(10000 * std::log(2.0)).epsilon(1e-13));
}
