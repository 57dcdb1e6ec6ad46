#include "wtchaos/rational.hpp"

#include <cmath>
#include <numbers>

#include "wtchaos/errors.hpp"

namespace wtchaos {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

double log_of_int(const BigInt& v) {
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, v.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
  if (s.empty()) throw SpecificationError("empty rational literal");

  bool negative = false;
  std::string body = s;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.erase(body.begin());
  }

  Rational result;
  if (const auto slash = body.find('/'); slash != std::string::npos) {
    const std::string num = body.substr(0, slash);
    const std::string den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw SpecificationError("malformed rational literal '" + s + "'");
    result = Rational(BigInt(num, 10), BigInt(den, 10));
    if (result.get_den() == 0) throw SpecificationError("zero denominator in '" + s + "'");
    result.canonicalize();
  } else {
    std::string mantissa = body;
    long exp10 = 0;
    if (const auto e = body.find_first_of("eE"); e != std::string::npos) {
      mantissa = body.substr(0, e);
      const std::string exp_text = body.substr(e + 1);
      const std::string_view digits =
          (!exp_text.empty() && (exp_text[0] == '+' || exp_text[0] == '-'))
              ? std::string_view(exp_text).substr(1)
              : std::string_view(exp_text);
      if (!all_digits(digits) || digits.size() > 6)
        throw SpecificationError("malformed exponent in '" + s + "'");
      exp10 = std::stol(exp_text);
    }
    std::string int_part = mantissa;
    std::string frac_part;
    if (const auto dot = mantissa.find('.'); dot != std::string::npos) {
      int_part = mantissa.substr(0, dot);
      frac_part = mantissa.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty())
      throw SpecificationError("malformed rational literal '" + s + "'");
    if ((!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)))
      throw SpecificationError("malformed rational literal '" + s + "'");
    const BigInt digits((int_part.empty() ? "0" : int_part) + frac_part, 10);
    exp10 -= static_cast<long>(frac_part.size());
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    result = exp10 < 0 ? Rational(digits, scale) : Rational(digits * scale);
    result.canonicalize();
  }
  return negative ? Rational(-result) : result;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::size_t bit_length(const Rational& q) {
  return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

void check_bits(const Rational& q, const ExactOptions& opts, std::string_view what) {
  if (bit_length(q) > opts.max_bits)
    throw NumericRangeError(std::string(what) + ": exact value exceeds " +
                            std::to_string(opts.max_bits) + "-bit cap");
}

double log_of(const Rational& q) {
  if (sgn(q) <= 0) throw DomainError("log of nonpositive rational");
  return log_of_int(q.get_num()) - log_of_int(q.get_den());
}

double to_double(const Rational& q) { return q.get_d(); }

Rational pow_int(const Rational& base, long exponent) {
  const unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational r = exponent < 0 ? Rational(den, num) : Rational(num, den);
  r.canonicalize();
  return r;
}

std::pair<Rational, Rational> sqrt_enclosure(const Rational& q, unsigned precision_bits) {
  if (sgn(q) < 0) throw DomainError("sqrt of negative rational");
  // sqrt(p/d) = sqrt(p*d*4^k) / (d*2^k)
  BigInt scaled = q.get_num() * q.get_den();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * precision_bits);
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  BigInt denom = q.get_den();
  mpz_mul_2exp(denom.get_mpz_t(), denom.get_mpz_t(), precision_bits);
  Rational lo(root, denom);
  lo.canonicalize();
  const bool exact = root * root == scaled;
  Rational hi(exact ? root : BigInt(root + 1), denom);
  hi.canonicalize();
  return {lo, hi};
}

}  // namespace wtchaos
