#include "wtchaos/log_value.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wtchaos/errors.hpp"

namespace wtchaos {

LogValue LogValue::from_value(double v) {
  if (v < 0.0 || std::isnan(v)) throw DomainError("LogValue requires a nonnegative magnitude");
  if (v == 0.0) return zero();
  return from_log(std::log(v));
}

LogValue LogValue::from_rational(const Rational& q) {
  if (sgn(q) < 0) throw DomainError("LogValue requires a nonnegative magnitude");
  if (sgn(q) == 0) return zero();
  return from_log(log_of(q));
}

double LogValue::value() const { return zero_flag ? 0.0 : std::exp(log_magnitude); }

double LogValue::log_or_neg_inf() const {
  return zero_flag ? -std::numeric_limits<double>::infinity() : log_magnitude;
}

LogValue operator*(LogValue lhs, LogValue rhs) {
  if (lhs.zero_flag || rhs.zero_flag) return LogValue::zero();
  return LogValue::from_log(lhs.log_magnitude + rhs.log_magnitude);
}

LogValue operator/(LogValue lhs, LogValue rhs) {
  if (rhs.zero_flag) throw DomainError("division by a zero LogValue");
  if (lhs.zero_flag) return LogValue::zero();
  return LogValue::from_log(lhs.log_magnitude - rhs.log_magnitude);
}

std::partial_ordering operator<=>(const LogValue& lhs, const LogValue& rhs) {
  return lhs.log_or_neg_inf() <=> rhs.log_or_neg_inf();
}

bool operator==(const LogValue& lhs, const LogValue& rhs) {
  return lhs.zero_flag == rhs.zero_flag && (lhs.zero_flag || lhs.log_magnitude == rhs.log_magnitude);
}

LogValue pow(LogValue v, double exponent) {
  if (v.zero_flag) return exponent == 0.0 ? LogValue::from_log(0.0) : LogValue::zero();
  return LogValue::from_log(v.log_magnitude * exponent);
}

LogValue log_sum_exp(std::span<const LogValue> terms) {
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms)
    if (!t.zero_flag) peak = std::max(peak, t.log_magnitude);
  if (peak == -std::numeric_limits<double>::infinity()) return LogValue::zero();
  double acc = 0.0;
  for (const auto& t : terms)
    if (!t.zero_flag) acc += std::exp(t.log_magnitude - peak);
  return LogValue::from_log(peak + std::log(acc));
}

double relative_difference(LogValue a, LogValue b) {
  if (a.zero_flag || b.zero_flag)
    return (a.zero_flag && b.zero_flag) ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(std::expm1(a.log_magnitude - b.log_magnitude));
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    compensation_ += (sum_ - t) + x;
  else
    compensation_ += (x - t) + sum_;
  sum_ = t;
}

}  // namespace wtchaos
