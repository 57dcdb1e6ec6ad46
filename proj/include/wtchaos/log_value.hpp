#pragma once

// Overflow-safe magnitudes stored as natural logarithms.

#include <compare>
#include <span>

#include "wtchaos/rational.hpp"

namespace wtchaos {

struct LogValue {
  double log_magnitude = 0.0;
  bool zero_flag = true;

  static LogValue zero() { return {}; }
  static LogValue from_log(double log_magnitude) { return {log_magnitude, false}; }
  static LogValue from_value(double v);
  static LogValue from_rational(const Rational& q);

  bool is_zero() const { return zero_flag; }

  /// exp(log_magnitude), saturating to inf or 0.
  double value() const;

  /// Log magnitude with zero mapped to -inf.
  double log_or_neg_inf() const;

  friend LogValue operator*(LogValue lhs, LogValue rhs);
  friend LogValue operator/(LogValue lhs, LogValue rhs);
  friend std::partial_ordering operator<=>(const LogValue& lhs, const LogValue& rhs);
  friend bool operator==(const LogValue& lhs, const LogValue& rhs);
};

LogValue pow(LogValue v, double exponent);

/// log(sum_i exp(terms_i)) over non-zero terms; zero when all terms are zero.
LogValue log_sum_exp(std::span<const LogValue> terms);

/// Relative difference |a/b - 1| evaluated in log space.
double relative_difference(LogValue a, LogValue b);

/// Neumaier-compensated running sum, used for long products in log space.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace wtchaos
