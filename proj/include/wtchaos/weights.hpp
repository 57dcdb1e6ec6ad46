#pragma once

// Positive bounded weights w : G -> (0, inf) with exact rational values.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "wtchaos/group.hpp"
#include "wtchaos/rational.hpp"

namespace wtchaos {

class WeightSpec;

namespace rules {

struct Constant {
  Rational value;
  double log_value = 0.0;
};

/// left for z < 0, right for z >= 0.
struct TwoSided {
  Rational left, right;
  double log_left = 0.0, log_right = 0.0;
};

/// values[z mod len].
struct Periodic {
  std::vector<Rational> values;
  std::vector<double> logs;
};

struct Table {
  std::map<GroupElement, Rational> entries;
  std::map<GroupElement, double> logs;
  Rational default_value;
  double log_default = 0.0;
};

/// 2 on [n^3, n^3 + n) for n >= 1, 1/2 on z < 0, 1 elsewhere.
struct CubicRuns {};

/// base(z) on even cyclic copies, 1/base(z) on odd ones.
struct MirrorProduct {
  std::shared_ptr<const WeightSpec> base;
};

/// x -> 1 / base(x * shift); the weight of the inverse operator.
struct ShiftedReciprocal {
  std::shared_ptr<const WeightSpec> base;
  GroupElement shift;
};

}  // namespace rules

using WeightRule = std::variant<rules::Constant, rules::TwoSided, rules::Periodic, rules::Table,
                                rules::CubicRuns, rules::MirrorProduct, rules::ShiftedReciprocal>;

class WeightSpec {
 public:
  /// Requires 0 < declared_inf <= declared_sup. Values are checked against the
  /// declared bounds lazily, on every evaluation.
  WeightSpec(GroupSpec group, WeightRule rule, Rational declared_sup, Rational declared_inf);

  const GroupSpec& group() const { return group_; }
  const WeightRule& rule() const { return rule_; }
  const Rational& declared_sup() const { return sup_; }
  const Rational& declared_inf() const { return inf_; }
  std::string rule_name() const;

  /// Exact w(g). Throws InvariantViolation outside the declared bounds.
  Rational eval(const GroupElement& g) const;

  /// log w(g), bound-checked in log space.
  double log_eval(const GroupElement& g) const;

 private:
  Rational raw_eval(const GroupElement& g) const;
  double raw_log(const GroupElement& g) const;

  GroupSpec group_;
  WeightRule rule_;
  Rational sup_, inf_;
  double log_sup_ = 0.0, log_inf_ = 0.0;
};

WeightSpec constant_weight(const Rational& value, GroupSpec group = GroupSpec::integers());
WeightSpec two_sided_weight(const Rational& left, const Rational& right,
                            GroupSpec group = GroupSpec::integers());
WeightSpec periodic_weight(std::vector<Rational> values, GroupSpec group = GroupSpec::integers());
WeightSpec table_weight(std::map<GroupElement, Rational> entries, const Rational& default_value,
                        GroupSpec group = GroupSpec::integers());
WeightSpec cubic_runs_weight(GroupSpec group = GroupSpec::integers());
/// Base must live on Z; the result lives on Z x Z_modulus.
WeightSpec mirror_product_weight(const WeightSpec& base, std::int64_t modulus = 2);

/// Replaces the declared bounds (e.g. with looser ones from a config file).
WeightSpec with_declared_bounds(const WeightSpec& w, const Rational& sup, const Rational& inf);

/// Reads a Table weight from CSV rows `position,value`; a row `default,<value>` is required.
/// Positions are `z` on Z and `z:c` on Z x Z_m. A leading `position,value` header is skipped.
WeightSpec read_table_csv(std::istream& in, GroupSpec group = GroupSpec::integers());

inline Rational eval(const WeightSpec& w, const GroupElement& g) { return w.eval(g); }

struct InvertibilityReport {
  bool invertible = false;
  Rational bound_m;  // max(sup w, 1 / inf w)
};

InvertibilityReport invertibility_check(const WeightSpec& w);

/// v(x) = 1 / w(x * a): the weight of the inverse of T_{a,w}, which translates by a^{-1}.
WeightSpec inverse_weight(const WeightSpec& w, const GroupElement& a);

/// Closed integer window [lo, hi] on the z-axis.
struct Window {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t length() const { return hi - lo + 1; }
};

struct Run {
  std::int64_t start = 0;
  std::int64_t length = 0;
};

/// Maximal runs of {z : w(z) > level} inside the window, in order of position.
std::vector<Run> superlevel_runs(const WeightSpec& w, const Rational& level, Window window);

/// Sorted maximal run lengths of {w > level} inside the window.
std::vector<std::int64_t> run_length_profile(const WeightSpec& w, const Rational& level,
                                             Window window);

}  // namespace wtchaos
