#include "wtchaos/weights.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <optional>
#include <sstream>

#include "wtchaos/errors.hpp"

namespace wtchaos {

namespace {

constexpr double kLogSlack = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::int64_t floor_mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

std::int64_t integer_cbrt(std::int64_t z) {
  auto n = static_cast<std::int64_t>(std::cbrt(static_cast<double>(z)));
  while (n > 0 && n * n * n > z) --n;
  while ((n + 1) * (n + 1) * (n + 1) <= z) ++n;
  return n;
}

bool in_cubic_run(std::int64_t z) {
  if (z < 1) return false;
  const std::int64_t n = integer_cbrt(z);
  return n >= 1 && z < n * n * n + n;
}

void require_positive(const Rational& v, const char* what) {
  if (sgn(v) <= 0) throw SpecificationError(std::string(what) + " must be positive");
}

}  // namespace

WeightSpec::WeightSpec(GroupSpec group, WeightRule rule, Rational declared_sup,
                       Rational declared_inf)
    : group_(group), rule_(std::move(rule)), sup_(std::move(declared_sup)),
      inf_(std::move(declared_inf)) {
  if (sgn(inf_) <= 0) throw SpecificationError("declared_inf must be positive");
  if (sup_ < inf_) throw SpecificationError("declared_sup must be >= declared_inf");
  log_sup_ = log_of(sup_);
  log_inf_ = log_of(inf_);
}

std::string WeightSpec::rule_name() const {
  return std::visit(overloaded{
                        [](const rules::Constant&) { return "constant"; },
                        [](const rules::TwoSided&) { return "two_sided"; },
                        [](const rules::Periodic&) { return "periodic"; },
                        [](const rules::Table&) { return "table"; },
                        [](const rules::CubicRuns&) { return "cubic_runs"; },
                        [](const rules::MirrorProduct&) { return "mirror_product"; },
                        [](const rules::ShiftedReciprocal&) { return "shifted_reciprocal"; },
                    },
                    rule_);
}

Rational WeightSpec::raw_eval(const GroupElement& g) const {
  return std::visit(
      overloaded{
          [](const rules::Constant& r) { return r.value; },
          [&](const rules::TwoSided& r) { return g.z < 0 ? r.left : r.right; },
          [&](const rules::Periodic& r) {
            return r.values[static_cast<std::size_t>(
                floor_mod(g.z, static_cast<std::int64_t>(r.values.size())))];
          },
          [&](const rules::Table& r) {
            const auto it = r.entries.find(g);
            return it == r.entries.end() ? r.default_value : it->second;
          },
          [&](const rules::CubicRuns&) {
            if (g.z < 0) return Rational(1, 2);
            return in_cubic_run(g.z) ? Rational(2) : Rational(1);
          },
          [&](const rules::MirrorProduct& r) {
            const Rational v = r.base->eval(GroupElement(g.z));
            return (*g.c % 2 == 0) ? v : Rational(1 / v);
          },
          [&](const rules::ShiftedReciprocal& r) {
            return Rational(1 / r.base->eval(compose(group_, g, r.shift)));
          },
      },
      rule_);
}

double WeightSpec::raw_log(const GroupElement& g) const {
  return std::visit(
      overloaded{
          [](const rules::Constant& r) { return r.log_value; },
          [&](const rules::TwoSided& r) { return g.z < 0 ? r.log_left : r.log_right; },
          [&](const rules::Periodic& r) {
            return r.logs[static_cast<std::size_t>(
                floor_mod(g.z, static_cast<std::int64_t>(r.logs.size())))];
          },
          [&](const rules::Table& r) {
            const auto it = r.logs.find(g);
            return it == r.logs.end() ? r.log_default : it->second;
          },
          [&](const rules::CubicRuns&) {
            if (g.z < 0) return -std::numbers::ln2;
            return in_cubic_run(g.z) ? std::numbers::ln2 : 0.0;
          },
          [&](const rules::MirrorProduct& r) {
            const double v = r.base->log_eval(GroupElement(g.z));
            return (*g.c % 2 == 0) ? v : -v;
          },
          [&](const rules::ShiftedReciprocal& r) {
            return -r.base->log_eval(compose(group_, g, r.shift));
          },
      },
      rule_);
}

Rational WeightSpec::eval(const GroupElement& g) const {
  check_member(group_, g);
  Rational v = raw_eval(g);
  if (v < inf_ || v > sup_)
    throw InvariantViolation("weight value " + to_string(v) + " at " + to_string(g) +
                             " outside declared bounds [" + to_string(inf_) + ", " +
                             to_string(sup_) + "]");
  return v;
}

double WeightSpec::log_eval(const GroupElement& g) const {
  check_member(group_, g);
  const double v = raw_log(g);
  if (v < log_inf_ - kLogSlack || v > log_sup_ + kLogSlack) {
    // Confirm exactly before failing.
    (void)eval(g);
  }
  return v;
}

WeightSpec constant_weight(const Rational& value, GroupSpec group) {
  require_positive(value, "constant weight value");
  return WeightSpec(group, rules::Constant{value, log_of(value)}, value, value);
}

WeightSpec two_sided_weight(const Rational& left, const Rational& right, GroupSpec group) {
  require_positive(left, "two_sided left value");
  require_positive(right, "two_sided right value");
  return WeightSpec(group, rules::TwoSided{left, right, log_of(left), log_of(right)},
                    std::max(left, right), std::min(left, right));
}

WeightSpec periodic_weight(std::vector<Rational> values, GroupSpec group) {
  if (values.empty()) throw SpecificationError("periodic weight needs at least one value");
  rules::Periodic rule;
  for (const auto& v : values) {
    require_positive(v, "periodic weight value");
    rule.logs.push_back(log_of(v));
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  Rational sup = *hi, inf = *lo;
  rule.values = std::move(values);
  return WeightSpec(group, std::move(rule), sup, inf);
}

WeightSpec table_weight(std::map<GroupElement, Rational> entries, const Rational& default_value,
                        GroupSpec group) {
  require_positive(default_value, "table default value");
  rules::Table rule;
  Rational sup = default_value, inf = default_value;
  for (const auto& [g, v] : entries) {
    check_member(group, g);
    require_positive(v, "table weight value");
    rule.logs.emplace(g, log_of(v));
    sup = std::max(sup, v);
    inf = std::min(inf, v);
  }
  rule.entries = std::move(entries);
  rule.default_value = default_value;
  rule.log_default = log_of(default_value);
  return WeightSpec(group, std::move(rule), sup, inf);
}

WeightSpec cubic_runs_weight(GroupSpec group) {
  return WeightSpec(group, rules::CubicRuns{}, Rational(2), Rational(1, 2));
}

WeightSpec mirror_product_weight(const WeightSpec& base, std::int64_t modulus) {
  if (base.group().is_product())
    throw SpecificationError("mirror_product base weight must live on Z");
  const Rational sup = std::max(base.declared_sup(), Rational(1 / base.declared_inf()));
  const Rational inf = std::min(base.declared_inf(), Rational(1 / base.declared_sup()));
  return WeightSpec(GroupSpec::product_with_cyclic(modulus),
                    rules::MirrorProduct{std::make_shared<const WeightSpec>(base)}, sup, inf);
}

WeightSpec with_declared_bounds(const WeightSpec& w, const Rational& sup, const Rational& inf) {
  return WeightSpec(w.group(), w.rule(), sup, inf);
}

WeightSpec read_table_csv(std::istream& in, GroupSpec group) {
  std::map<GroupElement, Rational> entries;
  std::optional<Rational> default_value;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw SpecificationError("table csv line " + std::to_string(line_no) + ": expected 2 fields");
    std::string key = line.substr(0, comma);
    std::string value = line.substr(comma + 1);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    if (key == "position") continue;
    if (key == "default") {
      default_value = parse_rational(value);
      continue;
    }
    try {
      GroupElement g;
      if (const auto colon = key.find(':'); colon != std::string::npos)
        g = GroupElement(std::stoll(key.substr(0, colon)), std::stoll(key.substr(colon + 1)));
      else
        g = GroupElement(std::stoll(key));
      entries[g] = parse_rational(value);
    } catch (const std::logic_error&) {
      throw SpecificationError("table csv line " + std::to_string(line_no) +
                               ": bad position '" + key + "'");
    }
  }
  if (!default_value) throw SpecificationError("table csv requires a 'default' row");
  return table_weight(std::move(entries), *default_value, group);
}

InvertibilityReport invertibility_check(const WeightSpec& w) {
  // Bounds are finite rationals and inf > 0 by construction.
  return {true, std::max(w.declared_sup(), Rational(1 / w.declared_inf()))};
}

WeightSpec inverse_weight(const WeightSpec& w, const GroupElement& a) {
  const GroupSpec& group = w.group();
  check_member(group, a);
  if (!invertibility_check(w).invertible)
    throw PreconditionError("weight is not invertible");
  if (const auto* c = std::get_if<rules::Constant>(&w.rule()))
    return constant_weight(1 / c->value, group);
  if (const auto* s = std::get_if<rules::ShiftedReciprocal>(&w.rule())) {
    if (is_identity(group, compose(group, a, s->shift))) return *s->base;
  }
  return WeightSpec(group,
                    rules::ShiftedReciprocal{std::make_shared<const WeightSpec>(w), a},
                    1 / w.declared_inf(), 1 / w.declared_sup());
}

std::vector<Run> superlevel_runs(const WeightSpec& w, const Rational& level, Window window) {
  if (w.group().is_product())
    throw SpecificationError("superlevel runs are defined on Z only");
  if (window.hi < window.lo) throw DomainError("empty window");
  std::vector<Run> runs;
  std::optional<std::int64_t> open;
  for (std::int64_t z = window.lo; z <= window.hi; ++z) {
    const bool above = w.eval(GroupElement(z)) > level;
    if (above && !open) open = z;
    if (!above && open) {
      runs.push_back({*open, z - *open});
      open.reset();
    }
  }
  if (open) runs.push_back({*open, window.hi + 1 - *open});
  return runs;
}

std::vector<std::int64_t> run_length_profile(const WeightSpec& w, const Rational& level,
                                             Window window) {
  std::vector<std::int64_t> lengths;
  for (const auto& r : superlevel_runs(w, level, window)) lengths.push_back(r.length);
  std::sort(lengths.begin(), lengths.end());
  return lengths;
}

}  // namespace wtchaos
