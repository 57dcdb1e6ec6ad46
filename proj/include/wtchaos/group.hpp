#pragma once

// Discrete groups Z and Z x Z_m with counting (Haar) measure.

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>

namespace wtchaos {

enum class GroupKind { IntegerLine, ProductWithCyclic };

struct GroupSpec {
  GroupKind kind = GroupKind::IntegerLine;
  std::int64_t modulus = 0;  // meaningful for ProductWithCyclic only

  static GroupSpec integers() { return {}; }
  static GroupSpec product_with_cyclic(std::int64_t m);

  bool is_product() const { return kind == GroupKind::ProductWithCyclic; }
  std::string name() const;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

/// A point (z) of Z or (z, c) of Z x Z_m.
struct GroupElement {
  std::int64_t z = 0;
  std::optional<std::int64_t> c;

  GroupElement() = default;
  constexpr explicit GroupElement(std::int64_t z_) : z(z_) {}
  constexpr GroupElement(std::int64_t z_, std::int64_t c_) : z(z_), c(c_) {}

  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

std::string to_string(const GroupElement& g);

/// Throws SpecificationError unless g is a valid element of group.
void check_member(const GroupSpec& group, const GroupElement& g);
bool is_member(const GroupSpec& group, const GroupElement& g);

GroupElement identity(const GroupSpec& group);
bool is_identity(const GroupSpec& group, const GroupElement& g);

GroupElement compose(const GroupSpec& group, const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupSpec& group, const GroupElement& g);

/// n-fold composition of a; negative n composes the inverse.
GroupElement power(const GroupSpec& group, const GroupElement& a, std::int64_t n);

using ElementSet = std::set<GroupElement>;

/// Counting measure.
std::int64_t measure(const ElementSet& s);

/// Right translate {x * a : x in s}.
ElementSet translate(const GroupSpec& group, const ElementSet& s, const GroupElement& a);

/// True when x lies in the cyclic orbit {g * a^i : i in Z}.
bool in_orbit(const GroupSpec& group, const GroupElement& g, const GroupElement& a,
              const GroupElement& x);

}  // namespace wtchaos
