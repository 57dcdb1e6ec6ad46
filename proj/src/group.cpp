#include "wtchaos/group.hpp"

#include <numeric>

#include "wtchaos/errors.hpp"

namespace wtchaos {

namespace {

std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(x, y, &out)) throw NumericRangeError("group coordinate overflow");
  return out;
}

std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(x, y, &out)) throw NumericRangeError("group coordinate overflow");
  return out;
}

std::int64_t mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

}  // namespace

GroupSpec GroupSpec::product_with_cyclic(std::int64_t m) {
  if (m < 2) throw SpecificationError("cyclic modulus must be >= 2");
  return {GroupKind::ProductWithCyclic, m};
}

std::string GroupSpec::name() const {
  return is_product() ? "ZxZ" + std::to_string(modulus) : "Z";
}

std::string to_string(const GroupElement& g) {
  if (!g.c) return "(" + std::to_string(g.z) + ")";
  return "(" + std::to_string(g.z) + "," + std::to_string(*g.c) + ")";
}

bool is_member(const GroupSpec& group, const GroupElement& g) {
  if (!group.is_product()) return !g.c.has_value();
  return g.c.has_value() && *g.c >= 0 && *g.c < group.modulus;
}

void check_member(const GroupSpec& group, const GroupElement& g) {
  if (!is_member(group, g))
    throw SpecificationError("element " + to_string(g) + " does not belong to group " +
                             group.name());
}

GroupElement identity(const GroupSpec& group) {
  return group.is_product() ? GroupElement(0, 0) : GroupElement(0);
}

bool is_identity(const GroupSpec& group, const GroupElement& g) { return g == identity(group); }

GroupElement compose(const GroupSpec& group, const GroupElement& g, const GroupElement& h) {
  check_member(group, g);
  check_member(group, h);
  const std::int64_t z = checked_add(g.z, h.z);
  if (!group.is_product()) return GroupElement(z);
  return {z, mod(*g.c + *h.c, group.modulus)};
}

GroupElement inverse(const GroupSpec& group, const GroupElement& g) {
  check_member(group, g);
  if (g.z == INT64_MIN) throw NumericRangeError("group coordinate overflow");
  if (!group.is_product()) return GroupElement(-g.z);
  return {-g.z, mod(-*g.c, group.modulus)};
}

GroupElement power(const GroupSpec& group, const GroupElement& a, std::int64_t n) {
  check_member(group, a);
  const std::int64_t z = checked_mul(a.z, n);
  if (!group.is_product()) return GroupElement(z);
  const std::int64_t cn = mod(n, group.modulus);
  return {z, mod(*a.c * cn, group.modulus)};
}

std::int64_t measure(const ElementSet& s) { return static_cast<std::int64_t>(s.size()); }

ElementSet translate(const GroupSpec& group, const ElementSet& s, const GroupElement& a) {
  ElementSet out;
  for (const auto& x : s) out.insert(compose(group, x, a));
  return out;
}

bool in_orbit(const GroupSpec& group, const GroupElement& g, const GroupElement& a,
              const GroupElement& x) {
  check_member(group, g);
  check_member(group, a);
  check_member(group, x);
  const std::int64_t dz = x.z - g.z;
  if (!group.is_product()) {
    if (a.z == 0) return dz == 0;
    return dz % a.z == 0;
  }
  const std::int64_t dc = mod(*x.c - *g.c, group.modulus);
  if (a.z != 0) {
    if (dz % a.z != 0) return false;
    const std::int64_t i = dz / a.z;
    return mod(mod(i, group.modulus) * *a.c, group.modulus) == dc;
  }
  if (dz != 0) return false;
  for (std::int64_t i = 0; i < group.modulus; ++i)
    if (mod(i * *a.c, group.modulus) == dc) return true;
  return false;
}

}  // namespace wtchaos
