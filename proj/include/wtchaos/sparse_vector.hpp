#pragma once

// Finitely supported functions on a discrete group, templated on the scalar.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <type_traits>
#include <utility>

#include "wtchaos/errors.hpp"
#include "wtchaos/group.hpp"
#include "wtchaos/log_value.hpp"
#include "wtchaos/rational.hpp"

namespace wtchaos {

template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static bool is_zero(double v) { return v == 0.0; }
  static double modulus(double v) { return std::abs(v); }
  static LogValue log_modulus(double v) { return LogValue::from_value(std::abs(v)); }
  static bool is_nonnegative_real(double v) { return v >= 0.0; }
};

template <>
struct ScalarTraits<std::complex<double>> {
  using C = std::complex<double>;
  static bool is_zero(const C& v) { return v == C(0.0, 0.0); }
  static C modulus(const C& v) { return C(std::abs(v), 0.0); }
  static LogValue log_modulus(const C& v) { return LogValue::from_value(std::abs(v)); }
  static bool is_nonnegative_real(const C& v) { return v.imag() == 0.0 && v.real() >= 0.0; }
};

template <>
struct ScalarTraits<Rational> {
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
  static Rational modulus(const Rational& v) { return abs(v); }
  static LogValue log_modulus(const Rational& v) { return LogValue::from_rational(abs(v)); }
  static bool is_nonnegative_real(const Rational& v) { return sgn(v) >= 0; }
};

/// Finitely supported vector; zero entries are never stored.
template <class Scalar>
class SparseVector {
 public:
  using scalar_type = Scalar;
  using Storage = std::map<GroupElement, Scalar>;
  using const_iterator = typename Storage::const_iterator;

  SparseVector() = default;
  SparseVector(std::initializer_list<std::pair<const GroupElement, Scalar>> entries) {
    for (const auto& [g, v] : entries) add(g, v);
  }

  static SparseVector indicator(const GroupElement& g, Scalar value = Scalar(1)) {
    SparseVector out;
    out.set(g, std::move(value));
    return out;
  }

  template <class Range>
  static SparseVector indicator_of(const Range& set, Scalar value = Scalar(1)) {
    SparseVector out;
    for (const auto& g : set) out.set(g, value);
    return out;
  }

  Scalar get(const GroupElement& g) const {
    const auto it = entries_.find(g);
    return it == entries_.end() ? Scalar(0) : it->second;
  }

  void set(const GroupElement& g, Scalar value) {
    if (ScalarTraits<Scalar>::is_zero(value))
      entries_.erase(g);
    else
      entries_[g] = std::move(value);
  }

  void add(const GroupElement& g, const Scalar& value) {
    auto it = entries_.find(g);
    if (it == entries_.end()) {
      if (!ScalarTraits<Scalar>::is_zero(value)) entries_.emplace(g, value);
      return;
    }
    it->second += value;
    if (ScalarTraits<Scalar>::is_zero(it->second)) entries_.erase(it);
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }
  const Storage& entries() const { return entries_; }

  ElementSet support() const {
    ElementSet s;
    for (const auto& [g, v] : entries_) s.insert(g);
    return s;
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  Storage entries_;
};

using ComplexVector = SparseVector<std::complex<double>>;
using RealVector = SparseVector<double>;
using RationalVector = SparseVector<Rational>;

template <class Scalar>
SparseVector<Scalar> operator+(SparseVector<Scalar> lhs, const SparseVector<Scalar>& rhs) {
  for (const auto& [g, v] : rhs) lhs.add(g, v);
  return lhs;
}

template <class Scalar>
SparseVector<Scalar> operator-(SparseVector<Scalar> lhs, const SparseVector<Scalar>& rhs) {
  for (const auto& [g, v] : rhs) lhs.add(g, Scalar(-v));
  return lhs;
}

template <class Scalar>
SparseVector<Scalar> operator*(const Scalar& s, const SparseVector<Scalar>& f) {
  SparseVector<Scalar> out;
  for (const auto& [g, v] : f) out.set(g, Scalar(s * v));
  return out;
}

/// Entrywise modulus |f|.
template <class Scalar>
SparseVector<Scalar> abs(const SparseVector<Scalar>& f) {
  SparseVector<Scalar> out;
  for (const auto& [g, v] : f) out.set(g, ScalarTraits<Scalar>::modulus(v));
  return out;
}

/// Restriction of f to the elements accepted by keep.
template <class Scalar, class Predicate>
SparseVector<Scalar> restrict_support(const SparseVector<Scalar>& f, Predicate keep) {
  SparseVector<Scalar> out;
  for (const auto& [g, v] : f)
    if (keep(g)) out.set(g, v);
  return out;
}

/// Restriction of f to the cyclic orbit {g * a^i}; on a discrete group the atomic
/// pieces of a support are singletons, and orbits are what the dynamics sees.
template <class Scalar>
SparseVector<Scalar> restrict_to_orbit(const GroupSpec& group, const SparseVector<Scalar>& f,
                                       const GroupElement& g, const GroupElement& a) {
  return restrict_support(f, [&](const GroupElement& x) { return in_orbit(group, g, a, x); });
}

/// l^p norm in log space.
template <class Scalar>
LogValue lp_norm(const SparseVector<Scalar>& f, double p) {
  std::vector<LogValue> terms;
  terms.reserve(f.size());
  for (const auto& [g, v] : f) terms.push_back(pow(ScalarTraits<Scalar>::log_modulus(v), p));
  return pow(log_sum_exp(terms), 1.0 / p);
}

/// Rational l^p norm raised to the p-th power, for integer p.
inline Rational lp_norm_pow_exact(const RationalVector& f, long p) {
  Rational total = 0;
  for (const auto& [g, v] : f) total += pow_int(abs(v), p);
  return total;
}

template <class Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Dense view of f on the window [lo, lo + size) of Z.
template <class Scalar>
  requires std::is_floating_point_v<Scalar> || std::is_same_v<Scalar, std::complex<double>>
DenseVector<Scalar> to_dense(const SparseVector<Scalar>& f, std::int64_t lo, Eigen::Index size) {
  DenseVector<Scalar> out = DenseVector<Scalar>::Zero(size);
  for (const auto& [g, v] : f) {
    if (g.c) throw SpecificationError("dense views are defined on Z only");
    const std::int64_t i = g.z - lo;
    if (i < 0 || i >= size) throw DomainError("support point " + to_string(g) + " outside window");
    out(static_cast<Eigen::Index>(i)) = v;
  }
  return out;
}

template <class Derived>
auto from_dense(const Eigen::MatrixBase<Derived>& v, std::int64_t lo) {
  using Scalar = typename Derived::Scalar;
  SparseVector<Scalar> out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out.set(GroupElement(lo + i), v(i));
  return out;
}

}  // namespace wtchaos
