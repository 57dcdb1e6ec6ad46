#pragma once

// Finite-horizon density estimates for subsets of N and the distributional
// functions F^n_{xy}(tau) = (1/n) card{1 <= j <= n-1 : d(T^j x, T^j y) < tau}.
//
// limsup/liminf are not computable; every estimate here is a tail-window extremum
// of the running density and is reported as one-sided evidence, never as a limit.

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wtchaos/sparse_vector.hpp"
#include "wtchaos/weighted_translation.hpp"

namespace wtchaos {

inline constexpr double kDefaultTailFraction = 0.1;

/// A subset of {1, ..., horizon}.
class IndexSet {
 public:
  IndexSet() = default;
  /// members must be strictly increasing and lie in [1, horizon].
  IndexSet(std::int64_t horizon, std::vector<std::int64_t> members);

  static IndexSet full(std::int64_t horizon);
  static IndexSet from_predicate(std::int64_t horizon,
                                 const std::function<bool(std::int64_t)>& keep);

  std::int64_t horizon() const { return horizon_; }
  const std::vector<std::int64_t>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(std::int64_t n) const;

  IndexSet complement() const;
  /// Members within [lo, hi].
  IndexSet restricted(std::int64_t lo, std::int64_t hi) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::int64_t horizon_ = 0;
  std::vector<std::int64_t> members_;
};

IndexSet set_union(const IndexSet& a, const IndexSet& b);

/// ceil(theta * horizon), clamped to [1, horizon].
std::int64_t tail_start(std::int64_t horizon, double theta);

/// d_n = card(A cap [1, n]) / n for n = 1..N (entry n-1).
Eigen::ArrayXd running_density(const IndexSet& a);

struct DensityEstimate {
  Eigen::ArrayXd running;
  double upper_est = 0.0;
  double lower_est = 0.0;
  double tail_fraction = kDefaultTailFraction;
  std::int64_t tail_start = 1;
  std::int64_t horizon = 0;
};

DensityEstimate density_estimate(const IndexSet& a, double theta = kDefaultTailFraction);

/// F^n(tau) from distances dist[j-1] = d_j; strict inequality d_j < tau.
double distributional_function(std::span<const double> dist, std::int64_t n, double tau);

struct DistributionalProfile {
  std::vector<double> tau_grid;
  std::int64_t horizon = 0;
  std::int64_t tail_start = 2;
  double tail_fraction = kDefaultTailFraction;
  /// Row n - 2 holds F^n(tau_k) for n = 2..horizon.
  Eigen::MatrixXd values;
  std::vector<double> f_star_est;
  std::vector<double> f_lower_est;
  std::vector<double> distances;  // d_j for j = 1..horizon-1

  double value(std::int64_t n, std::size_t tau_index) const {
    return values(static_cast<Eigen::Index>(n - 2), static_cast<Eigen::Index>(tau_index));
  }
  std::size_t tau_index(double tau) const;  // throws PreconditionError if absent
};

/// Profile from precomputed distances d_1..d_{N-1}.
DistributionalProfile profile_from_distances(std::vector<double> distances, std::int64_t horizon,
                                             std::vector<double> tau_grid,
                                             double theta = kDefaultTailFraction);

/// d_j = ||T^j x - T^j y||_p = ||T^j (x - y)||_p, j = 1..N-1.
template <class Scalar>
std::vector<double> pair_distances(const WeightedTranslation& t, const SparseVector<Scalar>& x,
                                   const SparseVector<Scalar>& y, std::int64_t horizon) {
  const SparseVector<Scalar> diff = x - y;
  const auto count = static_cast<std::size_t>(horizon - 1);
  if (diff.empty() || horizon < 2) return std::vector<double>(count, 0.0);
  std::vector<double> dist;
  dist.reserve(count);
  for (const auto& v : orbit_norm_series(t, diff, horizon - 1)) dist.push_back(v.value());
  return dist;
}

template <class Scalar>
DistributionalProfile pair_profile(const WeightedTranslation& t, const SparseVector<Scalar>& x,
                                   const SparseVector<Scalar>& y, std::int64_t horizon,
                                   std::vector<double> tau_grid,
                                   double theta = kDefaultTailFraction) {
  if (horizon < 2) throw DomainError("pair_profile requires N >= 2");
  return profile_from_distances(pair_distances(t, x, y, horizon), horizon, std::move(tau_grid),
                                theta);
}

enum class PairVerdict { EvidenceChaoticPair, Inconclusive };

std::string to_string(PairVerdict v);

struct ScrambledPairVerdict {
  PairVerdict verdict = PairVerdict::Inconclusive;
  double epsilon = 0.0, tau = 0.0;
  double delta_low = 0.0, delta_high = 0.0;
  double f_lower_at_epsilon = 0.0;
  double f_star_at_tau = 0.0;
};

/// evidence_chaotic_pair iff F_lower_est(eps) <= delta_low and F_star_est(tau) >= 1 - delta_high.
ScrambledPairVerdict scrambled_pair_verdict(const DistributionalProfile& profile, double epsilon,
                                            double tau, double delta_low, double delta_high);

}  // namespace wtchaos
