#include "wtchaos/density.hpp"

#include <algorithm>
#include <cmath>

#include "wtchaos/errors.hpp"

namespace wtchaos {

IndexSet::IndexSet(std::int64_t horizon, std::vector<std::int64_t> members)
    : horizon_(horizon), members_(std::move(members)) {
  if (horizon_ < 0) throw DomainError("negative horizon");
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] < 1 || members_[i] > horizon_)
      throw DomainError("index " + std::to_string(members_[i]) + " outside [1, " +
                        std::to_string(horizon_) + "]");
    if (i > 0 && members_[i] <= members_[i - 1])
      throw DomainError("index set members must be strictly increasing");
  }
}

IndexSet IndexSet::full(std::int64_t horizon) {
  return from_predicate(horizon, [](std::int64_t) { return true; });
}

IndexSet IndexSet::from_predicate(std::int64_t horizon,
                                  const std::function<bool(std::int64_t)>& keep) {
  std::vector<std::int64_t> members;
  for (std::int64_t n = 1; n <= horizon; ++n)
    if (keep(n)) members.push_back(n);
  return IndexSet(horizon, std::move(members));
}

bool IndexSet::contains(std::int64_t n) const {
  return std::binary_search(members_.begin(), members_.end(), n);
}

IndexSet IndexSet::complement() const {
  return from_predicate(horizon_, [this](std::int64_t n) { return !contains(n); });
}

IndexSet IndexSet::restricted(std::int64_t lo, std::int64_t hi) const {
  std::vector<std::int64_t> kept;
  for (auto n : members_)
    if (n >= lo && n <= hi) kept.push_back(n);
  return IndexSet(horizon_, std::move(kept));
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  if (a.horizon() != b.horizon()) throw DomainError("index sets have different horizons");
  std::vector<std::int64_t> out;
  std::set_union(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                 std::back_inserter(out));
  return IndexSet(a.horizon(), std::move(out));
}

std::int64_t tail_start(std::int64_t horizon, double theta) {
  const auto start = static_cast<std::int64_t>(std::ceil(theta * static_cast<double>(horizon)));
  return std::clamp<std::int64_t>(start, 1, std::max<std::int64_t>(horizon, 1));
}

Eigen::ArrayXd running_density(const IndexSet& a) {
  Eigen::ArrayXd running(a.horizon());
  std::size_t next = 0;
  std::int64_t count = 0;
  for (std::int64_t n = 1; n <= a.horizon(); ++n) {
    if (next < a.size() && a.members()[next] == n) {
      ++count;
      ++next;
    }
    running(n - 1) = static_cast<double>(count) / static_cast<double>(n);
  }
  return running;
}

DensityEstimate density_estimate(const IndexSet& a, double theta) {
  if (a.horizon() < 1) throw DomainError("density_estimate: empty horizon");
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("tail fraction must lie in (0, 1)");
  DensityEstimate est;
  est.running = running_density(a);
  est.horizon = a.horizon();
  est.tail_fraction = theta;
  est.tail_start = tail_start(a.horizon(), theta);
  const auto tail = est.running.tail(a.horizon() - est.tail_start + 1);
  est.upper_est = tail.maxCoeff();
  est.lower_est = tail.minCoeff();
  return est;
}

double distributional_function(std::span<const double> dist, std::int64_t n, double tau) {
  if (n < 2) throw DomainError("distributional_function requires n >= 2");
  if (static_cast<std::int64_t>(dist.size()) < n - 1)
    throw DomainError("distributional_function needs n - 1 distances");
  std::int64_t count = 0;
  for (std::int64_t j = 1; j <= n - 1; ++j)
    if (dist[static_cast<std::size_t>(j - 1)] < tau) ++count;
  return static_cast<double>(count) / static_cast<double>(n);
}

std::size_t DistributionalProfile::tau_index(double tau) const {
  const auto it = std::find(tau_grid.begin(), tau_grid.end(), tau);
  if (it == tau_grid.end())
    throw PreconditionError("threshold " + std::to_string(tau) + " is not in the profile grid");
  return static_cast<std::size_t>(it - tau_grid.begin());
}

DistributionalProfile profile_from_distances(std::vector<double> distances, std::int64_t horizon,
                                             std::vector<double> tau_grid, double theta) {
  if (horizon < 2) throw DomainError("profile requires N >= 2");
  if (static_cast<std::int64_t>(distances.size()) < horizon - 1)
    throw DomainError("profile needs N - 1 distances");
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("tail fraction must lie in (0, 1)");
  for (double tau : tau_grid)
    if (!(tau > 0.0)) throw DomainError("tau grid entries must be positive");

  DistributionalProfile prof;
  prof.horizon = horizon;
  prof.tail_fraction = theta;
  prof.tail_start = std::max<std::int64_t>(2, tail_start(horizon, theta));
  prof.values = Eigen::MatrixXd::Zero(horizon - 1, static_cast<Eigen::Index>(tau_grid.size()));
  for (std::size_t k = 0; k < tau_grid.size(); ++k) {
    std::int64_t count = 0;
    for (std::int64_t n = 2; n <= horizon; ++n) {
      if (distances[static_cast<std::size_t>(n - 2)] < tau_grid[k]) ++count;
      prof.values(n - 2, static_cast<Eigen::Index>(k)) =
          static_cast<double>(count) / static_cast<double>(n);
    }
    const auto tail =
        prof.values.col(static_cast<Eigen::Index>(k)).tail(horizon - prof.tail_start + 1);
    prof.f_star_est.push_back(tail.maxCoeff());
    prof.f_lower_est.push_back(tail.minCoeff());
  }
  distances.resize(static_cast<std::size_t>(horizon - 1));
  prof.distances = std::move(distances);
  prof.tau_grid = std::move(tau_grid);
  return prof;
}

std::string to_string(PairVerdict v) {
  return v == PairVerdict::EvidenceChaoticPair ? "evidence_chaotic_pair" : "inconclusive";
}

ScrambledPairVerdict scrambled_pair_verdict(const DistributionalProfile& profile, double epsilon,
                                            double tau, double delta_low, double delta_high) {
  ScrambledPairVerdict out;
  out.epsilon = epsilon;
  out.tau = tau;
  out.delta_low = delta_low;
  out.delta_high = delta_high;
  out.f_lower_at_epsilon = profile.f_lower_est[profile.tau_index(epsilon)];
  out.f_star_at_tau = profile.f_star_est[profile.tau_index(tau)];
  out.verdict = (out.f_lower_at_epsilon <= delta_low && out.f_star_at_tau >= 1.0 - delta_high)
                    ? PairVerdict::EvidenceChaoticPair
                    : PairVerdict::Inconclusive;
  return out;
}

}  // namespace wtchaos
