#pragma once

// Experiment configuration (TOML) and the objects built from it.
//
//   group = "Z"                # or "ZxZm" together with m = <int>
//   a = -1                     # or [z, c] on Z x Z_m
//   p = 2
//   N = 20                     # criterion / synthesis horizon
//   orbit_horizon = 200        # orbit, density and pair analyses (default N)
//   mode = "rational"          # or "log"
//   weight = "cubic_runs"      # shorthand for [weight] rule = "cubic_runs"
//
// See README.md for the full key list.

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wtchaos/group.hpp"
#include "wtchaos/rational.hpp"
#include "wtchaos/sparse_vector.hpp"
#include "wtchaos/weighted_translation.hpp"
#include "wtchaos/weights.hpp"

namespace wtchaos {

struct VectorEntry {
  GroupElement position;
  double re = 0.0;
  double im = 0.0;
};

enum class VectorInit { Characteristic, Synthesized, Entries };

struct ExperimentConfig {
  GroupSpec group;
  GroupElement a;
  WeightSpec weight = cubic_runs_weight();
  nlohmann::json weight_echo;
  double p = 2.0;
  std::int64_t horizon = 0;
  std::int64_t orbit_horizon = 0;
  bool orbit_horizon_explicit = false;
  ArithmeticMode mode = ArithmeticMode::Rational;
  ExactOptions exact;
  double theta = 0.1;

  Window window{0, 0};
  std::optional<std::vector<std::int64_t>> b_members;

  std::vector<double> deltas{0.1};
  std::vector<double> taus{1e3};
  std::vector<double> epsilons{0.1};
  double delta_low = 0.2;
  double delta_high = 0.2;
  double near_zero = 0.1;
  double unbounded = 1e3;

  ElementSet k;
  VectorInit vector_init = VectorInit::Characteristic;
  GroupElement char_point;
  std::vector<VectorEntry> entries;
  std::vector<std::int64_t> mirror_samples;

  std::string output_dir = ".";

  WeightedTranslation make_operator() const;
  /// Canonical JSON echo; re-serialising it does not change it.
  nlohmann::json echo() const;
  /// FNV-1a 64-bit hash of the canonical echo, in hex.
  std::string content_hash() const;
};

/// Parses TOML text. base_dir resolves relative weight.table_file paths.
/// Throws ConfigError naming the offending key.
ExperimentConfig parse_config(std::string_view text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

/// Overrides N (and the orbit horizon when it was not set explicitly).
void override_horizon(ExperimentConfig& cfg, std::int64_t horizon);

/// The configured initial vector; "synthesized" needs the vector passed in.
ComplexVector configured_vector(const ExperimentConfig& cfg,
                                const ComplexVector* synthesized = nullptr);

}  // namespace wtchaos
