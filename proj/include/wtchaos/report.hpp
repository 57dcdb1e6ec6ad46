#pragma once

// Subcommand dispatch and serialisation. Every subcommand is a thin adapter over the
// analysis modules: it gathers results, renders JSON/CSV and writes them once at the end.

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wtchaos/config.hpp"
#include "wtchaos/dccw.hpp"
#include "wtchaos/density.hpp"
#include "wtchaos/div.hpp"
#include "wtchaos/log_value.hpp"

namespace wtchaos {

inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest round-trip decimal; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);

nlohmann::json number_json(double v);
nlohmann::json to_json(const LogValue& v);
nlohmann::json to_json(const GroupElement& g);
nlohmann::json to_json(const IndexSet& s);
nlohmann::json to_json(const DensityEstimate& d);
nlohmann::json to_json(const ConditionIReport& r);
nlohmann::json to_json(const ConditionIIReport& r);
nlohmann::json to_json(const SynthesisPlan& plan);
nlohmann::json to_json(const PlanInvariantReport& r);
nlohmann::json to_json(const DccVerification& v);
nlohmann::json to_json(const IrregularityEvidence& e);
nlohmann::json to_json(const ScrambledPairVerdict& v);
nlohmann::json to_json(const MirrorReport& r);

/// dccw_evidence, condition_ii_only, condition_i_only or no_evidence.
std::string overall_verdict(const ConditionIReport& ci, const ConditionIIReport& cii);

const std::vector<std::string>& subcommand_names();

/// Files produced by one run, keyed by file name. Contents are fully rendered before
/// anything is written.
using Artifacts = std::map<std::string, std::string>;

/// Runs the analysis behind cmd and renders its artifacts (no manifest, no I/O).
Artifacts render_subcommand(const std::string& cmd, const ExperimentConfig& cfg);

/// Writes the artifacts and manifest.json into cfg.output_dir.
void write_artifacts(const ExperimentConfig& cfg, const std::string& cmd, const Artifacts& files);

/// Renders and writes. Exit codes: 0 success, 1 config or precondition failure,
/// 2 numeric-range failure. Diagnostics go to err, a one-line summary to out.
int run_subcommand(const std::string& cmd, const ExperimentConfig& cfg, std::ostream& out,
                   std::ostream& err);

}  // namespace wtchaos
