#include "wtchaos/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "wtchaos/errors.hpp"

namespace wtchaos {

namespace {

using json = nlohmann::json;

std::string mode_name(ArithmeticMode m) { return m == ArithmeticMode::Rational ? "rational" : "log"; }

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : width_(header.size()) { row(header); }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw InvariantViolation("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ << ',';
      text_ << cells[i];
    }
    text_ << '\n';
  }
  std::string str() const { return text_.str(); }

 private:
  std::size_t width_;
  std::ostringstream text_;
};

std::string log_text(const LogValue& v) { return format_double(v.log_or_neg_inf()); }
std::string value_text(const LogValue& v) { return format_double(v.value()); }

std::vector<std::string> position_header(const GroupSpec& group) {
  if (group.is_product()) return {"z", "c"};
  return {"z"};
}

std::vector<std::string> position_cells(const GroupElement& g) {
  if (g.c) return {std::to_string(g.z), std::to_string(*g.c)};
  return {std::to_string(g.z)};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ||T^n y||_p from an exact p-th power.
LogValue root_of(const Rational& pow_p, double p) {
  if (sgn(pow_p) == 0) return LogValue::zero();
  return LogValue::from_log(log_of(pow_p) / p);
}

double root_value(const Rational& pow_p, double p) {
  const double v = to_double(pow_p);
  if (!std::isfinite(v)) return std::exp(log_of(pow_p) / p);
  return p == 2.0 ? std::sqrt(v) : (p == 1.0 ? v : std::pow(v, 1.0 / p));
}

std::optional<RationalVector> as_rational(const ComplexVector& v) {
  RationalVector out;
  for (const auto& [g, z] : v) {
    if (z.imag() != 0.0 || !std::isfinite(z.real())) return std::nullopt;
    out.set(g, Rational(z.real()));
  }
  return out;
}

// Lazily evaluated pipeline shared by the subcommands.
class Pipeline {
 public:
  explicit Pipeline(const ExperimentConfig& cfg) : cfg_(cfg), t_(cfg.make_operator()) {}

  const ExperimentConfig& cfg() const { return cfg_; }
  const WeightedTranslation& op() const { return t_; }

  IndexSet b() const {
    if (!cfg_.b_members) return IndexSet::full(cfg_.horizon);
    std::vector<std::int64_t> kept;
    for (const auto n : *cfg_.b_members)
      if (n <= cfg_.horizon) kept.push_back(n);
    if (kept.empty()) throw PreconditionError("search.B has no members in [1, N]");
    return IndexSet(cfg_.horizon, std::move(kept));
  }

  const ConditionIReport& condition_i() {
    if (!ci_) ci_ = condition_i_diagnostic(t_, cfg_.k, cfg_.orbit_horizon, cfg_.deltas, cfg_.theta);
    return *ci_;
  }

  // Condition (i) at the synthesis horizon; supplies the set A for verification.
  const ConditionIReport& condition_i_at_n() {
    if (!ci_n_) ci_n_ = condition_i_diagnostic(t_, cfg_.k, cfg_.horizon, cfg_.deltas, cfg_.theta);
    return *ci_n_;
  }

  const ConditionIIReport& condition_ii() {
    if (!cii_) cii_ = condition_ii_diagnostic(t_, cfg_.horizon, cfg_.window, b(), cfg_.mode, cfg_.exact);
    return *cii_;
  }

  const SynthesizedVector& synthesized() {
    if (!syn_) {
      const auto& cii = condition_ii();
      const SynthesisPlan plan =
          build_synthesis_plan(t_, cii.b, cii.maximisers(), cfg_.horizon, cfg_.mode, cfg_.exact);
      syn_ = synthesize_vector(plan, t_.p());
    }
    return *syn_;
  }

  const PlanInvariantReport& invariants() {
    if (!inv_) inv_ = check_plan_invariants(synthesized().plan);
    return *inv_;
  }

  const DccVerification& verification() {
    if (!ver_) {
      const IndexSet& a = condition_i_at_n().per_delta.front().a;
      ver_ = verify_dcc(t_, synthesized(), {cfg_.k}, a, cfg_.horizon, cfg_.unbounded, cfg_.mode,
                        cfg_.exact);
    }
    return *ver_;
  }

  ComplexVector vector() {
    if (cfg_.vector_init == VectorInit::Synthesized) return synthesized().y;
    return configured_vector(cfg_);
  }

 private:
  const ExperimentConfig& cfg_;
  WeightedTranslation t_;
  std::optional<ConditionIReport> ci_, ci_n_;
  std::optional<ConditionIIReport> cii_;
  std::optional<SynthesizedVector> syn_;
  std::optional<PlanInvariantReport> inv_;
  std::optional<DccVerification> ver_;
};

struct OrbitSeries {
  std::vector<LogValue> norms;
  std::optional<std::vector<Rational>> pow_exact;  // ||T^n y||_p^p
};

OrbitSeries orbit_series(Pipeline& pipe, std::int64_t horizon) {
  const ExperimentConfig& cfg = pipe.cfg();
  const ComplexVector y = pipe.vector();
  if (y.empty()) throw PreconditionError("the configured vector is zero");
  OrbitSeries out;
  if (cfg.mode == ArithmeticMode::Rational && pipe.op().integer_p() &&
      cfg.vector_init != VectorInit::Synthesized) {
    if (const auto exact = as_rational(y)) {
      out.pow_exact = orbit_norm_pow_series_exact(pipe.op(), *exact, horizon, cfg.exact);
      for (const auto& q : *out.pow_exact) out.norms.push_back(root_of(q, cfg.p));
      return out;
    }
  }
  out.norms = orbit_norm_series(pipe.op(), y, horizon);
  return out;
}

std::string orbit_csv(const OrbitSeries& s, double p) {
  const bool exact = s.pow_exact.has_value();
  Csv csv(exact ? std::vector<std::string>{"n", "value", "log_value", "norm_pow_p_exact"}
                : std::vector<std::string>{"n", "value", "log_value"});
  for (std::size_t i = 0; i < s.norms.size(); ++i) {
    const std::string n = std::to_string(i + 1);
    if (exact) {
      const Rational& q = (*s.pow_exact)[i];
      csv.row({n, format_double(root_value(q, p)), log_text(s.norms[i]), to_string(q)});
    } else {
      csv.row({n, value_text(s.norms[i]), log_text(s.norms[i])});
    }
  }
  return csv.str();
}

std::string s_n_csv(const ConditionIReport& r) {
  Csv csv({"n", "value", "log_value"});
  for (std::size_t i = 0; i < r.s.size(); ++i)
    csv.row({std::to_string(i + 1), value_text(r.s[i]), log_text(r.s[i])});
  return csv.str();
}

std::string u_n_csv(const ConditionIIReport& r, const GroupSpec& group) {
  Csv csv(concat(concat({"n"}, position_header(group)),
                 {"interval_start", "value", "log_value", "exact", "partial_sum", "partial_sum_log",
                  "partial_sum_exact"}));
  for (const auto& e : r.entries) {
    csv.row(concat(concat({std::to_string(e.n)}, position_cells(e.g)),
                   {e.interval_start ? std::to_string(*e.interval_start) : "",
                    value_text(e.u), log_text(e.u), e.u_exact ? to_string(*e.u_exact) : "",
                    value_text(e.partial_sum), log_text(e.partial_sum),
                    e.partial_sum_exact ? to_string(*e.partial_sum_exact) : ""}));
  }
  return csv.str();
}

std::string c_phi_csv(const SynthesisPlan& plan) {
  Csv csv({"n", "value", "log_value", "c_squared_exact"});
  for (const auto& e : plan.entries)
    csv.row({std::to_string(e.n), value_text(e.c_phi), log_text(e.c_phi),
             e.c_squared_exact ? to_string(*e.c_squared_exact) : ""});
  return csv.str();
}

std::string synthesized_csv(const SynthesizedVector& s, const GroupSpec& group) {
  Csv csv(concat(position_header(group), {"re", "im", "abs_squared_exact"}));
  for (const auto& [g, v] : s.y) {
    std::string sq;
    if (s.squared_exact) sq = to_string(s.squared_exact->get(g));
    csv.row(concat(position_cells(g), {format_double(v.real()), format_double(v.imag()), sq}));
  }
  return csv.str();
}

std::string lower_bound_csv(const DccVerification& v) {
  Csv csv({"n", "norm", "norm_log", "bound", "bound_log", "passed", "exact"});
  for (const auto& e : v.lower_bounds)
    csv.row({std::to_string(e.n), value_text(e.norm), log_text(e.norm), value_text(e.bound),
             log_text(e.bound), e.passed ? "true" : "false", e.exact ? "true" : "false"});
  return csv.str();
}

std::string phi_csv(Pipeline& pipe) {
  const ExperimentConfig& cfg = pipe.cfg();
  const bool exact = cfg.mode == ArithmeticMode::Rational;
  std::vector<std::string> header = concat({"n"}, position_header(cfg.group));
  header = concat(header, exact ? std::vector<std::string>{"value", "log_value", "exact"}
                                : std::vector<std::string>{"value", "log_value"});
  Csv csv(header);
  for (const auto& x : cfg.k) {
    CocycleWalker walker(pipe.op(), x);
    std::optional<ExactCocycleWalker> exact_walker;
    if (exact) exact_walker.emplace(pipe.op(), x, cfg.exact);
    for (std::int64_t n = 1; n <= cfg.horizon; ++n) {
      const LogValue v = LogValue::from_log(walker.advance());
      auto row = concat(concat({std::to_string(n)}, position_cells(x)), {value_text(v), log_text(v)});
      if (exact) {
        const Rational& q = exact_walker->advance();
        row[row.size() - 2] = format_double(to_double(q));
        row.push_back(to_string(q));
      }
      csv.row(row);
    }
  }
  return csv.str();
}

std::string density_csv(const IrregularityEvidence& e) {
  Csv csv({"n", "norm", "norm_log", "near_zero", "unbounded", "near_zero_running",
           "unbounded_running"});
  for (std::size_t i = 0; i < e.norms.size(); ++i) {
    const auto n = static_cast<std::int64_t>(i + 1);
    const auto k = static_cast<Eigen::Index>(i);
    csv.row({std::to_string(n), value_text(e.norms[i]), log_text(e.norms[i]),
             e.near_zero.contains(n) ? "1" : "0", e.unbounded.contains(n) ? "1" : "0",
             format_double(e.near_zero_density.running(k)),
             format_double(e.unbounded_density.running(k))});
  }
  return csv.str();
}

std::vector<double> tau_grid(const ExperimentConfig& cfg) {
  std::vector<double> grid = cfg.taus;
  grid.insert(grid.end(), cfg.epsilons.begin(), cfg.epsilons.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

struct PairResult {
  DistributionalProfile profile;
  std::vector<ScrambledPairVerdict> verdicts;
};

PairResult pair_result(Pipeline& pipe) {
  const ExperimentConfig& cfg = pipe.cfg();
  PairResult r;
  r.profile = pair_profile(pipe.op(), pipe.vector(), ComplexVector{}, cfg.orbit_horizon, tau_grid(cfg),
                           cfg.theta);
  for (const double eps : cfg.epsilons)
    for (const double tau : cfg.taus)
      r.verdicts.push_back(scrambled_pair_verdict(r.profile, eps, tau, cfg.delta_low, cfg.delta_high));
  return r;
}

json pair_json(const PairResult& r) {
  json j;
  j["horizon"] = r.profile.horizon;
  j["tail_start"] = r.profile.tail_start;
  j["tail_fraction"] = r.profile.tail_fraction;
  json per_tau = json::array();
  for (std::size_t k = 0; k < r.profile.tau_grid.size(); ++k)
    per_tau.push_back({{"tau", number_json(r.profile.tau_grid[k])},
                       {"f_star_est", number_json(r.profile.f_star_est[k])},
                       {"f_lower_est", number_json(r.profile.f_lower_est[k])}});
  j["distributional_estimates"] = per_tau;
  json verdicts = json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
  j["verdicts"] = verdicts;
  j["verdict"] = to_string(r.verdicts.front().verdict);
  return j;
}

std::string f_csv(const DistributionalProfile& p) {
  Csv csv({"n", "tau", "F_value"});
  for (std::int64_t n = 2; n <= p.horizon; ++n)
    for (std::size_t k = 0; k < p.tau_grid.size(); ++k)
      csv.row({std::to_string(n), format_double(p.tau_grid[k]), format_double(p.value(n, k))});
  return csv.str();
}

MirrorReport mirror_report(Pipeline& pipe) {
  const ExperimentConfig& cfg = pipe.cfg();
  std::optional<WeightSpec> base;
  if (const auto* m = std::get_if<rules::MirrorProduct>(&cfg.weight.rule()))
    base = *m->base;
  else if (!cfg.group.is_product())
    base = cfg.weight;
  else
    throw PreconditionError("mirror-check needs a mirror_product weight or a weight on Z");
  return mirror_two_component_check(*base, cfg.orbit_horizon, cfg.mirror_samples, cfg.p,
                                    cfg.near_zero, cfg.unbounded, cfg.theta);
}

std::string mirror_csv(const MirrorReport& r) {
  Csv csv({"n", "component0", "component0_log", "component1", "component1_log"});
  for (std::size_t i = 0; i < r.component0.norms.size(); ++i)
    csv.row({std::to_string(i + 1), value_text(r.component0.norms[i]), log_text(r.component0.norms[i]),
             value_text(r.component1.norms[i]), log_text(r.component1.norms[i])});
  return csv.str();
}

json header_json(const ExperimentConfig& cfg) {
  return {{"config_hash", cfg.content_hash()}, {"mode", mode_name(cfg.mode)}};
}

json dccw_json(Pipeline& pipe) {
  json j = header_json(pipe.cfg());
  j["condition_i"] = to_json(pipe.condition_i());
  j["condition_ii"] = to_json(pipe.condition_ii());
  j["verdict"] = overall_verdict(pipe.condition_i(), pipe.condition_ii());
  return j;
}

json synthesis_json(Pipeline& pipe) {
  const SynthesizedVector& s = pipe.synthesized();
  json j = to_json(s.plan);
  j["invariants"] = to_json(pipe.invariants());
  j["vector"] = {{"support_size", s.y.size()},
                 {"norm", to_json(s.norm)},
                 {"coefficient_sum", to_json(s.coefficient_sum)},
                 {"norm_bound_holds", s.norm_bound_holds},
                 {"collision", s.collision_flag()}};
  json collisions = json::array();
  for (const auto& g : s.collisions) collisions.push_back(to_json(g));
  j["vector"]["collisions"] = collisions;
  return j;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json to_json(const LogValue& v) {
  return {{"log_value", number_json(v.log_or_neg_inf())}, {"value", number_json(v.value())}};
}

json to_json(const GroupElement& g) {
  if (g.c) return json::array({g.z, *g.c});
  return g.z;
}

json to_json(const IndexSet& s) {
  return {{"horizon", s.horizon()}, {"size", s.size()}, {"members", s.members()}};
}

json to_json(const DensityEstimate& d) {
  return {{"upper_est", number_json(d.upper_est)},
          {"lower_est", number_json(d.lower_est)},
          {"tail_fraction", d.tail_fraction},
          {"tail_start", d.tail_start},
          {"horizon", d.horizon}};
}

json to_json(const ConditionIReport& r) {
  json j;
  json k = json::array();
  for (const auto& g : r.k) k.push_back(to_json(g));
  j["K"] = k;
  j["horizon"] = r.s.size();
  json per = json::array();
  for (const auto& d : r.per_delta)
    per.push_back({{"delta", number_json(d.delta)}, {"A", to_json(d.a)}, {"density", to_json(d.density)}});
  j["per_delta"] = per;
  j["tail_fraction"] = r.tail_fraction;
  j["full_density_evidence"] = r.full_density_evidence;
  return j;
}

json to_json(const ConditionIIReport& r) {
  json j;
  j["B"] = to_json(r.b);
  j["window"] = json::array({r.window.lo, r.window.hi});
  j["exact"] = r.exact;
  json entries = json::array();
  for (const auto& e : r.entries) {
    json x = {{"n", e.n}, {"g", to_json(e.g)}, {"u", to_json(e.u)}, {"partial_sum", to_json(e.partial_sum)}};
    if (e.interval_start) x["interval_start"] = *e.interval_start;
    if (e.u_exact) x["u_exact"] = to_string(*e.u_exact);
    if (e.partial_sum_exact) x["partial_sum_exact"] = to_string(*e.partial_sum_exact);
    entries.push_back(x);
  }
  j["entries"] = entries;
  j["tail_start"] = r.tail_start;
  j["decay_ratio"] = number_json(r.decay_ratio);
  j["verdict"] = to_string(r.verdict);
  if (r.corollary_witness) {
    const auto& w = *r.corollary_witness;
    j["corollary_witness"] = {{"level", to_string(w.level)},
                              {"strict_threshold", to_string(w.strict_threshold)},
                              {"run_lengths", w.run_lengths}};
  } else {
    j["corollary_witness"] = nullptr;
  }
  return j;
}

json to_json(const SynthesisPlan& plan) {
  json j;
  j["B"] = to_json(plan.b);
  j["truncation"] = plan.truncation;
  j["exact"] = plan.exact;
  j["truncation_note"] = plan.truncation_note;
  json entries = json::array();
  for (const auto& e : plan.entries) {
    json x = {{"n", e.n},    {"g", to_json(e.g)}, {"phi", to_json(e.phi)}, {"a", to_json(e.a)},
              {"r", to_json(e.r)}, {"c", to_json(e.c)}, {"c_phi", to_json(e.c_phi)}};
    if (e.phi_exact) x["phi_exact"] = to_string(*e.phi_exact);
    if (e.a_exact) x["a_exact"] = to_string(*e.a_exact);
    if (e.r_exact) x["r_exact"] = to_string(*e.r_exact);
    if (e.c_squared_exact) x["c_squared_exact"] = to_string(*e.c_squared_exact);
    entries.push_back(x);
  }
  j["entries"] = entries;
  return j;
}

json to_json(const PlanInvariantReport& r) {
  return {{"cauchy_schwarz", r.cauchy_schwarz},
          {"c_phi_identity", r.c_phi_identity},
          {"c_phi_nondecreasing", r.c_phi_nondecreasing},
          {"exact", r.exact},
          {"coefficient_sum", to_json(r.coefficient_sum)},
          {"cauchy_schwarz_bound", to_json(r.cauchy_schwarz_bound)},
          {"holds", r.holds()}};
}

json to_json(const DccVerification& v) {
  json j;
  json decay = json::array();
  for (const auto& d : v.decay) {
    json k = json::array();
    for (const auto& g : d.k) k.push_back(to_json(g));
    decay.push_back({{"K", k},
                     {"max_tail_norm", d.max_tail_norm ? to_json(*d.max_tail_norm) : json(nullptr)},
                     {"tail_count", d.tail_count}});
  }
  j["decay"] = decay;
  json lb = json::array();
  for (const auto& e : v.lower_bounds)
    lb.push_back({{"n", e.n}, {"norm", to_json(e.norm)}, {"bound", to_json(e.bound)},
                  {"passed", e.passed}, {"exact", e.exact}});
  j["lower_bounds"] = lb;
  j["all_lower_bounds_pass"] = v.all_lower_bounds_pass;
  j["max_bound"] = to_json(v.max_bound);
  j["unbounded_threshold"] = number_json(v.unbounded_threshold);
  j["divergent_bound_evidence"] = v.divergent_bound_evidence;
  return j;
}

json to_json(const IrregularityEvidence& e) {
  return {{"horizon", e.norms.size()},
          {"near_zero_threshold", number_json(e.near_zero_threshold)},
          {"unbounded_threshold", number_json(e.unbounded_threshold)},
          {"near_zero", to_json(e.near_zero)},
          {"unbounded", to_json(e.unbounded)},
          {"near_zero_density", to_json(e.near_zero_density)},
          {"unbounded_density", to_json(e.unbounded_density)},
          {"max_norm", to_json(e.max_norm)}};
}

json to_json(const ScrambledPairVerdict& v) {
  return {{"verdict", to_string(v.verdict)},
          {"epsilon", number_json(v.epsilon)},
          {"tau", number_json(v.tau)},
          {"delta_low", number_json(v.delta_low)},
          {"delta_high", number_json(v.delta_high)},
          {"f_lower_at_epsilon", number_json(v.f_lower_at_epsilon)},
          {"f_star_at_tau", number_json(v.f_star_at_tau)}};
}

json to_json(const MirrorReport& r) {
  return {{"horizon", r.horizon},
          {"p", r.p},
          {"samples", r.samples},
          {"max_deviation", number_json(r.max_deviation)},
          {"reciprocity_holds", r.reciprocity_holds},
          {"mixed_dominates", r.mixed_dominates},
          {"component0", to_json(r.component0)},
          {"component1", to_json(r.component1)}};
}

std::string overall_verdict(const ConditionIReport& ci, const ConditionIIReport& cii) {
  const bool one = ci.full_density_evidence;
  const bool two = cii.verdict == SummabilityVerdict::SummableEvidence;
  if (one && two) return "dccw_evidence";
  if (two) return "condition_ii_only";
  if (one) return "condition_i_only";
  return "no_evidence";
}

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {"phi",       "orbit",     "density",
                                                 "dccw-check", "synthesize", "verify",
                                                 "pair-test", "mirror-check", "report"};
  return names;
}

Artifacts render_subcommand(const std::string& cmd, const ExperimentConfig& cfg) {
  Pipeline pipe(cfg);
  Artifacts files;
  if (cmd == "phi") {
    files["phi.csv"] = phi_csv(pipe);
  } else if (cmd == "orbit") {
    files["orbit.csv"] = orbit_csv(orbit_series(pipe, cfg.orbit_horizon), cfg.p);
  } else if (cmd == "density") {
    const OrbitSeries s = orbit_series(pipe, cfg.orbit_horizon);
    const IrregularityEvidence ev = evidence_from_norms(s.norms, cfg.near_zero, cfg.unbounded, cfg.theta);
    json j = header_json(cfg);
    j["irregularity"] = to_json(ev);
    files["density.json"] = dump(j);
    files["density.csv"] = density_csv(ev);
  } else if (cmd == "dccw-check") {
    files["dccw.json"] = dump(dccw_json(pipe));
    files["s_n.csv"] = s_n_csv(pipe.condition_i());
    files["u_n.csv"] = u_n_csv(pipe.condition_ii(), cfg.group);
  } else if (cmd == "synthesize") {
    json j = header_json(cfg);
    j["plan"] = synthesis_json(pipe);
    files["plan.json"] = dump(j);
    files["synthesized.csv"] = synthesized_csv(pipe.synthesized(), cfg.group);
    files["c_n_phi_n.csv"] = c_phi_csv(pipe.synthesized().plan);
  } else if (cmd == "verify") {
    json j = header_json(cfg);
    j["verification"] = to_json(pipe.verification());
    j["invariants"] = to_json(pipe.invariants());
    files["verify.json"] = dump(j);
    files["lower_bounds.csv"] = lower_bound_csv(pipe.verification());
  } else if (cmd == "pair-test") {
    const PairResult r = pair_result(pipe);
    json j = header_json(cfg);
    j["pair"] = pair_json(r);
    files["pair.json"] = dump(j);
    files["F.csv"] = f_csv(r.profile);
  } else if (cmd == "mirror-check") {
    const MirrorReport r = mirror_report(pipe);
    json j = header_json(cfg);
    j["mirror"] = to_json(r);
    files["mirror.json"] = dump(j);
    files["mirror.csv"] = mirror_csv(r);
  } else if (cmd == "report") {
    json j = header_json(cfg);
    j["config"] = cfg.echo();
    j["condition_i"] = to_json(pipe.condition_i());
    j["condition_ii"] = to_json(pipe.condition_ii());
    j["plan"] = synthesis_json(pipe);
    j["verification"] = to_json(pipe.verification());
    const PairResult pair = pair_result(pipe);
    j["pair"] = pair_json(pair);
    const OrbitSeries orbit = orbit_series(pipe, cfg.orbit_horizon);
    j["irregularity"] = to_json(evidence_from_norms(orbit.norms, cfg.near_zero, cfg.unbounded, cfg.theta));
    if (std::holds_alternative<rules::MirrorProduct>(cfg.weight.rule())) {
      const MirrorReport mirror = mirror_report(pipe);
      j["mirror"] = to_json(mirror);
      files["mirror.csv"] = mirror_csv(mirror);
    }
    j["verdict"] = overall_verdict(pipe.condition_i(), pipe.condition_ii());
    files["report.json"] = dump(j);
    files["orbit.csv"] = orbit_csv(orbit, cfg.p);
    files["s_n.csv"] = s_n_csv(pipe.condition_i());
    files["u_n.csv"] = u_n_csv(pipe.condition_ii(), cfg.group);
    files["c_n_phi_n.csv"] = c_phi_csv(pipe.synthesized().plan);
    files["synthesized.csv"] = synthesized_csv(pipe.synthesized(), cfg.group);
    files["lower_bounds.csv"] = lower_bound_csv(pipe.verification());
    files["F.csv"] = f_csv(pair.profile);
  } else {
    throw ConfigError("<subcommand>", "unknown subcommand '" + cmd + "'");
  }
  return files;
}

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void write_artifacts(const ExperimentConfig& cfg, const std::string& cmd, const Artifacts& files) {
  namespace fs = std::filesystem;
  const std::string started = utc_now();
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("--out", "cannot create '" + dir.string() + "': " + ec.message());
  json listed = json::array();
  for (const auto& [name, content] : files) {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    if (!out) throw ConfigError("--out", "cannot write '" + (dir / name).string() + "'");
    listed.push_back(name);
  }
  json manifest;
  manifest["tool"] = "wtchaos";
  manifest["tool_version"] = kToolVersion;
  manifest["subcommand"] = cmd;
  manifest["config"] = cfg.echo();
  manifest["config_hash"] = cfg.content_hash();
  manifest["files"] = listed;
  manifest["timestamps"] = {{"started", started}, {"finished", utc_now()}};
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << dump(manifest);
  if (!out) throw ConfigError("--out", "cannot write manifest.json");
}

int run_subcommand(const std::string& cmd, const ExperimentConfig& cfg, std::ostream& out,
                   std::ostream& err) {
  try {
    const Artifacts files = render_subcommand(cmd, cfg);
    write_artifacts(cfg, cmd, files);
    out << cmd << ": wrote " << files.size() + 1 << " files to " << cfg.output_dir << '\n';
    return 0;
  } catch (const NumericRangeError& e) {
    err << "numeric range error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace wtchaos
