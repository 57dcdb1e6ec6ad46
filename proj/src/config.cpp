#include "wtchaos/config.hpp"

#include <toml.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "wtchaos/errors.hpp"

namespace wtchaos {

namespace {

using json = nlohmann::json;

const std::set<std::string> kTopKeys = {
    "group", "m",     "a",      "p",         "N",         "orbit_horizon", "mode",
    "theta", "max_bits", "weight", "search", "grids",     "thresholds",    "condition_i",
    "vector", "mirror", "output"};

void reject_unknown(const toml::table& tbl, const std::set<std::string>& allowed,
                    const std::string& prefix) {
  for (const auto& [key, node] : tbl) {
    const std::string name(key.str());
    if (!allowed.count(name)) throw ConfigError(prefix + name, "unknown key '" + prefix + name + "'");
  }
}

const toml::table* subtable(const toml::table& root, const std::string& key,
                            const std::set<std::string>& allowed) {
  const toml::node* node = root.get(key);
  if (!node) return nullptr;
  const toml::table* tbl = node->as_table();
  if (!tbl) throw ConfigError(key, "expected a table");
  reject_unknown(*tbl, allowed, key + ".");
  return tbl;
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Rational rational_from(const toml::node& node, const std::string& key) {
  try {
    if (const auto* s = node.as_string()) return parse_rational(s->get());
    if (const auto* i = node.as_integer()) return Rational(BigInt(std::to_string(i->get()), 10));
    if (const auto* f = node.as_floating_point()) {
      if (!std::isfinite(f->get())) throw SpecificationError("non-finite value");
      return parse_rational(shortest(f->get()));
    }
  } catch (const SpecificationError& e) {
    throw ConfigError(key, e.what());
  }
  throw ConfigError(key, "expected a number or a rational string such as \"1/2\"");
}

double real_from(const toml::node& node, const std::string& key) {
  if (const auto* i = node.as_integer()) return static_cast<double>(i->get());
  if (const auto* f = node.as_floating_point()) return f->get();
  throw ConfigError(key, "expected a number");
}

std::int64_t integer_from(const toml::node& node, const std::string& key) {
  if (const auto* i = node.as_integer()) return i->get();
  throw ConfigError(key, "expected an integer");
}

std::vector<double> reals_from(const toml::node& node, const std::string& key) {
  const auto* arr = node.as_array();
  if (!arr) return {real_from(node, key)};
  std::vector<double> out;
  for (const auto& item : *arr) out.push_back(real_from(item, key));
  return out;
}

GroupElement element_from(const toml::node& node, const GroupSpec& group, const std::string& key) {
  GroupElement g;
  if (const auto* i = node.as_integer()) {
    g = group.is_product() ? GroupElement(i->get(), 0) : GroupElement(i->get());
    if (group.is_product())
      throw ConfigError(key, "elements of " + group.name() + " are written [z, c]");
  } else if (const auto* arr = node.as_array(); arr && arr->size() == 2) {
    g = GroupElement(integer_from(*arr->get(0), key), integer_from(*arr->get(1), key));
  } else {
    throw ConfigError(key, "expected a group element");
  }
  if (!is_member(group, g)) throw ConfigError(key, to_string(g) + " is not an element of " + group.name());
  return g;
}

json element_json(const GroupElement& g) {
  if (g.c) return json::array({g.z, *g.c});
  return g.z;
}

struct ParsedWeight {
  WeightSpec spec;
  json echo;
};

const std::set<std::string> kWeightKeys = {"rule", "value",  "left",       "right", "values",
                                           "entries", "default", "table_file", "base",  "sup",
                                           "inf"};

ParsedWeight parse_weight(const toml::node& node, const std::string& prefix, const GroupSpec& group,
                          const std::string& base_dir) {
  if (const auto* s = node.as_string()) {
    toml::table shorthand;
    shorthand.insert("rule", s->get());
    return parse_weight(shorthand, prefix, group, base_dir);
  }
  const auto* tbl = node.as_table();
  if (!tbl) throw ConfigError(prefix, "expected a rule name or a table");
  reject_unknown(*tbl, kWeightKeys, prefix + ".");
  const auto rule_node = (*tbl)["rule"].value<std::string>();
  if (!rule_node) throw ConfigError(prefix + ".rule", "missing required key");
  const std::string rule = *rule_node;
  const auto need = [&](const char* key) -> const toml::node& {
    const toml::node* n = tbl->get(key);
    if (!n) throw ConfigError(prefix + "." + key, "missing required key for rule '" + rule + "'");
    return *n;
  };

  json echo = {{"rule", rule}};
  std::optional<WeightSpec> spec;
  if (rule == "constant") {
    const Rational v = rational_from(need("value"), prefix + ".value");
    if (sgn(v) <= 0) throw ConfigError(prefix + ".value", "must be positive");
    spec = constant_weight(v, group);
    echo["value"] = to_string(v);
  } else if (rule == "two_sided") {
    const Rational l = rational_from(need("left"), prefix + ".left");
    const Rational r = rational_from(need("right"), prefix + ".right");
    if (sgn(l) <= 0) throw ConfigError(prefix + ".left", "must be positive");
    if (sgn(r) <= 0) throw ConfigError(prefix + ".right", "must be positive");
    spec = two_sided_weight(l, r, group);
    echo["left"] = to_string(l);
    echo["right"] = to_string(r);
  } else if (rule == "periodic") {
    const auto* arr = need("values").as_array();
    if (!arr || arr->empty()) throw ConfigError(prefix + ".values", "expected a nonempty array");
    std::vector<Rational> values;
    json list = json::array();
    for (const auto& item : *arr) {
      values.push_back(rational_from(item, prefix + ".values"));
      if (sgn(values.back()) <= 0) throw ConfigError(prefix + ".values", "must be positive");
      list.push_back(to_string(values.back()));
    }
    spec = periodic_weight(std::move(values), group);
    echo["values"] = list;
  } else if (rule == "table") {
    std::map<GroupElement, Rational> entries;
    std::optional<Rational> default_value;
    if (const toml::node* file = tbl->get("table_file")) {
      const auto path_str = file->value<std::string>();
      if (!path_str) throw ConfigError(prefix + ".table_file", "expected a path string");
      std::filesystem::path path(*path_str);
      if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
      std::ifstream in(path);
      if (!in) throw ConfigError(prefix + ".table_file", "cannot open '" + path.string() + "'");
      try {
        const WeightSpec from_file = read_table_csv(in, group);
        const auto& t = std::get<rules::Table>(from_file.rule());
        entries = t.entries;
        default_value = t.default_value;
      } catch (const SpecificationError& e) {
        throw ConfigError(prefix + ".table_file", e.what());
      }
    }
    if (const toml::node* list = tbl->get("entries")) {
      const auto* arr = list->as_array();
      if (!arr) throw ConfigError(prefix + ".entries", "expected an array of [position, value]");
      for (const auto& item : *arr) {
        const auto* pair = item.as_array();
        if (!pair || pair->size() != 2)
          throw ConfigError(prefix + ".entries", "expected [position, value] pairs");
        const GroupElement g = element_from(*pair->get(0), group, prefix + ".entries");
        entries[g] = rational_from(*pair->get(1), prefix + ".entries");
        if (sgn(entries[g]) <= 0) throw ConfigError(prefix + ".entries", "must be positive");
      }
    }
    if (const toml::node* d = tbl->get("default")) default_value = rational_from(*d, prefix + ".default");
    if (!default_value) throw ConfigError(prefix + ".default", "table weights need a default value");
    if (sgn(*default_value) <= 0) throw ConfigError(prefix + ".default", "must be positive");
    json list = json::array();
    for (const auto& [g, v] : entries) list.push_back(json::array({element_json(g), to_string(v)}));
    echo["entries"] = list;
    echo["default"] = to_string(*default_value);
    spec = table_weight(std::move(entries), *default_value, group);
  } else if (rule == "cubic_runs") {
    spec = cubic_runs_weight(group);
  } else if (rule == "mirror_product") {
    if (!group.is_product()) throw ConfigError(prefix + ".rule", "mirror_product needs group = \"ZxZm\"");
    const ParsedWeight base = parse_weight(need("base"), prefix + ".base", GroupSpec::integers(), base_dir);
    spec = mirror_product_weight(base.spec, group.modulus);
    echo["base"] = base.echo;
  } else {
    throw ConfigError(prefix + ".rule", "unknown weight rule '" + rule + "'");
  }

  const toml::node* sup = tbl->get("sup");
  const toml::node* inf = tbl->get("inf");
  if (sup || inf) {
    const Rational s = sup ? rational_from(*sup, prefix + ".sup") : spec->declared_sup();
    const Rational i = inf ? rational_from(*inf, prefix + ".inf") : spec->declared_inf();
    if (sgn(i) <= 0) throw ConfigError(prefix + ".inf", "declared inf must be positive");
    if (s < i) throw ConfigError(prefix + ".sup", "declared sup must be >= declared inf");
    spec = with_declared_bounds(*spec, s, i);
  }
  echo["sup"] = to_string(spec->declared_sup());
  echo["inf"] = to_string(spec->declared_inf());
  return {*spec, echo};
}

std::string mode_name(ArithmeticMode m) { return m == ArithmeticMode::Rational ? "rational" : "log"; }

}  // namespace

WeightedTranslation ExperimentConfig::make_operator() const {
  return WeightedTranslation(weight, a, p);
}

json ExperimentConfig::echo() const {
  json j;
  j["group"] = group.is_product() ? "ZxZm" : "Z";
  if (group.is_product()) j["m"] = group.modulus;
  j["a"] = element_json(a);
  j["p"] = p;
  j["N"] = horizon;
  j["orbit_horizon"] = orbit_horizon;
  j["mode"] = mode_name(mode);
  j["max_bits"] = exact.max_bits;
  j["theta"] = theta;
  j["weight"] = weight_echo;
  j["search"]["window"] = json::array({window.lo, window.hi});
  if (b_members) j["search"]["B"] = *b_members;
  j["grids"] = {{"delta", deltas}, {"tau", taus}, {"epsilon", epsilons}};
  j["thresholds"] = {{"delta_low", delta_low},
                     {"delta_high", delta_high},
                     {"near_zero", near_zero},
                     {"unbounded", unbounded}};
  json ks = json::array();
  for (const auto& g : k) ks.push_back(element_json(g));
  j["condition_i"]["K"] = ks;
  switch (vector_init) {
    case VectorInit::Characteristic:
      j["vector"]["init"] = "char:" + (char_point.c ? std::to_string(char_point.z) + ":" +
                                                          std::to_string(*char_point.c)
                                                    : std::to_string(char_point.z));
      break;
    case VectorInit::Synthesized: j["vector"]["init"] = "synthesized"; break;
    case VectorInit::Entries: {
      j["vector"]["init"] = "entries";
      json list = json::array();
      for (const auto& e : entries) list.push_back(json::array({element_json(e.position), e.re, e.im}));
      j["vector"]["entries"] = list;
      break;
    }
  }
  j["mirror"]["samples"] = mirror_samples;
  return j;
}

std::string ExperimentConfig::content_hash() const {
  const std::string text = echo().dump();
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config(std::string_view text, const std::string& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error: " << e.description() << " at line " << e.source().begin.line;
    throw ConfigError("<document>", msg.str());
  }
  reject_unknown(root, kTopKeys, "");

  ExperimentConfig cfg;

  const auto group_name = root["group"].value<std::string>();
  if (!group_name) throw ConfigError("group", "missing required key");
  if (*group_name == "Z") {
    cfg.group = GroupSpec::integers();
    if (root.get("m")) throw ConfigError("m", "only valid with group = \"ZxZm\"");
  } else if (*group_name == "ZxZm") {
    const toml::node* m = root.get("m");
    if (!m) throw ConfigError("m", "missing required key for group ZxZm");
    const std::int64_t modulus = integer_from(*m, "m");
    if (modulus < 2) throw ConfigError("m", "modulus must be >= 2");
    cfg.group = GroupSpec::product_with_cyclic(modulus);
  } else {
    throw ConfigError("group", "expected \"Z\" or \"ZxZm\"");
  }

  if (const toml::node* a = root.get("a"))
    cfg.a = element_from(*a, cfg.group, "a");
  else
    cfg.a = cfg.group.is_product() ? GroupElement(-1, 0) : GroupElement(-1);
  if (is_identity(cfg.group, cfg.a)) throw ConfigError("a", "a must not be the identity");

  const toml::node* p = root.get("p");
  if (!p) throw ConfigError("p", "missing required key");
  cfg.p = real_from(*p, "p");
  if (!(cfg.p >= 1.0) || !std::isfinite(cfg.p)) throw ConfigError("p", "p must be >= 1");

  const toml::node* n = root.get("N");
  if (!n) throw ConfigError("N", "missing required key");
  cfg.horizon = integer_from(*n, "N");
  if (cfg.horizon < 2) throw ConfigError("N", "N must be >= 2");
  cfg.orbit_horizon = cfg.horizon;
  if (const toml::node* oh = root.get("orbit_horizon")) {
    cfg.orbit_horizon = integer_from(*oh, "orbit_horizon");
    cfg.orbit_horizon_explicit = true;
    if (cfg.orbit_horizon < 2) throw ConfigError("orbit_horizon", "orbit_horizon must be >= 2");
  }

  if (const auto mode = root["mode"].value<std::string>()) {
    if (*mode == "rational") cfg.mode = ArithmeticMode::Rational;
    else if (*mode == "log") cfg.mode = ArithmeticMode::Log;
    else throw ConfigError("mode", "expected \"rational\" or \"log\"");
  } else if (root.get("mode")) {
    throw ConfigError("mode", "expected a string");
  }
  if (const toml::node* bits = root.get("max_bits")) {
    const std::int64_t b = integer_from(*bits, "max_bits");
    if (b < 64) throw ConfigError("max_bits", "max_bits must be >= 64");
    cfg.exact.max_bits = static_cast<std::size_t>(b);
  }
  if (const toml::node* theta = root.get("theta")) {
    cfg.theta = real_from(*theta, "theta");
    if (!(cfg.theta > 0.0 && cfg.theta < 1.0)) throw ConfigError("theta", "theta must lie in (0, 1)");
  }

  const toml::node* weight = root.get("weight");
  if (!weight) throw ConfigError("weight", "missing required key");
  {
    ParsedWeight parsed = parse_weight(*weight, "weight", cfg.group, base_dir);
    cfg.weight = parsed.spec;
    cfg.weight_echo = parsed.echo;
  }

  const std::int64_t reach = cfg.horizon * cfg.horizon * cfg.horizon + cfg.horizon + 1;
  cfg.window = {-reach, reach};
  if (const auto* search = subtable(root, "search", {"window", "B"})) {
    if (const toml::node* w = search->get("window")) {
      const auto* arr = w->as_array();
      if (!arr || arr->size() != 2) throw ConfigError("search.window", "expected [lo, hi]");
      cfg.window = {integer_from(*arr->get(0), "search.window"), integer_from(*arr->get(1), "search.window")};
      if (cfg.window.hi < cfg.window.lo) throw ConfigError("search.window", "window must be finite with lo <= hi");
    }
    if (const toml::node* b = search->get("B")) {
      const auto* arr = b->as_array();
      if (!arr || arr->empty()) throw ConfigError("search.B", "expected a nonempty array of indices");
      std::vector<std::int64_t> members;
      for (const auto& item : *arr) members.push_back(integer_from(item, "search.B"));
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
      if (members.front() < 1) throw ConfigError("search.B", "indices must be >= 1");
      cfg.b_members = std::move(members);
    }
  }

  if (const auto* grids = subtable(root, "grids", {"delta", "tau", "epsilon"})) {
    const auto positive = [](const std::vector<double>& v, const char* key) {
      if (v.empty()) throw ConfigError(key, "grid must be nonempty");
      for (double x : v)
        if (!(x > 0.0)) throw ConfigError(key, "grid entries must be positive");
    };
    if (const toml::node* d = grids->get("delta")) positive(cfg.deltas = reals_from(*d, "grids.delta"), "grids.delta");
    if (const toml::node* t = grids->get("tau")) positive(cfg.taus = reals_from(*t, "grids.tau"), "grids.tau");
    if (const toml::node* e = grids->get("epsilon")) positive(cfg.epsilons = reals_from(*e, "grids.epsilon"), "grids.epsilon");
  }

  if (const auto* th = subtable(root, "thresholds", {"delta_low", "delta_high", "near_zero", "unbounded"})) {
    const auto read = [&](const char* key, double& dst, bool unit_interval) {
      if (const toml::node* v = th->get(key)) {
        const std::string full = std::string("thresholds.") + key;
        dst = real_from(*v, full);
        if (!(dst > 0.0) || (unit_interval && dst > 1.0))
          throw ConfigError(full, unit_interval ? "must lie in (0, 1]" : "must be positive");
      }
    };
    read("delta_low", cfg.delta_low, true);
    read("delta_high", cfg.delta_high, true);
    read("near_zero", cfg.near_zero, false);
    read("unbounded", cfg.unbounded, false);
  }

  cfg.k = {identity(cfg.group)};
  if (const auto* ci = subtable(root, "condition_i", {"K"})) {
    if (const toml::node* k = ci->get("K")) {
      const auto* arr = k->as_array();
      if (!arr || arr->empty()) throw ConfigError("condition_i.K", "expected a nonempty array of elements");
      cfg.k.clear();
      for (const auto& item : *arr) cfg.k.insert(element_from(item, cfg.group, "condition_i.K"));
    }
  }

  cfg.char_point = identity(cfg.group);
  if (const auto* vec = subtable(root, "vector", {"init", "entries"})) {
    const auto init = (*vec)["init"].value<std::string>();
    const bool has_entries = vec->get("entries") != nullptr;
    if (init && *init == "synthesized") {
      cfg.vector_init = VectorInit::Synthesized;
    } else if (init && init->rfind("char:", 0) == 0) {
      cfg.vector_init = VectorInit::Characteristic;
      const std::string pos = init->substr(5);
      try {
        if (const auto colon = pos.find(':'); colon != std::string::npos)
          cfg.char_point = GroupElement(std::stoll(pos.substr(0, colon)), std::stoll(pos.substr(colon + 1)));
        else
          cfg.char_point = cfg.group.is_product() ? GroupElement(std::stoll(pos), 0) : GroupElement(std::stoll(pos));
      } catch (const std::logic_error&) {
        throw ConfigError("vector.init", "malformed position in '" + *init + "'");
      }
      if (!is_member(cfg.group, cfg.char_point))
        throw ConfigError("vector.init", to_string(cfg.char_point) + " is not an element of " + cfg.group.name());
    } else if ((init && *init == "entries") || (!init && has_entries)) {
      cfg.vector_init = VectorInit::Entries;
      const auto* arr = has_entries ? (*vec)["entries"].as_array() : nullptr;
      if (!arr || arr->empty()) throw ConfigError("vector.entries", "expected [[position, re, im], ...]");
      for (const auto& item : *arr) {
        const auto* triple = item.as_array();
        if (!triple || (triple->size() != 3 && triple->size() != 2))
          throw ConfigError("vector.entries", "expected (position, re, im) triples");
        VectorEntry e;
        e.position = element_from(*triple->get(0), cfg.group, "vector.entries");
        e.re = real_from(*triple->get(1), "vector.entries");
        e.im = triple->size() == 3 ? real_from(*triple->get(2), "vector.entries") : 0.0;
        cfg.entries.push_back(e);
      }
    } else if (init) {
      throw ConfigError("vector.init", "expected \"char:<g>\", \"synthesized\" or \"entries\"");
    }
  }

  cfg.mirror_samples = {0};
  if (const auto* mirror = subtable(root, "mirror", {"samples"})) {
    if (const toml::node* s = mirror->get("samples")) {
      const auto* arr = s->as_array();
      if (!arr || arr->empty()) throw ConfigError("mirror.samples", "expected a nonempty integer array");
      cfg.mirror_samples.clear();
      for (const auto& item : *arr) cfg.mirror_samples.push_back(integer_from(item, "mirror.samples"));
    }
  }

  if (const auto* out = subtable(root, "output", {"dir"})) {
    if (const auto dir = (*out)["dir"].value<std::string>()) cfg.output_dir = *dir;
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_config(buf.str(), parent.empty() ? "." : parent.string());
}

void override_horizon(ExperimentConfig& cfg, std::int64_t horizon) {
  if (horizon < 2) throw ConfigError("--horizon", "N must be >= 2");
  cfg.horizon = horizon;
  if (!cfg.orbit_horizon_explicit) cfg.orbit_horizon = horizon;
}

ComplexVector configured_vector(const ExperimentConfig& cfg, const ComplexVector* synthesized) {
  switch (cfg.vector_init) {
    case VectorInit::Characteristic: return ComplexVector::indicator(cfg.char_point);
    case VectorInit::Synthesized:
      if (!synthesized) throw PreconditionError("synthesized vector requested but not built");
      return *synthesized;
    case VectorInit::Entries: {
      ComplexVector v;
      for (const auto& e : cfg.entries) v.add(e.position, {e.re, e.im});
      return v;
    }
  }
  return {};
}

}  // namespace wtchaos
