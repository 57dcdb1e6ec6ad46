// wtchaos <subcommand> --config <path> [--out <dir>] [--mode rational|log] [--horizon <N>]

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "wtchaos/config.hpp"
#include "wtchaos/errors.hpp"
#include "wtchaos/report.hpp"

int main(int argc, char** argv) {
  using namespace wtchaos;

  CLI::App app{"Finite-horizon chaos diagnostics for weighted translations"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> mode;
  std::optional<std::int64_t> horizon;

  const std::map<std::string, std::string> help = {
      {"phi", "cocycle phi_n over the K points"},
      {"orbit", "orbit norms ||T^n f||_p of the configured vector"},
      {"density", "running density of A_delta and its estimates"},
      {"dccw-check", "both DCCW conditions and the overall verdict"},
      {"synthesize", "synthesis plan and the vector y"},
      {"verify", "lower bounds ||T^n y|| >= c_n phi_n(g_n) and decay along A"},
      {"pair-test", "distributional function of (y, 0) and the pair verdict"},
      {"mirror-check", "reciprocity of the two cyclic copies on Z x Z_2"},
      {"report", "everything above in one directory"},
  };
  for (const auto& name : subcommand_names()) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", config_path, "TOML experiment config")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--mode", mode, "arithmetic mode")->check(CLI::IsMember({"rational", "log"}));
    sub->add_option("--horizon", horizon, "override N");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
    if (out_dir) cfg.output_dir = *out_dir;
    if (mode) cfg.mode = *mode == "log" ? ArithmeticMode::Log : ArithmeticMode::Rational;
    if (horizon) override_horizon(cfg, *horizon);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
  return run_subcommand(cmd, cfg, std::cout, std::cerr);
}
