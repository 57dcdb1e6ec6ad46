#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {
int run(const std::string& args) {
  const std::string cmd = std::string(WTCHAOS_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(WTCHAOS_SCRATCH) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string config(const std::string& name) { return std::string(WTCHAOS_CONFIGS) + "/" + name; }
}  // namespace

TEST_CASE("orbit of the constant weight") {
  const fs::path out = scratch("orbit");
  REQUIRE(run("orbit --config " + config("constant2.toml") + " --out " + out.string()) == 0);
  std::istringstream csv(slurp(out / "orbit.csv"));
  std::string header, r1, r2, r3;
  std::getline(csv, header);
  std::getline(csv, r1);
  std::getline(csv, r2);
  std::getline(csv, r3);
  CHECK(header.rfind("n,value,log_value", 0) == 0);
  CHECK(r1.rfind("1,2,", 0) == 0);
  CHECK(r2.rfind("2,4,", 0) == 0);
  CHECK(r3.rfind("3,8,", 0) == 0);
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["files"] == nlohmann::json::array({"orbit.csv"}));
}

TEST_CASE("dccw-check on cubic runs") {
  const fs::path out = scratch("dccw");
  REQUIRE(run("dccw-check --config " + config("cubic_runs.toml") + " --out " + out.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(out / "dccw.json"));
  CHECK(j["condition_ii"]["verdict"] == "summable_evidence");
  CHECK(j["condition_i"]["full_density_evidence"] == true);
  CHECK(fs::exists(out / "s_n.csv"));
  CHECK(fs::exists(out / "u_n.csv"));
}

TEST_CASE("split verdict for the two-sided weight") {
  const fs::path out = scratch("two_sided");
  REQUIRE(run("dccw-check --config " + config("two_sided.toml") + " --out " + out.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(out / "dccw.json"));
  CHECK(j["verdict"] == "condition_ii_only");
}

TEST_CASE("flags and exit codes") {
  const fs::path out = scratch("flags");
  CHECK(run("orbit --config " + config("constant2.toml") + " --out " + out.string() + " --mode log --horizon 5") == 0);
  CHECK(run("orbit --config " + config("constant2.toml") + " --mode float") == 1);
  CHECK(run("orbit") == 1);
  CHECK(run("nonsense --config " + config("constant2.toml")) == 1);
  CHECK(run("orbit --config " + (out / "missing.toml").string()) == 1);
  CHECK(run("orbit --config " + config("constant2.toml") + " --horizon 1") == 1);

  std::ofstream(out / "bad.toml") << "group = \"Z\"\nweight = \"cubic_runs\"\np = 0.5\nN = 20\n";
  CHECK(run("orbit --config " + (out / "bad.toml").string()) == 1);
  std::ofstream(out / "big.toml") << "group = \"Z\"\nweight = \"cubic_runs\"\np = 2\nN = 300\nmax_bits = 128\n";
  CHECK(run("phi --config " + (out / "big.toml").string() + " --out " + out.string()) == 2);
  CHECK(run("phi --config " + (out / "big.toml").string() + " --out " + out.string() + " --mode log") == 0);
}

TEST_CASE("report is deterministic") {
  const fs::path a = scratch("report_a");
  const fs::path b = scratch("report_b");
  REQUIRE(run("report --config " + config("cubic_runs.toml") + " --out " + a.string()) == 0);
  REQUIRE(run("report --config " + config("cubic_runs.toml") + " --out " + b.string()) == 0);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (name == "manifest.json") continue;
    CHECK_MESSAGE(slurp(a / name) == slurp(b / name), name.string());
    ++compared;
  }
  CHECK(compared >= 8);
  auto ma = nlohmann::json::parse(slurp(a / "manifest.json"));
  auto mb = nlohmann::json::parse(slurp(b / "manifest.json"));
  ma.erase("timestamps");
  mb.erase("timestamps");
  CHECK(ma == mb);
  for (const auto& f : ma["files"]) CHECK(fs::exists(a / f.get<std::string>()));

  const auto report = nlohmann::json::parse(slurp(a / "report.json"));
  for (const char* key : {"config", "condition_i", "condition_ii", "plan", "verification", "verdict"})
    CHECK(report.contains(key));
  CHECK(report["verdict"] == "dccw_evidence");
}

TEST_CASE("every subcommand runs on the mirror config") {
  for (const char* cmd : {"phi", "orbit", "density", "dccw-check", "synthesize", "verify", "pair-test", "mirror-check", "report"}) {
    const fs::path out = scratch(std::string("mirror_") + cmd);
    CHECK_MESSAGE(run(std::string(cmd) + " --config " + config("mirror.toml") + " --out " + out.string()) == 0, cmd);
  }
}
