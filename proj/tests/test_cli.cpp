#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lnayield/cli.hpp"

using namespace lnayield;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "lnayield");
  std::ostringstream out, err;
  const int code = cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("lnayield_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
  return files;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"simulate", "--bogus"}).code == kExitUsage);
  CHECK(run({"--format", "xml", "simulate"}).code == kExitUsage);
  CHECK(run({"--n", "0", "simulate"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("validation errors exit with 3, runtime errors with 4") {
  const auto dir = scratch("errors");
  fs::create_directories(dir);
  std::ofstream(dir / "bad_schema.json") << "{\"schema_version\": 9}";
  auto r = run({"--config", (dir / "bad_schema.json").string(), "--out-dir", dir.string(), "simulate"});
  CHECK(r.code == kExitValidation);
  CHECK_FALSE(r.err.empty());
  r = run({"--n", "100", "--out-dir", dir.string(), "select", "--strategy", "greedy"});
  CHECK(r.code == kExitValidation);
  r = run({"--n", "100", "--out-dir", dir.string(), "compare", "--baselines", "0.9"});
  CHECK(r.code == kExitValidation);

  // A name that is not built in is read as a path.
  CHECK(run({"--config", "paper-9mA", "--out-dir", dir.string(), "simulate"}).code == kExitRuntime);
  r = run({"--config", (dir / "missing.json").string(), "--out-dir", dir.string(), "simulate"});
  CHECK(r.code == kExitRuntime);

  std::ofstream(dir / "broken.json") << "{ nope";
  r = run({"--config", (dir / "broken.json").string(), "--out-dir", dir.string(), "simulate"});
  CHECK(r.code == kExitValidation);
  fs::remove_all(dir);
}

TEST_CASE("repeated runs are byte-identical apart from the manifest") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(run({"--n", "4000", "--seed", "7", "--out-dir", a.string(), "report"}).code == kExitOk);
  REQUIRE(run({"--n", "4000", "--seed", "7", "--threads", "3", "--out-dir", b.string(), "report"}).code == kExitOk);
  auto fa = read_dir(a), fb = read_dir(b);
  REQUIRE(fa.count("manifest.json") == 1);
  const auto ma = nlohmann::json::parse(fa["manifest.json"]);
  const auto mb = nlohmann::json::parse(fb["manifest.json"]);
  CHECK(ma["config_digest"] == mb["config_digest"]);
  CHECK(ma["outputs"] == mb["outputs"]);
  fa.erase("manifest.json");
  fb.erase("manifest.json");
  CHECK(fa.size() > 5);
  CHECK(fa == fb);

  const auto c = scratch("det_c");
  REQUIRE(run({"--n", "4000", "--seed", "8", "--out-dir", c.string(), "report"}).code == kExitOk);
  CHECK(slurp(a / "selection.csv") != slurp(c / "selection.csv"));
  for (const auto& d : {a, b, c}) fs::remove_all(d);
}

TEST_CASE("select and compare produce their tables") {
  const auto dir = scratch("pipeline");
  REQUIRE(run({"--n", "2000", "--out-dir", dir.string(), "select", "--strategy", "best-gain,fixed-HG"}).code ==
          kExitOk);
  CHECK(fs::exists(dir / "outcomes_best-gain.csv"));
  CHECK(fs::exists(dir / "outcomes_fixed-HG.csv"));
  CHECK(fs::exists(dir / "selection.csv"));
  REQUIRE(run({"--n", "2000", "--out-dir", dir.string(), "--format", "json", "compare", "--strategy", "best-receiver",
               "--baselines", "0.4,paper-0.7mA"})
              .code == kExitOk);
  const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j["schema_version"] == 1);
  REQUIRE(j["comparisons"].size() == 2);
  CHECK(j["comparisons"][0]["baseline"] == "paper-0.4mA");
  CHECK(j["comparisons"][1]["baseline"] == "paper-0.7mA");
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["command"] == "compare");
  CHECK(m["n"] == 2000);
  fs::remove_all(dir);
}

TEST_CASE("fit and explore write their outputs") {
  const auto dir = scratch("fit");
  REQUIRE(run({"--out-dir", dir.string(), "fit"}).code == kExitOk);
  CHECK(fs::exists(dir / "fitted_config.json"));
  // The fitted config is itself a valid input.
  CHECK(run({"--config", (dir / "fitted_config.json").string(), "--n", "500", "--out-dir", (dir / "again").string(),
             "simulate", "--no-populations"})
            .code == kExitOk);
  REQUIRE(run({"--out-dir", dir.string(), "explore"}).code == kExitOk);
  CHECK(slurp(dir / "sweep.csv").starts_with("i_d_ma,w1_um,"));
  fs::remove_all(dir);
}

#ifdef LNAYIELD_CLI_PATH
TEST_CASE("the installed binary reports its usage") {
  const std::string cmd = std::string("\"") + LNAYIELD_CLI_PATH + "\" --help > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  const std::string bad = std::string("\"") + LNAYIELD_CLI_PATH + "\" nope > /dev/null 2>&1";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == kExitUsage);
}
#endif
