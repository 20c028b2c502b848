#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "csvortex/error.hpp"
#include "doctest.h"
#include "json_io.hpp"

using namespace csvortex;
using namespace csvortex::app;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "csvortex");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_command(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "csvortex_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_dir() {
  const char* env = std::getenv("CSVORTEX_CONFIG_DIR");
  return env ? env : "configs";
}

}  // namespace

TEST_CASE("config defaults and group tags") {
  const RunConfig c = parse_config(R"({"model": {"group": "G2", "orientation": "ba"}, "eps": [0.1]})");
  CHECK(c.a == 3);
  CHECK(c.b == 1);
  CHECK(c.grid.n_theta == MixedGridOptions{}.n_theta);
  CHECK_FALSE(c.solver.strict);
  c.validate();
}

TEST_CASE("config vortices and solver overrides") {
  const RunConfig c = parse_config(R"({
    "model": {"a": 1, "b": 2},
    "vortices": {"p": [[1, 0], [-0.5, 0.5]], "q": [[0, -0.5]]},
    "solver": {"picard_tol": 1e-7, "check_nondegeneracy": false},
    "eps": [0.02, 0.01],
    "strict": true
  })");
  CHECK(c.p.size() == 2);
  CHECK(c.q[0] == Point(0.0, -0.5));
  CHECK(c.solver.picard_tol == 1e-7);
  CHECK_FALSE(c.solver.check_nondegeneracy);
  CHECK(c.solver.strict);
  CHECK(c.model().lambda() == Rational(4));
}

TEST_CASE("config errors name the location") {
  auto message = [](const std::string& text) {
    try {
      parse_config(text, "cfg.json").validate();
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("{\n  \"eps\": [0.1,]\n}").rfind("cfg.json:2:", 0) == 0);
  CHECK(message(R"({"grid": {"n_thetaa": 32}})").find("'grid.n_thetaa': unknown key") != std::string::npos);
  CHECK(message(R"({"eps": [0.01, 0.02]})").find("strictly decreasing") != std::string::npos);
  CHECK(message(R"({"eps": [0.1], "grid": {"d": 0.3}})").find("grid.d") != std::string::npos);
  CHECK(message(R"({"eps": [0.1], "model": {"a": 2, "b": 2}})").find("admissible") != std::string::npos);
  CHECK(message(R"({"eps": [0.1], "vortices": {"p": [[1]]}})").find("vortices.p[0]") != std::string::npos);
  CHECK_THROWS_AS(parse_eps_list("0.1,abc"), ConfigError);
  CHECK(parse_eps_list("0.02,0.01") == std::vector<double>{0.02, 0.01});
}

TEST_CASE("config hash ignores the output prefix only") {
  RunConfig a = parse_config(R"({"eps": [0.1]})");
  RunConfig b = a;
  b.out = "elsewhere";
  CHECK(a.hash() == b.hash());
  b.eps = {0.05};
  CHECK(a.hash() != b.hash());
  CHECK(a.hash().size() == 16);
}

TEST_CASE("json output is byte-stable") {
  nlohmann::ordered_json j;
  j["z"] = 0.1;
  j["a"] = std::nan("");
  j["n"] = 3;
  CHECK(dump_json(j) == "{\n  \"z\": 0.10000000000000001,\n  \"a\": null,\n  \"n\": 3\n}\n");
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  CHECK(run({"solve-mixed", "--config", config_dir() + "/excluded.json", "--out", (dir / "x").string()}) == 2);
  std::ofstream(dir / "bad.json") << "{\n  \"eps\": [0.1\n";
  CHECK(run({"solve-mixed", "--config", (dir / "bad.json").string()}) == 2);
  CHECK(run({"solve-mixed", "--eps", "0.01,0.02"}) == 2);
  CHECK(run({"no-such-command"}) == 2);
  CHECK(run({"verify", "--quick", "--only", "3"}) == 0);
}

TEST_CASE("shooting writes a trajectory") {
  const fs::path dir = scratch("shoot");
  CHECK(run({"shoot-radial", "--s1", "-8", "--s2", "-8", "--out", (dir / "nt").string()}) == 0);
  const std::string csv = slurp(dir / "nt_shoot.csv");
  CHECK(csv.rfind("r,u1,du1,u2,du2", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') > 100);
}

TEST_CASE("identical runs give identical files") {
  const fs::path dir = scratch("repeat");
  const std::string cfg = config_dir() + "/su3_lambda1.json";
  REQUIRE(run({"solve-mixed", "--config", cfg, "--eps", "0.05", "--out", (dir / "a").string()}) == 0);
  REQUIRE(run({"solve-mixed", "--config", cfg, "--eps", "0.05", "--out", (dir / "b").string()}) == 0);
  const std::string ja = slurp(dir / "a_eps0.05.json");
  CHECK_FALSE(ja.empty());
  CHECK(ja == slurp(dir / "b_eps0.05.json"));
  CHECK(ja.find("\"picard\": true") != std::string::npos);
}
