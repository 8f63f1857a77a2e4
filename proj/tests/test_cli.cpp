// End-to-end runs of the command-line tool; needs CURVGRAPH_CLI pointing at
// the built binary (ctest sets it).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const char* cli_path() { return std::getenv("CURVGRAPH_CLI"); }

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out = fs::temp_directory_path() / ("curvgraph_cli_" +
                                                    std::to_string(++counter) + ".out");
  const std::string cmd =
      std::string(cli_path()) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  fs::remove(out);
  return r;
}

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace

TEST_CASE("command line exit codes and reports") {
  if (!cli_path()) {
    MESSAGE("CURVGRAPH_CLI not set; skipping CLI tests");
    return;
  }

  const auto edge = write_temp("cli_edge.json",
                               R"({"vertices":[{"id":"a","m":1},{"id":"b","m":1}],
                                   "edges":[{"u":"a","v":"b","w":1}]})");
  const auto glued3 = write_temp(
      "cli_glued3.json", R"({"family":"lattice","d":3,"m":1,"w":1,"C":12,"glue":{}})");
  const auto z3 = write_temp("cli_z3.json", R"({"family":"lattice","d":3,"m":1,"w":1,"C":6})");

  SUBCASE("ollivier on a single edge") {
    const auto r = run_cli("curvature ollivier --graph " + edge.string() + " --edge a,b");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["kappa"].get<double>() == doctest::Approx(2.0));
  }

  SUBCASE("malformed graph exits 2 with a position") {
    const auto broken = write_temp("cli_broken.json", "{\"vertices\": [,]}");
    const auto r = run_cli("curvature ollivier --graph " + broken.string() + " --edge a,b");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("line") != std::string::npos);
  }

  SUBCASE("json errors flag emits machine-readable stderr") {
    const auto broken = write_temp("cli_broken2.json", "not json");
    const auto r = run_cli("--json-errors curvature ollivier --graph " + broken.string() +
                           " --edge a,b");
    CHECK(r.exit_code == 2);
    const json j = json::parse(r.out);
    CHECK(j["error"] == "parse");
  }

  SUBCASE("refused dimension certificate exits 1") {
    const auto r =
        run_cli("harmonic dimbound --gen " + glued3.string() + " --R0 -1 --probe 3");
    CHECK(r.exit_code == 1);
    const json j = json::parse(r.out);
    CHECK(j["granted"] == false);
    CHECK(!j["curvature"]["violations"].empty());
  }

  SUBCASE("granted dimension certificate exits 0") {
    const auto r = run_cli("harmonic dimbound --gen " + glued3.string() +
                           " --R0 1 --probe 4 --mode ollivier");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["dimension_bound"] == 36);
  }

  SUBCASE("vertex budget environment variable exits 3") {
    const auto ok = run_cli("harmonic green --gen " + z3.string() + " --rho-schedule 6,8");
    CHECK(ok.exit_code == 0);
    const std::string cmd = std::string("CURVGRAPH_BUDGET=20 ") + cli_path() +
                            " harmonic green --gen " + z3.string() +
                            " --rho-schedule 6,8 > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 3);
  }

  SUBCASE("ends count on Z") {
    const auto gz = write_temp("cli_z.json", R"({"family":"lattice","d":1,"m":1,"w":1,"C":2})");
    const auto omega = write_temp("cli_omega.json", R"({"vertices":[[0]]})");
    const auto r = run_cli("ends count --gen " + gz.string() + " --omega " + omega.string() +
                           " --probe 10");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["count"] == 2);
    CHECK(j["stable"] == true);
  }

  SUBCASE("gh check on marching glued lattice") {
    const auto gl2 = write_temp("cli_glued2.json",
                                R"({"family":"lattice","d":2,"m":1,"w":1,"C":8,"glue":{}})");
    const auto ray = write_temp("cli_ray.json", R"({"direction":[1,0]})");
    const auto r = run_cli("gh check --gen " + gl2.string() + " --roots " + ray.string() +
                           " --indices 4..12 --radius 3 --eps 1e-3");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["verdict"] == "converged");
    CHECK(j["stabilization_index"] == 4);
  }

  SUBCASE("csv output") {
    const auto gz = write_temp("cli_z1.json", R"({"family":"lattice","d":1,"m":1,"w":1,"C":2})");
    const auto r = run_cli("--csv harmonic green --gen " + gz.string() +
                           " --rho-schedule 2,3,4");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("rho,vertex,value", 0) == 0);
  }
}
