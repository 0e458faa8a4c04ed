#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ofrac/errors.hpp"
#include "ofrac/scenario.hpp"

using namespace ofrac;
namespace fs = std::filesystem;

namespace {

nlohmann::json minimal() {
  return nlohmann::json::parse(R"({
    "version": 1, "name": "t", "young": {"family": "power", "p": 2}, "s": 0.5,
    "functions": {}, "operations": []
  })");
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ofrac-test-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("empty scenario passes") {
  RunOptions opt;
  opt.out_dir = scratch("empty");
  const auto out = execute_scenario(parse_scenario(minimal()), opt);
  CHECK(out.passed);
  CHECK(out.report["results"].empty());
  CHECK(fs::exists(opt.out_dir / "report.json"));
}

TEST_CASE("schema violations") {
  auto j = minimal();
  SUBCASE("s outside (0, 1)") { j["s"] = 1.5; }
  SUBCASE("dimension other than 1") { j["n"] = 2; }
  SUBCASE("unknown operation") { j["operations"] = {{{"op", "integrate_everything"}}}; }
  SUBCASE("unknown top-level key") { j["colour"] = "blue"; }
  SUBCASE("wrong version") { j["version"] = 7; }
  SUBCASE("unknown generator") {
    j["functions"]["u"] = {{"kind", "closed_form"}, {"name", "sinc"}};
    j["operations"] = {{{"op", "lg_membership"}, {"function", "u"}}};
  }
  CHECK_THROWS_AS(execute_scenario(parse_scenario(j), RunOptions{scratch("bad")}), SchemaError);
}

TEST_CASE("unknown generator parameter") {
  CHECK_THROWS_AS(make_generator("bump", {{"width", 1.0}}), SchemaError);
  CHECK_THROWS_AS(make_generator("sinc"), SchemaError);
}

TEST_CASE("run_scenario exit codes") {
  const auto dir = scratch("codes");
  fs::create_directories(dir);
  auto j = minimal();
  j["s"] = 1.5;
  std::ofstream(dir / "bad.json") << j.dump();
  CHECK(run_scenario(dir / "bad.json", RunOptions{dir / "bad"}) == 1);
  CHECK(run_scenario(dir / "missing.json", RunOptions{dir / "missing"}) == 1);

  // A reference far from the true value makes the check fail.
  j = nlohmann::json::parse(slurp(fs::path(OFRAC_SCENARIO_DIR) / "power-laplacian-sanity.json"));
  j["operations"][0]["reference"] = 1.0;
  std::ofstream(dir / "off.json") << j.dump();
  CHECK(run_scenario(dir / "off.json", RunOptions{dir / "off"}) == 2);
}

TEST_CASE("bundled scenarios pass") {
  for (const auto* name : {"power-laplacian-sanity.json", "dirichlet-comparison.json",
                           "orlicz-tour.json"}) {
    CAPTURE(name);
    CHECK(run_scenario(fs::path(OFRAC_SCENARIO_DIR) / name, RunOptions{scratch("bundled")}) == 0);
  }
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  const auto path = fs::path(OFRAC_SCENARIO_DIR) / "orlicz-tour.json";
  RunOptions a{scratch("det-a")};
  a.threads = 1;
  RunOptions b{scratch("det-b")};
  b.threads = 3;
  REQUIRE(run_scenario(path, a) == 0);
  REQUIRE(run_scenario(path, b) == 0);
  CHECK(slurp(a.out_dir / "report.json") == slurp(b.out_dir / "report.json"));
  for (const auto& entry : fs::directory_iterator(a.out_dir)) {
    CAPTURE(entry.path().filename());
    CHECK(slurp(entry.path()) == slurp(b.out_dir / entry.path().filename()));
  }
}

TEST_CASE("report layout") {
  RunOptions opt{scratch("layout")};
  const auto out = execute_scenario(
      load_scenario(fs::path(OFRAC_SCENARIO_DIR) / "power-laplacian-sanity.json"), opt);
  const auto& r = out.report;
  CHECK(r["schema_version"] == kScenarioSchemaVersion);
  CHECK(r["version"] == std::string(library_version()));
  REQUIRE(r["results"].size() == 1);
  CHECK(r["results"][0]["op"] == "pv_eval");
  CHECK(fs::exists(opt.out_dir / "0_pv_eval.csv"));
}

TEST_CASE("tolerance override and operation filter") {
  const auto sc = load_scenario(fs::path(OFRAC_SCENARIO_DIR) / "power-laplacian-sanity.json");
  RunOptions tight{scratch("tight")};
  tight.tol = 1e-14;
  CHECK_FALSE(execute_scenario(sc, tight).passed);
  RunOptions none{scratch("only")};
  none.only = {"norm"};
  const auto out = execute_scenario(sc, none);
  CHECK(out.passed);
  CHECK(out.report["results"].empty());
}

TEST_CASE("registries are sorted") {
  const auto gens = list_generators();
  std::vector<std::string> names;
  for (const auto& g : gens) names.push_back(g.name);
  CHECK(std::is_sorted(names.begin(), names.end()));
  CHECK(std::find(names.begin(), names.end(), "constant") != names.end());
  CHECK(std::find(names.begin(), names.end(), "truncated_parabola_s") != names.end());
  CHECK(std::is_sorted(operation_names().begin(), operation_names().end()));
}

TEST_CASE("thread resolution") {
  CHECK(resolve_threads(4) == 4);
  setenv("ORLICZ_FRAC_THREADS", "3", 1);
  CHECK(resolve_threads(0) == 3);
  unsetenv("ORLICZ_FRAC_THREADS");
  CHECK(resolve_threads(0) == 1);
}
