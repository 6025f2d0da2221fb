#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "toric/report.hpp"

using namespace toric;
using nlohmann::json;

namespace {

json minimal_config() {
  return json{{"polytope", {{"name", "interval"}}},
              {"potential", {{"beta", 0.5}}},
              {"weight", {{"k", {0}}}},
              {"solver", {{"degree", 12}, {"cluster_tol", 1e-6}}}};
}

}  // namespace

TEST_CASE("minimal config parses") {
  RunConfig cfg = parse_config(minimal_config(), "spectrum");
  CHECK(cfg.spec.polytope.dim() == 1);
  CHECK(cfg.spec.beta == 0.5);
  CHECK(cfg.solver.degree == 12);
  CHECK(cfg.k[0] == 0);
}

TEST_CASE("unknown keys are rejected by name") {
  json j = minimal_config();
  j["solver"]["magic"] = 3;
  try {
    parse_config(j, "spectrum");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("solver.magic") != std::string::npos);
  }
}

TEST_CASE("physics knobs have no defaults") {
  json j = minimal_config();
  j["potential"].erase("beta");
  CHECK_THROWS_AS(parse_config(j, "spectrum"), SchemaError);
  j = minimal_config();
  j["solver"].erase("cluster_tol");
  CHECK_THROWS_AS(parse_config(j, "spectrum"), SchemaError);
}

TEST_CASE("missing command blocks") {
  CHECK_THROWS_AS(parse_config(minimal_config(), "flow"), MissingBlock);
  CHECK_THROWS_AS(parse_config(minimal_config(), "hull"), MissingBlock);
  CHECK_THROWS_AS(parse_config(minimal_config(), "critical"), MissingBlock);
  CHECK_THROWS_AS(parse_config(minimal_config(), "check"), MissingBlock);
}

TEST_CASE("weight length must match the polytope dimension") {
  json j = minimal_config();
  j["weight"]["k"] = {1, 0};
  CHECK_THROWS_AS(parse_config(j, "spectrum"), SchemaError);
}

TEST_CASE("config echo round-trips") {
  json j = minimal_config();
  j["potential"]["correction"] = json::array(
      {{{"exponents", {2}}, {"coefficient", 0.1}}});
  RunConfig a = parse_config(j, "spectrum");
  RunConfig b = parse_config(a.echo, "spectrum");
  CHECK(a.spec.beta == b.spec.beta);
  CHECK(a.solver.degree == b.solver.degree);
  Eigen::VectorXd x(1);
  x << 0.37;
  CHECK(a.spec.correction(x) == doctest::Approx(b.spec.correction(x)));
  CHECK(a.echo == b.echo);
}

TEST_CASE("load_config reports parse failures") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "toric-config-test";
  fs::create_directories(dir);
  fs::path bad = dir / "bad.json";
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_AS(load_config(bad.string(), "spectrum"), ParseError);
  CHECK_THROWS_AS(load_config((dir / "absent.json").string(), "spectrum"),
                  ParseError);
}

TEST_CASE("runs are deterministic and outputs hashed") {
  RunConfig cfg = parse_config(minimal_config(), "spectrum");
  RunReport r1 = run_command(cfg);
  RunReport r2 = run_command(cfg);
  CHECK(r1.payload.dump() == r2.payload.dump());
  CHECK(r1.payload["results"]["lambda1"].get<double>() ==
        doctest::Approx(2.0).epsilon(1e-9));

  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "toric-emit-test";
  fs::remove_all(dir);
  emit_outputs(r1, dir.string(), 12.5);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "manifest.json"));

  std::ifstream mf(dir / "manifest.json");
  json manifest;
  mf >> manifest;
  bool found = false;
  for (const auto& f : manifest["files"]) {
    if (f["name"] == "report.json") {
      std::ifstream rf(dir / "report.json", std::ios::binary);
      std::string body((std::istreambuf_iterator<char>(rf)),
                       std::istreambuf_iterator<char>());
      CHECK(f["sha256"].get<std::string>() == sha256_hex(body));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("spectrum run can dump eigenfunction fields") {
  json j = minimal_config();
  j["output"] = {{"dump_eigenfunction", true}, {"grid", 9}};
  RunConfig cfg = parse_config(j, "spectrum");
  RunReport r = run_command(cfg);
  REQUIRE(r.csv_files.size() == 1);
  CHECK(r.csv_files[0].first == "eigenfunction_0.csv");
  CHECK(r.csv_files[0].second.rfind("x0,value\n", 0) == 0);
}

TEST_CASE("spot failures carry the failing grid point") {
  json j = minimal_config();
  j["potential"]["correction"] = json::array(
      {{{"exponents", {2}}, {"coefficient", -1.0}}});
  RunConfig cfg = parse_config(j, "spectrum");
  try {
    run_command(cfg);
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(std::string(e.what()).find("grid point") != std::string::npos);
  }
}
