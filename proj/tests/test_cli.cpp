#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "runner.hpp"

using namespace widom;
using namespace widom::cli;
using nlohmann::json;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("widom_cli_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

int run_binary(const std::filesystem::path& config, const std::filesystem::path& out, const std::string& extra = "") {
  std::filesystem::create_directories(out);
  const std::string cmd = std::string(WIDOM_CLI_PATH) + " --quiet --config " + config.string() + " --out " +
                          out.string() + " " + extra + " 2>" + (out / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

ExperimentConfig parse(const std::string& text) { return parse_config(json::parse(text), "."); }

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.where();
  }
  return "";
}

}  // namespace

TEST_CASE("set descriptors") {
  const auto a = parse(R"({"task":"capacity","set":{"type":"interval-union","intervals":[[-1,1]]}})");
  REQUIRE(a.set);
  CHECK(a.set->real == RealIntervalUnion({{-1.0, 1.0}}));
  CHECK(a.set_id == "interval-union");
  CHECK(a.prefix == "interval-union_capacity");

  const auto c = parse(R"({"task":"capacity","set":{"type":"cantor","depth":2}})");
  CHECK(c.set->real->size() == 4);

  const auto d = parse(R"({"task":"capacity","set":{"type":"disk","center":[1,2],"radius":0.5}})");
  CHECK_FALSE(d.set->real);
  CHECK(std::get<Disk>(d.set->shapes[0]).center == Complex(1.0, 2.0));

  const auto m = parse(R"({"task":"capacity","set":{"type":"mixed","components":[
      {"type":"segment","a":-3,"b":-2},{"type":"interval-union","intervals":[[0,1]]}]}})");
  CHECK(m.set->real == RealIntervalUnion({{-3.0, -2.0}, {0.0, 1.0}}));

  const auto p = parse(R"({"task":"capacity","set":{"type":"polygon","vertices":[[-1,-1],[1,-1],[1,1],[-1,1]]}})");
  CHECK(std::get<Polygon>(p.set->shapes[0]).vertices.size() == 4);
}

TEST_CASE("config errors carry the field path") {
  CHECK(error_of(R"({"task":"capacity","set":{"type":"interval-union","intervals":[[1,0]]}})") == "/set/intervals");
  CHECK(error_of(R"({"task":"capacity","set":{"type":"disk","radius":-1}})") == "/set/radius");
  CHECK(error_of(R"({"task":"capacity","set":{"type":"blob"}})") == "/set/type");
  CHECK(error_of(R"({"task":"capacity","set":{"type":"disk","radius":1,"extra":0}})") == "/set/extra");
  CHECK(error_of(R"({"task":"capacity"})") == "/set");
  CHECK(error_of(R"({"task":"fly","set":{"type":"disk","radius":1}})") == "/task");
  CHECK(error_of(R"({"task":"series","set":{"type":"disk","radius":1}})") == "/params/degrees");
  CHECK(error_of(R"({"task":"series","set":{"type":"disk","radius":1},"params":{"degrees":[3,2]}})") ==
        "/params/degrees");
  CHECK(error_of(R"({"task":"cheb","set":{"type":"disk","radius":1},"params":{"solver":{"speed":1}}})") ==
        "/params/solver/speed");
  CHECK(error_of(R"({"task":"capacity","set":{"type":"mixed","components":[{"type":"disk","radius":1},
      {"type":"disk","center":[1,0],"radius":1}]}})") == "/set");
  CHECK(error_of(R"({"task":"capacity","set":{"type":"curve-file","path":"missing.txt"}})") == "/set/path");
}

TEST_CASE("config hash ignores the output section and key order") {
  const auto a = parse(R"({"task":"capacity","set":{"type":"disk","radius":1},"output":{"dir":"x"}})");
  const auto b = parse(R"({"set":{"radius":1,"type":"disk"},"task":"capacity"})");
  const auto c = parse(R"({"task":"capacity","set":{"type":"disk","radius":2}})");
  CHECK(config_hash(a.effective) == config_hash(b.effective));
  CHECK(config_hash(a.effective) != config_hash(c.effective));
  CHECK(config_hash(a.effective).size() == 16);
}

TEST_CASE("curve files") {
  const auto dir = scratch_dir("curve");
  std::ostringstream pts;
  pts << "# ellipse\n";
  for (int k = 0; k < 64; ++k) pts << 2.0 * std::cos(k * M_PI / 32) << ", " << std::sin(k * M_PI / 32) << "\n";
  write_file(dir / "ellipse.txt", pts.str());
  const auto cfg = parse_config(
      json::parse(R"({"task":"capacity","set":{"type":"curve-file","path":"ellipse.txt","closed":true}})"), dir);
  const auto& curve = std::get<DiscretizedCurve>(cfg.set->shapes[0]);
  CHECK(curve.size() == 64);
  CHECK(curve.closed());

  write_file(dir / "bad.txt", "1 2\n3\n");
  CHECK_THROWS_AS(read_curve_file(dir / "bad.txt"), ValidationError);
}

TEST_CASE("capacity task output") {
  const auto dir = scratch_dir("capacity");
  auto cfg = parse(R"({"set_id":"unit","task":"capacity","set":{"type":"interval-union","intervals":[[-1,1]]}})");
  cfg.out_dir = dir;
  std::ostringstream log;
  const auto r = run(cfg, log, true);
  CHECK(r.exit_code == kExitOk);
  const auto doc = json::parse(slurp(dir / "unit_capacity.json"));
  CHECK(doc["toolkit"] == "widom");
  CHECK(doc["config_hash"] == config_hash(cfg.effective));
  CHECK(doc["tasks"][0]["status"] == "ok");
  CHECK(doc["tasks"][0]["result"]["capacity"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("binary: series output, determinism and exit codes") {
  const auto dir = scratch_dir("binary");
  const auto series = write_file(
      dir / "circle.json",
      R"({"set_id":"circle","task":"series","set":{"type":"disk","radius":1},"params":{"n_min":1,"n_max":10}})");
  REQUIRE(run_binary(series, dir / "a") == kExitOk);
  REQUIRE(run_binary(series, dir / "b") == kExitOk);
  CHECK(slurp(dir / "a" / "circle_series.csv") == slurp(dir / "b" / "circle_series.csv"));
  CHECK(slurp(dir / "a" / "circle_series.json") == slurp(dir / "b" / "circle_series.json"));

  std::istringstream csv(slurp(dir / "a" / "circle_series.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
    REQUIRE(f.size() == 8);
    CHECK(std::abs(std::stod(f[6]) - 1.0) <= 1e-8);
    ++rows;
  }
  CHECK(rows == 10);

  const auto bad = write_file(dir / "bad.json", "{\"task\":\"capacity\",\n \"set\": {\"type\":\"disk\" \"radius\":1}}");
  CHECK(run_binary(bad, dir / "c") == kExitInvalid);
  CHECK(slurp(dir / "c" / "stderr.txt").find("bad.json:2:") != std::string::npos);

  const auto field = write_file(dir / "field.json", R"({"task":"capacity","set":{"type":"disk","radius":"big"}})");
  CHECK(run_binary(field, dir / "d") == kExitInvalid);
  CHECK(slurp(dir / "d" / "stderr.txt").find("/set/radius") != std::string::npos);

  SUBCASE("solver failure") {
    const auto hard = write_file(dir / "hard.json", R"({"task":"cheb","set":{"type":"cantor","depth":3},
        "params":{"n":20,"solver":{"real_bracket_tol":1e-300,"max_exchange_iterations":1,"refinement_rounds":0}}})");
    CHECK(run_binary(hard, dir / "e") == kExitSolver);
  }
  SUBCASE("verdicts") {
    const auto pass = write_file(dir / "pass.json", R"({"task":"verify-theorems","params":{"suites":["interval-baseline"]}})");
    CHECK(run_binary(pass, dir / "f") == kExitOk);
    const auto doc = json::parse(slurp(dir / "f" / "suites_verify-theorems.json"));
    CHECK(doc["tasks"][0]["result"]["checks"][0]["pass"] == true);
    const auto task = write_file(dir / "over.json", R"({"task":"capacity","set":{"type":"disk","radius":1}})");
    CHECK(run_binary(task, dir / "g", "--task levin") == kExitInvalid);
  }
}
