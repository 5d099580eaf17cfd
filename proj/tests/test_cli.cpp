#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nilgeom/cli/cli.hpp"
#include "nilgeom/weil/expression.hpp"
#include "nilgeom/weil/spec.hpp"

namespace fs = std::filesystem;
using nilgeom::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("nilgeom_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("algebra reduces in the declared spec") {
  auto r = call({"algebra", "--spec", "D(2)", "--expr", "(1+x1)*(1+x2)"});
  CHECK(r.code == 0);
  CHECK(r.out == "1 + x1 + x2\naugmentation: 1\n");

  r = call({"algebra", "--spec", "D_2(1)", "--expr", "x*x*x"});
  CHECK(r.code == 0);
  CHECK(r.out == "0\naugmentation: 0\n");

  r = call({"algebra", "--spec", "D_3(2)", "--expr", "(2 - x1·x2)^2 - 3*x2"});
  CHECK(r.out == "4 - 3*x2 - 4*x1*x2\naugmentation: 4\n");
}

TEST_CASE("algebra input errors exit 2 with a column") {
  auto r = call({"algebra", "--spec", "D(2)", "--expr", "x1*("});
  CHECK(r.code == 2);
  // End of input, one past the last of four characters.
  CHECK(r.err.find("column 5") != std::string::npos);

  r = call({"algebra", "--spec", "D(2)", "--expr", "1 + x3"});
  CHECK(r.code == 2);
  CHECK(r.err.find("column 5") != std::string::npos);
  CHECK(r.err.find("x3") != std::string::npos);

  CHECK(call({"algebra", "--spec", "Q(2)", "--expr", "1"}).code == 2);
  CHECK(call({"algebra", "--spec", "D(2)"}).code == 2);
}

TEST_CASE("expression parser columns count characters") {
  const auto spec = nilgeom::weil::parse_spec("D(2)");
  try {
    nilgeom::weil::parse_expression(spec, "x1·x2 )");
    FAIL("expected a parse error");
  } catch (const nilgeom::weil::ExpressionError& e) {
    CHECK(e.column() == 7);
  }
  CHECK_THROWS_AS(nilgeom::weil::parse_expression(spec, "x1/x2"), nilgeom::weil::ExpressionError);
}

TEST_CASE("curvature on sphere2 matches the oracle") {
  const auto r = call({"curvature", "--chart", "sphere2", "--radius", "1", "--point", "1.0472,0.5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"max_rel_err\"") != std::string::npos);
  CHECK(r.out.find("\"convention\"") != std::string::npos);
}

TEST_CASE("curvature on flat space is zero") {
  const auto r = call({"curvature", "--chart", "euclidean", "--dim", "4", "--point", "0,0,0,0",
                       "--format", "csv"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "point,component,synthetic,classical,abs_err,rel_err");
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(line == "0;0;0;0," + std::to_string(rows) + ",0,0,0,0");
    ++rows;
  }
  CHECK(rows == 4);
}

TEST_CASE("curvature rejects bad input with exit 2") {
  CHECK(call({"curvature", "--chart", "sphere2", "--radius", "1", "--point", "0,0"}).code == 2);
  CHECK(call({"curvature", "--chart", "sphere2", "--point", "1,2,3"}).code == 2);
  CHECK(call({"curvature", "--chart", "sphere2", "--point", "1,abc"}).code == 2);
  CHECK(call({"curvature", "--chart", "sphere2", "--radius", "-1", "--point", "1,1"}).code == 2);
  CHECK(call({"curvature", "--chart", "torus", "--point", "1,1"}).code == 2);
  CHECK(call({"curvature", "--chart", "sphere2", "--point", "1,1", "--t2", "e5"}).code == 2);
}

TEST_CASE("curvature tolerance failure exits 1") {
  // Finite-difference Christoffel symbols cannot reach 1e-12.
  const auto r = call({"curvature", "--chart", "sphere3", "--radius", "0.5", "--point", "1.1,0.7,2.0",
                       "--t1", "0.3,-0.2,0.9", "--t2", "0.5,0.4,-0.1", "--t3", "0.2,0.8,0.3", "--fd",
                       "--tol", "1e-12"});
  CHECK(r.code == 1);
  CHECK(r.err.find("tolerance exceeded") != std::string::npos);
  CHECK(r.out.find("finite_difference") != std::string::npos);
}

TEST_CASE("simulate writes timeline and atlas files") {
  const auto dir = scratch("simulate");
  auto r = call({"simulate", "--h", "0.5", "--tau", "-2:2", "--steps", "9", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  const auto csv = slurp(dir / "timeline.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
  CHECK(csv.find("-2,2,SET,1.5,,negative\n") != std::string::npos);
  CHECK(slurp(dir / "atlas.json").find("\"single_global_chart\": false") != std::string::npos);

  r = call({"simulate", "--h", "0.5", "--tau", "-2:2", "--steps", "9", "--format", "json", "--out-dir",
            dir.string()});
  REQUIRE(r.code == 0);
  const auto json = slurp(dir / "timeline.json");
  CHECK(json.find("\"divisions_at_or_below_h\": 0") != std::string::npos);
}

TEST_CASE("simulate honours the output directory variable") {
  const auto dir = scratch("env");
  ::setenv("NILGEOM_OUTPUT_DIR", dir.string().c_str(), 1);
  const auto r = call({"simulate", "--h", "0.5", "--steps", "3"});
  ::unsetenv("NILGEOM_OUTPUT_DIR");
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "timeline.csv"));
  CHECK(fs::exists(dir / "atlas.json"));
}

TEST_CASE("simulate rejects invalid configurations") {
  CHECK(call({"simulate", "--h", "0.5", "--steps", "1"}).code == 2);
  CHECK(call({"simulate", "--h", "0"}).code == 2);
  CHECK(call({"simulate", "--tau", "2:-2"}).code == 2);
  CHECK(call({"simulate", "--tau", "nonsense"}).code == 2);
  CHECK(call({"simulate", "--m", "9"}).code == 2);
  CHECK(call({"simulate", "--profile", "cubic"}).code == 2);
}

TEST_CASE("selftest filters suites and detects an injected sign fault") {
  auto r = call({"selftest", "--suite", "weil"});
  CHECK(r.code == 0);
  CHECK(r.out.find("[PASS] weil") != std::string::npos);
  CHECK(r.out.find("holonomy") == std::string::npos);

  r = call({"selftest", "--suite", "holonomy", "--inject-fault", "sign"});
  CHECK(r.code == 1);
  CHECK(r.out.find("[FAIL] holonomy") != std::string::npos);
  CHECK(r.err.find("holonomy/oracle_equivalence") != std::string::npos);

  CHECK(call({"selftest", "--suite", "nope"}).code == 2);
}

TEST_CASE("usage errors, help and version") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  auto r = call({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("nilgeom ", 0) == 0);
  r = call({"algebra", "--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("Dinf(") != std::string::npos);
  CHECK(call({"simulate", "--help"}).code == 0);
}
