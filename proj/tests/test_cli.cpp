#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gfield/jobs.hpp"

using namespace gfield;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "gfield_test" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace

TEST_CASE("expect job produces the moment band") {
  const json config = {
      {"params", {{"sigma_lo_sq", 1.0}, {"sigma_hi_sq", 4.0}}},
      {"regions", {{{"box", {{"lo", {0.0}}, {"hi", {1.0}}}}}}},
      {"phi", "x1^2"},
      {"t", 1.0},
  };
  jobs::JobContext ctx;
  const auto dir = fresh_dir("expect");
  ctx.out_dir = dir.string();
  std::ostringstream log;
  CHECK(jobs::run("expect", config, ctx, log) == 0);
  const json result = json::parse(slurp(dir / "result.json"));
  CHECK(result.at("results").at(0).at("value_upper").get<double>() ==
        doctest::Approx(4.0).epsilon(1e-6));
  CHECK(result.at("results").at(0).at("value_lower").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(result.at("results").at(0).at("engine") == "pde");
}

TEST_CASE("region literals: box, polygon, union") {
  const json spec = {{"union",
                      {{{"box", {{"lo", {0.0, 0.0}}, {"hi", {1.0, 1.0}}}}},
                       {{"polygon", {{2.0, 0.0}, {3.0, 0.0}, {3.0, 1.0}, {2.0, 1.0}}}}}}};
  const geo::Region r = jobs::region_from_json(spec);
  CHECK(geo::measure(r) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("schema errors exit 2, engine problems exit 3") {
  jobs::JobContext ctx;
  ctx.out_dir = fresh_dir("errors").string();
  std::ostringstream log;

  // malformed phi reports the parse position
  const json bad_phi = {
      {"params", {{"sigma_lo_sq", 1.0}, {"sigma_hi_sq", 4.0}}},
      {"regions", {{{"box", {{"lo", {0.0}}, {"hi", {1.0}}}}}}},
      {"phi", "x1*+2"},
  };
  CHECK(jobs::run("expect", bad_phi, ctx, log) == 2);
  CHECK(log.str().find("position") != std::string::npos);

  const json no_regions = {{"params", {{"sigma_lo_sq", 1.0}, {"sigma_hi_sq", 4.0}}},
                           {"phi", "x1"}};
  CHECK(jobs::run("expect", no_regions, ctx, log) == 2);

  const json bad_params = {{"params", {{"sigma_lo_sq", 4.0}, {"sigma_hi_sq", 1.0}}},
                           {"regions", {{{"box", {{"lo", {0.0}}, {"hi", {1.0}}}}}}},
                           {"phi", "x1"}};
  CHECK(jobs::run("expect", bad_params, ctx, log) == 2);

  CHECK(jobs::run("no-such-command", json::object(), ctx, log) == 2);
}

TEST_CASE("identical configs byte-reproduce their outputs") {
  const json config = {
      {"params", {{"sigma_lo_sq", 1.0}, {"sigma_hi_sq", 4.0}}},
      {"regions",
       {{{"box", {{"lo", {0.0}}, {"hi", {1.0}}}}},
        {{"box", {{"lo", {1.0}}, {"hi", {2.5}}}}}}},
      {"phi", "max(x1,x2)"},
      {"engine", "oracle"},
      {"dp", {{"steps", 40}, {"quad", 10}}},
  };
  jobs::JobContext ctx;
  ctx.seed = 9;
  std::ostringstream log;
  const auto dir1 = fresh_dir("repro1");
  const auto dir2 = fresh_dir("repro2");
  ctx.out_dir = dir1.string();
  REQUIRE(jobs::run("oracle", config, ctx, log) == 0);
  ctx.out_dir = dir2.string();
  REQUIRE(jobs::run("oracle", config, ctx, log) == 0);
  CHECK(slurp(dir1 / "result.json") == slurp(dir2 / "result.json"));
}

TEST_CASE("simulate emits a deterministic CSV") {
  const json config = {{"params", {{"sigma_lo_sq", 1.0}, {"sigma_hi_sq", 4.0}}},
                       {"simulate",
                        {{"x_max", 1.0},
                         {"y_max", 1.0},
                         {"nx", 4},
                         {"ny", 4},
                         {"paths", 50},
                         {"sigma_sq", 4.0}}}};
  jobs::JobContext ctx;
  ctx.seed = 42;
  std::ostringstream log;
  const auto dir1 = fresh_dir("sim1");
  const auto dir2 = fresh_dir("sim2");
  ctx.out_dir = dir1.string();
  REQUIRE(jobs::run("simulate", config, ctx, log) == 0);
  ctx.out_dir = dir2.string();
  REQUIRE(jobs::run("simulate", config, ctx, log) == 0);
  const std::string csv = slurp(dir1 / "paths.csv");
  CHECK(csv == slurp(dir2 / "paths.csv"));
  CHECK(csv.rfind("x1,x2,value,path_id\n", 0) == 0);

  // a different seed must change the draws
  ctx.seed = 43;
  const auto dir3 = fresh_dir("sim3");
  ctx.out_dir = dir3.string();
  REQUIRE(jobs::run("simulate", config, ctx, log) == 0);
  CHECK(csv != slurp(dir3 / "paths.csv"));
}

TEST_CASE("st-expect runs a layered model from config") {
  const json config = {{"params", {{"sigma_lo_sq", 1.0}, {"sigma_hi_sq", 4.0}}},
                       {"times", {0.0, 1.0}},
                       {"cells", {{{"box", {{"lo", {0.0}}, {"hi", {1.0}}}}}}},
                       {"phi", "x1^2"}};
  jobs::JobContext ctx;
  const auto dir = fresh_dir("st");
  ctx.out_dir = dir.string();
  std::ostringstream log;
  REQUIRE(jobs::run("st-expect", config, ctx, log) == 0);
  const json result = json::parse(slurp(dir / "result.json"));
  CHECK(result.at("results").at(0).at("value_upper").get<double>() ==
        doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("check command aggregates suite results without failing the exit code") {
  const json config = {{"check", {{"suite", "consistency"}, {"instances", 50}}}};
  jobs::JobContext ctx;
  const auto dir = fresh_dir("check");
  ctx.out_dir = dir.string();
  std::ostringstream log;
  CHECK(jobs::run("check", config, ctx, log) == 0);
  const json result = json::parse(slurp(dir / "check.json"));
  CHECK(result.at("suites").contains("consistency"));
  CHECK(result.at("suites").at("consistency").at("all_pass").get<bool>());
}

TEST_CASE("integrate job reports the isometry and the integral law") {
  const json config = {{"params", {{"sigma_lo_sq", 1.0}, {"sigma_hi_sq", 4.0}}},
                       {"f", {{"indicator", {{"box", {{"lo", {0.0}}, {"hi", {2.0}}}}}}}},
                       {"phi", "x1^2"}};
  jobs::JobContext ctx;
  const auto dir = fresh_dir("integrate");
  ctx.out_dir = dir.string();
  std::ostringstream log;
  REQUIRE(jobs::run("integrate", config, ctx, log) == 0);
  const json result = json::parse(slurp(dir / "result.json"));
  CHECK(result.at("l2_norm_sq").get<double>() == 2.0);
  const auto& rows = result.at("results");
  CHECK(rows.at(0).at("value_upper").get<double>() == 8.0);  // sigma_hi^2 * ||f||^2
  CHECK(rows.at(0).at("value_upper") == rows.at(1).at("value_upper"));
  // E[(I(f))^2] through the engine agrees with the isometry value
  CHECK(rows.at(2).at("value_upper").get<double>() == doctest::Approx(8.0).epsilon(5e-3));
}

TEST_CASE("st-integral job runs the property suite") {
  const json config = {{"params", {{"sigma_lo_sq", 1.0}, {"sigma_hi_sq", 4.0}}},
                       {"times", {0.0, 0.5, 1.0}},
                       {"cells", {{{"box", {{"lo", {0.0}}, {"hi", {1.0}}}}}}},
                       {"process", {{"coeff", {{1.0}, {"x1"}}}}}};
  jobs::JobContext ctx;
  const auto dir = fresh_dir("st_integral");
  ctx.out_dir = dir.string();
  std::ostringstream log;
  REQUIRE(jobs::run("st-integral", config, ctx, log) == 0);
  const json result = json::parse(slurp(dir / "result.json"));
  CHECK(result.at("properties").at("all_pass").get<bool>());
  CHECK(std::abs(result.at("results").at(0).at("value_upper").get<double>()) <= 1e-8);
  CHECK(result.at("m2_norm").get<double>() > 0.0);
}

TEST_CASE("grid overrides from config reach the solver") {
  const json config = {{"params", {{"sigma_lo_sq", 1.0}, {"sigma_hi_sq", 4.0}}},
                       {"regions", {{{"box", {{"lo", {0.0}}, {"hi", {1.0}}}}}}},
                       {"phi", "x1^2"},
                       {"grid", {{"h", 0.1}, {"dt", "auto"}, {"radius_mult", 8}}}};
  jobs::JobContext ctx;
  const auto dir = fresh_dir("grid_override");
  ctx.out_dir = dir.string();
  std::ostringstream log;
  REQUIRE(jobs::run("expect", config, ctx, log) == 0);
  const json result = json::parse(slurp(dir / "result.json"));
  const std::string desc = result.at("results").at(0).at("grid_descriptor").get<std::string>();
  CHECK(desc.find("h=0.1") != std::string::npos);
  CHECK(result.at("results").at(0).at("value_upper").get<double>() ==
        doctest::Approx(4.0).epsilon(1e-9));
}
