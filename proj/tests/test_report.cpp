#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "soliton/error.hpp"
#include "soliton/verify.hpp"

using namespace soliton;
using nlohmann::json;

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

const IdentityReport* find(const RunReport& r, const std::string& identity) {
  for (const auto& x : r.reports)
    if (x.identity == identity) return &x;
  return nullptr;
}

}  // namespace

TEST_CASE("report JSON round-trips") {
  RunReport run;
  run.spec.model = "bryant";
  run.spec.params.dim = 4;
  run.spec.params.a = -0.25;
  run.spec.suite = "brendle";
  run.spec.tolerances["x_residual"] = 1e-9;
  run.spec.seed = 42;
  IdentityReport r;
  r.case_name = "bryant(4,a=-0.25)";
  r.identity = "x_residual";
  r.dim = 4;
  r.points = {{0.1, 0.2}, {1.0 / 3.0, 2.5}};
  r.max_abs_residual = 1.2345678901234567e-11;
  r.tolerance = 1e-9;
  r.pass = true;
  run.reports.push_back(r);
  r.expected_failure = true;
  r.pass = false;
  r.max_abs_residual = NAN;
  run.reports.push_back(r);
  run.overall_pass = overall_pass(run.reports);
  run.timings["brendle"] = 0.5;

  const json j = run;
  for (const char* key : {"tool_version", "spec", "reports", "overall_pass", "timings"}) CHECK(j.contains(key));
  for (const char* key : {"case", "identity", "dim", "points", "max_abs_residual", "tolerance", "pass"})
    CHECK(j["reports"][0].contains(key));
  CHECK_FALSE(j["reports"][0].contains("expected_failure"));
  CHECK(j["reports"][1]["expected_failure"] == true);
  CHECK(j["spec"]["seed"] == 42);

  const auto back = json::parse(dump(j)).get<RunReport>();
  CHECK(dump(json(back)) == dump(j));
  CHECK(back.reports[0].points[1][0] == 1.0 / 3.0);
  CHECK(back.reports[0].max_abs_residual == 1.2345678901234567e-11);
  CHECK(std::isnan(back.reports[1].max_abs_residual));
  CHECK(*back.spec.params.a == -0.25);
  CHECK(back.spec.tolerances.at("x_residual") == 1e-9);
}

TEST_CASE("overall pass honours expected failures") {
  IdentityReport ok{.pass = true}, bad{.pass = false}, negative{.pass = false, .expected_failure = true};
  CHECK(overall_pass({ok, negative}));
  CHECK_FALSE(overall_pass({ok, bad}));
  IdentityReport surprise{.pass = true, .expected_failure = true};
  CHECK_FALSE(overall_pass({surprise}));
  CHECK(overall_pass({}));
}

TEST_CASE("merged matrix") {
  VerifySpec a{.model = "cigar", .suite = "steady-identities"};
  VerifySpec b{.model = "line-cigar", .suite = "level-geometry"};
  auto m = merge_reports({run_verify(b), run_verify(a)});
  REQUIRE(m["rows"].size() == 2);
  CHECK(m["rows"][0]["case"] == "cigar(2)");
  CHECK(m["rows"][1]["case"] == "line-cigar(3)");
  CHECK(m["rows"][1]["residuals"]["level_set_rigidity"].get<double>() > 0.1);
  CHECK(m["overall_pass"] == true);
}

TEST_CASE("worker pool") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t k) { hits[k] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t k) {
                    if (k >= 3) throw Error(ErrorCode::invalid_params, std::to_string(k));
                  }),
                  Error);
  try {
    parallel_for(10, [](std::size_t k) {
      if (k >= 3) throw Error(ErrorCode::invalid_params, std::to_string(k));
    });
  } catch (const Error& e) {
    CHECK(std::string(e.what()).ends_with(": 3"));
  }
  ::setenv("SOLITON_FORGE_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  ::setenv("SOLITON_FORGE_THREADS", "zero", 1);
  CHECK(worker_count() >= 1);
  ::unsetenv("SOLITON_FORGE_THREADS");
}

TEST_CASE("suites on the model registry") {
  auto cigar = run_verify({.model = "cigar", .suite = "steady-identities"});
  CHECK(cigar.overall_pass);
  for (const auto& r : cigar.reports) CHECK(r.max_abs_residual < 1e-9);

  auto lc = run_verify({.model = "line-cigar", .suite = "level-geometry"});
  CHECK(lc.overall_pass);
  REQUIRE(find(lc, "level_set_rigidity"));
  CHECK_FALSE(find(lc, "level_set_rigidity")->pass);
  CHECK(find(lc, "level_set_rigidity")->expected_failure);
  CHECK(find(lc, "d2_norm_formula")->pass);

  auto b5 = run_verify({.model = "bryant", .params = {.dim = 5}, .suite = "conformal-tensors"});
  CHECK(b5.overall_pass);
  for (const char* id : {"weyl_vanishes", "cotton_vanishes", "bach_vanishes", "d_vanishes"}) {
    REQUIRE(find(b5, id));
    CHECK(find(b5, id)->max_abs_residual < 1e-6);
  }

  auto strict = run_verify({.model = "cigar", .suite = "steady-identities", .tolerances = {{"soliton_equation", 1e-30}}});
  CHECK_FALSE(strict.overall_pass);
  CHECK(find(strict, "soliton_equation")->tolerance == 1e-30);

  auto seeded = run_verify({.model = "cigar", .suite = "steady-identities", .seed = 7});
  CHECK(seeded.reports[0].points != cigar.reports[0].points);

  CHECK_THROWS_AS(run_verify({.model = "cigar", .suite = "brendle"}), Error);
  CHECK_THROWS_AS(run_verify({.model = "cigar", .suite = "nope"}), Error);
  CHECK_THROWS_AS(run_verify({.model = "cigar", .tolerances = {{"x", -1.0}}}), Error);
  auto all = run_verify({.model = "cigar"});
  CHECK(all.overall_pass);
  CHECK(all.timings.empty());
  CHECK_FALSE(run_verify({.model = "cigar", .suite = "steady-identities", .timings = true}).timings.empty());
}

TEST_CASE("asymptotics suite records the Ricci sign only in the positive range") {
  auto positive = run_verify({.model = "expander", .params = {.dim = 3}, .suite = "asymptotics"});
  CHECK(positive.overall_pass);
  REQUIRE(find(positive, "ricci_nonnegative"));
  auto mixed = run_verify({.model = "expander", .params = {.dim = 3, .a = -0.25}, .suite = "asymptotics"});
  CHECK(mixed.overall_pass);
  CHECK_FALSE(find(mixed, "ricci_nonnegative"));
  auto scaled = run_verify({.model = "bryant", .params = {.dim = 3, .a = -1.0}, .suite = "asymptotics"});
  CHECK(scaled.overall_pass);
}

TEST_CASE("deterministic output") {
  VerifySpec spec{.model = "bryant", .params = {.dim = 3}, .suite = "all"};
  const auto first = dump(json(run_verify(spec)));
  ::setenv("SOLITON_FORGE_THREADS", "1", 1);
  const auto second = dump(json(run_verify(spec)));
  ::unsetenv("SOLITON_FORGE_THREADS");
  CHECK(first == second);
}

TEST_CASE("profile CSV and summary") {
  auto s = model("bryant", {.dim = 3, .rmax = 30.0});
  std::stringstream csv;
  write_profile_csv(csv, s);
  std::string line;
  std::getline(csv, line);
  CHECK(line == "r,w,dw,f,df,R,Ric_rr,Ric_sph,D_norm,B_norm");
  std::size_t rows = 0, engine_rows = 0;
  while (std::getline(csv, line)) {
    const auto cells = split_line(line);
    REQUIRE(cells.size() == 10);
    const auto& node = s.profile()->nodes()[rows];
    CHECK(std::stod(cells[0]) == node.r);
    CHECK(std::stod(cells[1]) == node.w);
    const auto curv = warped_curvature(3, node.w, node.dw, node.d2w);
    CHECK(std::stod(cells[5]) == doctest::Approx(curv.scalar).epsilon(1e-14));
    CHECK(std::stod(cells[7]) == doctest::Approx(curv.ric_tangent).epsilon(1e-14));
    if (cells[8] != "nan") {
      ++engine_rows;
      CHECK(node.r >= 0.1);
      CHECK(std::stod(cells[8]) < 1e-9);
      CHECK(std::stod(cells[9]) < 1e-9);
    }
    ++rows;
  }
  CHECK(rows == s.profile()->nodes().size());
  CHECK(engine_rows + 2 > rows / 2);
  CHECK_THROWS_AS(write_profile_csv(csv, model("cigar")), Error);

  const auto summary = profile_summary(*s.profile());
  CHECK(summary["decay_const"].is_null());
  CHECK(summary.contains("asymptotics_error"));
  CHECK(summary["center_limit"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));

  std::stringstream plot;
  write_plot_csv(plot, *s.profile());
  std::getline(plot, line);
  CHECK(line == "r,R,rR,V");
}
