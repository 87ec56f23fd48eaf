#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::path(SOLITON_TEST_WORKDIR) / "cli";

int run(const std::string& args) {
  const std::string cmd = std::string(SOLITON_FORGE_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string at(const std::string& name) { return (kWork / name).string(); }

}  // namespace

TEST_CASE("verify exit codes and reports") {
  fs::create_directories(kWork);
  CHECK(run("verify --model cigar --suite steady-identities --out " + at("cigar.json")) == 0);
  auto cigar = json::parse(slurp(kWork / "cigar.json"));
  CHECK(cigar["overall_pass"] == true);
  CHECK(cigar["spec"]["seed"] == 0x5011);
  for (const auto& r : cigar["reports"]) CHECK(r["max_abs_residual"].get<double>() < 1e-9);

  CHECK(run("verify --model line-cigar --suite level-geometry --out " + at("lc.json")) == 0);
  auto lc = json::parse(slurp(kWork / "lc.json"));
  bool saw_control = false;
  for (const auto& r : lc["reports"])
    if (r["identity"] == "level_set_rigidity") {
      saw_control = true;
      CHECK(r["pass"] == false);
      CHECK(r["expected_failure"] == true);
    } else {
      CHECK(r["pass"] == true);
    }
  CHECK(saw_control);

  CHECK(run("verify --model bryant --dim 5 --suite conformal-tensors --out " + at("b5.json")) == 0);

  // A failing verification still writes its report.
  fs::remove(kWork / "strict.json");
  CHECK(run("verify --model cigar --suite steady-identities --tolerance soliton_equation=1e-30 --out " +
            at("strict.json")) == 1);
  CHECK(json::parse(slurp(kWork / "strict.json"))["overall_pass"] == false);

  CHECK(run("verify --model torus") == 2);
  CHECK(run("verify --model cigar --suite nope") == 2);
  CHECK(run("verify --model cigar --suite brendle") == 2);
  CHECK(run("verify --model bryant --a 0.5") == 2);
  CHECK(run("verify --model cigar --tolerance soliton_equation") == 2);
  CHECK(run("verify") == 2);
  CHECK(run("") == 2);
}

TEST_CASE("verify output is byte-identical across runs") {
  fs::create_directories(kWork);
  CHECK(run("verify --model bryant --dim 3 --suite all --seed 99 --out " + at("d1.json")) == 0);
  CHECK(run("verify --model bryant --dim 3 --suite all --seed 99 --out " + at("d2.json")) == 0);
  CHECK(slurp(kWork / "d1.json") == slurp(kWork / "d2.json"));
  CHECK(json::parse(slurp(kWork / "d1.json"))["spec"]["seed"] == 99);
}

TEST_CASE("bryant command") {
  fs::create_directories(kWork);
  CHECK(run("bryant --dim 3 --a -0.333333 --rmax 1000 --out " + at("b3")) == 0);
  auto summary = json::parse(slurp(kWork / "b3.json"));
  CHECK(summary["volume_exponent"].get<double>() == doctest::Approx(2.0).epsilon(0.075));
  CHECK(summary["potential_fit"]["pass"] == true);
  CHECK(summary["center_limit"].get<double>() == doctest::Approx(1.0).epsilon(1e-5));
  const auto csv = slurp(kWork / "b3.csv");
  CHECK(csv.starts_with("r,w,dw,f,df,R,Ric_rr,Ric_sph,D_norm,B_norm\n"));

  CHECK(run("bryant --dim 4 --a 0 --out " + at("flat4")) == 0);
  auto flat = json::parse(slurp(kWork / "flat4.json"));
  CHECK(flat["degenerate"] == true);
  CHECK(flat["decay_const"].is_null());

  CHECK(run("bryant --dim 4 --rho -0.5 --a -0.25 --rmax 200 --out " + at("e4")) == 0);
  CHECK(json::parse(slurp(kWork / "e4.json"))["potential_fit"]["pass"] == true);

  CHECK(run("bryant --dim 2 --out " + at("bad")) == 2);
  CHECK(run("bryant --dim 3 --rho 0.5 --out " + at("bad")) == 2);
  CHECK(run("bryant --dim 3 --a 1 --out " + at("bad")) == 2);
  CHECK(run("bryant --dim 3 --tol -1 --out " + at("bad")) == 2);
  CHECK(run("bryant --out " + at("bad")) == 2);
}

TEST_CASE("report command") {
  fs::create_directories(kWork);
  REQUIRE(run("verify --model cigar --suite steady-identities --out " + at("r1.json")) == 0);
  REQUIRE(run("verify --model line-cigar --suite level-geometry --out " + at("r2.json")) == 0);
  CHECK(run("report " + at("r2.json") + " " + at("r1.json") + " --out " + at("merged.json")) == 0);
  auto merged = json::parse(slurp(kWork / "merged.json"));
  REQUIRE(merged["rows"].size() == 2);
  CHECK(merged["rows"][0]["case"] == "cigar(2)");
  CHECK(run("report " + at("r1.json") + " " + at("r2.json") + " --out " + at("merged2.json")) == 0);
  CHECK(slurp(kWork / "merged.json") == slurp(kWork / "merged2.json"));

  CHECK(run("report") == 2);
  std::ofstream(kWork / "junk.json") << "{not json";
  CHECK(run("report " + at("junk.json")) == 2);
  CHECK(run("report " + at("missing.json")) == 2);

  REQUIRE(run("verify --model bryant --dim 3 --rmax 1000 --suite steady-identities --out " + at("b3r.json")) == 0);
  fs::remove_all(kWork / "plots");
  CHECK(run("report " + at("b3r.json") + " --out " + at("b3m.json") + " --plot-dir " + at("plots")) == 0);
  const auto plot = kWork / "plots" / "bryant(3)_rmax1000.csv";
  REQUIRE(fs::exists(plot));
  std::ifstream is(plot);
  std::string line;
  std::getline(is, line);
  CHECK(line == "r,R,rR,V");
  double lo = INFINITY, hi = -INFINITY;
  while (std::getline(is, line)) {
    std::stringstream ss(line);
    std::string r, scalar, rr;
    std::getline(ss, r, ',');
    std::getline(ss, scalar, ',');
    std::getline(ss, rr, ',');
    if (std::stod(r) >= 100.0) {
      lo = std::min(lo, std::stod(rr));
      hi = std::max(hi, std::stod(rr));
    }
  }
  // r R settles over the last decade.
  CHECK((hi - lo) / hi < 0.05);
}
