#include <cmath>

#include "doctest.h"
#include "soliton/error.hpp"
#include "soliton/level.hpp"

using namespace soliton;

namespace {

const ChartPoint kLinePoint{{0.3, 0.7, -0.4}};

ChartPoint radial_point(int n, double r) {
  ChartPoint p;
  p.coords.assign(n, 1.1);
  p.coords[0] = r;
  p.coords[n - 1] = 0.4;
  return p;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_params;
}

double potential_at(const SolitonStructure& s, double r) { return s.profile()->state(r).f; }

}  // namespace

TEST_CASE("adapted frames") {
  for (const char* name : {"line-cigar", "bryant", "expander"}) {
    auto s = model(name, {.dim = name[0] == 'l' ? 0 : 4});
    for (const auto& p : s.default_grid()) {
      auto frame = adapted_frame(s, p);
      auto g = curvature_pack(s.chart(), p, Depth::riemann).g;
      const int n = s.dim();
      REQUIRE(static_cast<int>(frame.e.size()) == n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double ip = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ip += g(i, j) * frame.e[a][i] * frame.e[b][j];
          CHECK(std::fabs(ip - (a == b ? 1.0 : 0.0)) < 1e-11);
        }
    }
  }
  auto bryant = model("bryant", {.dim = 3});
  auto e = adapted_frame(bryant, radial_point(3, 1.0)).e;
  CHECK(e[0][0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::fabs(e[0][1]) < 1e-12);
  CHECK(std::fabs(e[1][0]) < 1e-12);
  CHECK(std::fabs(e[2][0]) < 1e-12);

  auto gauss = model("gaussian-expander");
  auto eg = adapted_frame(gauss, ChartPoint{{1.0, 0.0, 0.0}}).e;
  CHECK(eg[0][0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(code_of([&] { adapted_frame(gauss, ChartPoint{{0.0, 0.0, 0.0}}); }) == ErrorCode::critical_point);
  CHECK(code_of([] { level_data(model("flat"), ChartPoint{{0.1, 0.2, 0.3}}); }) == ErrorCode::critical_point);
}

TEST_CASE("second fundamental form of round spheres") {
  for (int n : {3, 4}) {
    auto s = model("bryant", {.dim = n});
    for (double r : {0.5, 1.0, 5.0}) {
      auto level = level_data(s, radial_point(n, r));
      auto st = s.profile()->state(r);
      const double k = -st.dw / st.w;  // nu = grad f / |grad f| points inward
      for (int a = 0; a < n - 1; ++a)
        for (int b = 0; b < n - 1; ++b) CHECK(std::fabs(level.h(a, b) - (a == b ? k : 0.0)) < 1e-9);
      CHECK(level.mean_curvature == doctest::Approx((n - 1) * k).epsilon(1e-9));
      CHECK((level.h - level.h_ricci).cwiseAbs().maxCoeff() < 1e-9);
      CHECK(level.traceless_norm < 1e-9);
    }
  }
  // Euclidean spheres with an outward radial potential.
  auto flat = model("flat", {.dim = 3});
  SolitonStructure radial("radial", flat.chart_ptr(),
                          [](std::span<const Taylor> x) { return 0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); },
                          0.0, 0.0, flat.box_lo(), flat.box_hi());
  const double r = std::sqrt(0.3 * 0.3 + 0.4 * 0.4 + 0.5 * 0.5);
  CHECK(level_data(radial, ChartPoint{{0.3, 0.4, 0.5}}).mean_curvature == doctest::Approx(2.0 / r).epsilon(1e-12));
}

TEST_CASE("line-cigar level geometry matches the oracle") {
  auto s = model("line-cigar");
  auto level = level_data(s, kLinePoint);
  CHECK(level.mean_curvature == doctest::Approx(-0.96560909917053515768).epsilon(1e-11));
  CHECK(level.traceless_norm * level.traceless_norm == doctest::Approx(0.46620046620046620047).epsilon(1e-11));
  CHECK(level.traceless_norm > 1e-3);
  auto d2 = check_D2(s, kLinePoint);
  CHECK(d2.lhs == doctest::Approx(2.3151626457411581379).epsilon(1e-11));
  CHECK(d2.rhs == doctest::Approx(2.3151626457411581379).epsilon(1e-11));
  for (const auto& p : s.default_grid()) {
    auto c = check_D2(s, p);
    CHECK(c.residual < 1e-6);
    CHECK(c.lhs > 1e-4);
  }
  auto b4 = model("bryant", {.dim = 4});
  auto z = check_D2(b4, radial_point(4, 1.0));
  CHECK(z.lhs < 1e-12);
  CHECK(z.rhs < 1e-12);
}

TEST_CASE("level-set battery") {
  auto b3 = model("bryant", {.dim = 3});
  auto battery = prop32_battery(b3, potential_at(b3, 1.0), 8);
  CHECK(battery.points.size() == 8);
  MESSAGE("bryant(3) battery max violation " << battery.max_violation());
  CHECK(battery.pass(1e-7));
  CHECK(battery.lambda > 0.0);
  CHECK(battery.mu > 0.0);
  for (const auto& p : battery.points)
    CHECK(std::fabs(b3.potential_taylor(p, 0).constant() - potential_at(b3, 1.0)) < 1e-12);

  auto e4 = model("expander", {.dim = 4});
  CHECK(prop32_battery(e4, potential_at(e4, 2.0), 8).pass(1e-7));

  auto lc = model("line-cigar");
  auto neg = prop32_battery(lc, -std::log(2.0), 8);
  CHECK(neg.points.size() == 8);
  for (const auto& p : neg.points) CHECK(std::fabs(lc.potential_taylor(p, 0).constant() + std::log(2.0)) < 1e-12);
  MESSAGE("line-cigar battery max violation " << neg.max_violation());
  CHECK_FALSE(neg.pass(1e-6));
  CHECK(code_of([&] { prop32_battery(lc, 5.0, 4); }) == ErrorCode::level_not_found);
}

TEST_CASE("Einstein fibers") {
  auto b4 = model("bryant", {.dim = 4});
  auto fc = einstein_fiber_check(b4, potential_at(b4, 1.0), 6);
  const double w = b4.profile()->state(1.0).w;
  CHECK(fc.fiber_ricci == doctest::Approx(2.0 / (w * w)).epsilon(1e-8));
  CHECK(fc.gauss_vs_formula < 1e-6);
  CHECK(fc.weyl_1a1a < 1e-6);
  CHECK(fc.round_defect < 1e-6);
  auto b5 = model("bryant", {.dim = 5});
  CHECK(einstein_fiber_check(b5, potential_at(b5, 1.0), 6).max() < 1e-6);
  auto e4 = model("expander", {.dim = 4});
  CHECK(einstein_fiber_check(e4, potential_at(e4, 1.0), 6).max() < 1e-6);
  auto b3 = model("bryant", {.dim = 3});
  CHECK(code_of([&] { einstein_fiber_check(b3, potential_at(b3, 1.0), 4); }) == ErrorCode::dimension_too_low);
}

TEST_CASE("weighted boundary flux") {
  auto b4 = model("bryant", {.dim = 4});
  CHECK(std::fabs(weighted_flux(b4, 10.0).flux) < 1e-10);
  auto b3 = model("bryant", {.dim = 3});
  double prev = INFINITY;
  for (double r = 10.0; r <= 55.0; r += 5.0) {
    auto wf = weighted_flux(b3, r);
    CHECK(wf.majorant < prev);
    CHECK(wf.bound <= wf.majorant);
    prev = wf.majorant;
  }
  auto flat = profile_chart(std::make_shared<SolitonProfile>(integrate_profile(4, 0.0, 0.0, 30.0, 1e-10)));
  CHECK(weighted_flux(flat, 5.0).flux == 0.0);
  CHECK(code_of([&] { weighted_flux(b3, 100.0); }) == ErrorCode::radius_outside_profile);
  CHECK(code_of([] { weighted_flux(model("cigar"), 1.0); }) == ErrorCode::invalid_params);
}
