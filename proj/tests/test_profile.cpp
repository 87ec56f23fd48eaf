#include <chrono>
#include <cmath>

#include "doctest.h"
#include "soliton/curvature.hpp"
#include "soliton/error.hpp"
#include "soliton/profile.hpp"

using namespace soliton;

TEST_CASE("center series coefficients") {
  CHECK(center_series(3, -1.0 / 3.0, 0.0).w3 == doctest::Approx(-1.0 / 36.0).epsilon(1e-15));
  // Expanding cubic term is (a + 1/2) / (6(n - 1)).
  CHECK(center_series(4, -1.0, -0.5).w3 == doctest::Approx(-0.5 / 18.0).epsilon(1e-15));
  auto flat = series_seed(4, 0.0, 0.0, 1e-3);
  CHECK(flat.w == 1e-3);
  CHECK(flat.dw == 1.0);
  CHECK(flat.f == 0.0);
  CHECK(flat.df == 0.0);
  CHECK_THROWS_AS(series_seed(3, 0.1, 0.0, 1e-3), Error);
  CHECK_THROWS_AS(series_seed(3, -0.1, 0.3, 1e-3), Error);
  CHECK_THROWS_AS(series_seed(3, -0.1, 0.0, 0.1), Error);
}

TEST_CASE("radial jets satisfy the ODE and match the series") {
  // Round sphere of radius 1 is not a soliton, so check against the series instead.
  const int n = 4;
  const double a = -0.25;
  const double r = 1e-2;
  auto s = series_seed(n, a, 0.0, r);
  auto j = radial_jets(n, 0.0, s, 4);
  auto c = center_series(n, a, 0.0);
  CHECK(j.w[2] == doctest::Approx(6 * c.w3 * r + 20 * c.w5 * r * r * r).epsilon(1e-8));
  CHECK(j.w[3] == doctest::Approx(6 * c.w3 + 60 * c.w5 * r * r).epsilon(1e-6));
  CHECK(j.f[2] == doctest::Approx(a + 12 * c.f4 * r * r).epsilon(1e-8));
}

TEST_CASE("normalized Bryant profile") {
  auto t0 = std::chrono::steady_clock::now();
  auto p = integrate_profile(3, -1.0 / 3.0, 0.0, 100.0, 1e-10);
  MESSAGE("nodes " << p.nodes().size() << " in "
                   << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s");
  CHECK(p.scalar(2e-4) == doctest::Approx(1.0).epsilon(1e-6));
  for (const auto& node : p.nodes()) {
    CHECK(node.w > 0.0);
    CHECK(node.dw > 0.0);
    CHECK(node.dw <= 1.0);
  }
  auto seed = series_seed(3, -1.0 / 3.0, 0.0, 2e-4);
  auto st = p.state(2e-4);
  CHECK(std::fabs(st.w - seed.w) < 1e-8);
  CHECK(std::fabs(st.dw - seed.dw) < 1e-8);
}

TEST_CASE("flat profile") {
  auto p = integrate_profile(4, 0.0, 0.0, 50.0, 1e-10);
  for (double r : {0.5, 3.0, 40.0}) {
    auto s = p.state(r);
    CHECK(s.w == doctest::Approx(r).epsilon(1e-12));
    CHECK(std::fabs(s.f) < 1e-12);
    auto c = p.curvature(r);
    CHECK(std::fabs(c.scalar) < 1e-9);
  }
}

TEST_CASE("scaling family") {
  const double lambda = 2.0;
  auto p1 = integrate_profile(3, -0.4, 0.0, 60.0, 1e-12);
  auto p2 = integrate_profile(3, -0.4 / (lambda * lambda), 0.0, 60.0, 1e-12);
  for (double r : {1.0, 5.0, 20.0, 50.0})
    CHECK(std::fabs(p2.state(r).w - lambda * p1.state(r / lambda).w) < 1e-8);
}

TEST_CASE("generic engine agrees with the warped closed form") {
  auto profile = std::make_shared<SolitonProfile>(integrate_profile(4, -0.25, 0.0, 50.0, 1e-10));
  auto chart = profile_metric_chart(profile);
  for (double r : {0.5, 1.0, 5.0, 20.0}) {
    auto pack = curvature_pack(*chart, ChartPoint{{r, 1.0, 1.2, 0.3}}, Depth::riemann);
    auto c = profile->curvature(r);
    CHECK(pack.scalar == doctest::Approx(c.scalar).epsilon(1e-9));
    CHECK(pack.ricci(0, 0) == doctest::Approx(c.ric_rr).epsilon(1e-9));
    CHECK(pack.ricci(1, 1) == doctest::Approx(c.ric_sph).epsilon(1e-9));
  }
}

TEST_CASE("asymptotics of Bryant profiles") {
  for (int n : {3, 4}) {
    auto t0 = std::chrono::steady_clock::now();
    auto p = integrate_profile(n, -1.0 / n, 0.0, 1000.0, 1e-10);
    auto as = asymptotics(p);
    MESSAGE("n=" << n << " vol " << as.volume_exponent << " decay " << as.decay_const << " spread "
                 << as.decay_spread << " c1 " << as.potential.c1 << " c2 " << as.potential.c2 << " center "
                 << as.center_limit << " time "
                 << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    CHECK(std::fabs(as.volume_exponent - (n + 1) / 2.0) < 0.15);
    CHECK(as.decay_spread < 0.05);
    CHECK(as.potential.upper_ok);
    CHECK(as.potential.lower_ok);
    CHECK(std::fabs(as.center_limit - 1.0) < 1e-5);
  }
  CHECK_THROWS_AS(asymptotics(integrate_profile(3, -1.0 / 3, 0.0, 100.0, 1e-10)), Error);
}

TEST_CASE("steady potential bounds scale with C0") {
  // a = -1 in n = 3 gives C0 = 3, so |grad f| tends to sqrt(3).
  auto as = asymptotics(integrate_profile(3, -1.0, 0.0, 1000.0, 1e-10));
  CHECK(as.potential.upper_ok);
  CHECK(as.potential.lower_ok);
  CHECK(as.potential.c1 > 1.0);
  CHECK(as.potential.c1 <= std::sqrt(3.0));
}

TEST_CASE("expanding potential bounds") {
  auto positive = asymptotics(integrate_profile(4, -1.0, -0.5, 200.0, 1e-10));
  CHECK(positive.potential.scalar_floor == 0.0);
  CHECK(positive.potential.hess_floor == 0.5);
  CHECK(positive.potential.upper_ok);
  CHECK(positive.potential.lower_ok);

  // Ric(0) = -1/2 - a = -1/4: R(0) = -1 and Hess(-f) >= 1/4 at the center.
  auto negative = asymptotics(integrate_profile(4, -0.25, -0.5, 200.0, 1e-10));
  CHECK(negative.potential.scalar_floor == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(negative.potential.hess_floor == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(negative.potential.upper_ok);
  CHECK(negative.potential.lower_ok);
  CHECK(negative.potential.upper_margin >= 0.0);
}

TEST_CASE("Brendle tables on the normalized Bryant profile") {
  auto p = std::make_shared<SolitonProfile>(integrate_profile(3, -1.0 / 3.0, 0.0, 100.0, 1e-10));
  BrendleTables tables(p);
  const auto& d = tables.data();
  CHECK(d.monotone);
  for (double v : d.psi) CHECK(v > 0.0);
  for (double v : d.u) CHECK(std::isfinite(v));
  CHECK(d.x_residual < 1e-10);
  auto flux = flux_scan(tables, {10.0, 20.0, 40.0});
  for (double v : flux) CHECK(std::fabs(v) < 1e-10);
  BrendleTables perturbed(p, 1.01);
  auto pf = flux_scan(perturbed, {10.0, 20.0, 40.0});
  MESSAGE("perturbed flux " << pf[0] << " " << pf[1] << " " << pf[2]);
  CHECK(pf[0] == doctest::Approx(3.7491687550e-01).epsilon(1e-6));
  CHECK(pf[1] == doctest::Approx(9.7914564638e+02).epsilon(1e-6));
  CHECK_THROWS_AS(BrendleTables(std::make_shared<SolitonProfile>(integrate_profile(3, -1.0, -0.5, 20.0, 1e-10))),
                  Error);
}
