#include <cmath>

#include "doctest.h"
#include "soliton/error.hpp"
#include "soliton/identities.hpp"

using namespace soliton;

namespace {

// Point used by oracles/line_cigar.py.
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

}  // namespace

TEST_CASE("registry basics") {
  auto flat = model("flat", {.dim = 4});
  CHECK(flat.dim() == 4);
  for (const auto& p : flat.default_grid()) {
    CHECK(soliton_residual(flat, p) == 0.0);
    CHECK(max_abs(curvature_pack(flat.chart(), p, Depth::bach).riemann) == 0.0);
  }
  auto gauss = model("gaussian-expander", {.dim = 4});
  for (const auto& p : gauss.default_grid()) {
    auto f = gauss.potential_jet(p);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(f.hess(i, j) == (i == j ? -0.5 : 0.0));
    CHECK(soliton_residual(gauss, p) == 0.0);
  }
  auto cigar = model("cigar");
  auto pack = curvature_pack(cigar.chart(), ChartPoint{{0.0, 0.0}}, Depth::riemann);
  CHECK(pack.scalar == doctest::Approx(4.0).epsilon(1e-14));
  auto f0 = cigar.potential_jet(ChartPoint{{0.0, 0.0}});
  CHECK(f0.grad[0] == 0.0);
  CHECK(f0.grad[1] == 0.0);
  CHECK(cigar.c0() == 4.0);

  CHECK(code_of([] { model("torus"); }) == ErrorCode::unknown_model);
  CHECK(code_of([] { model("bryant", {.dim = 3, .a = 0.1}); }) == ErrorCode::invalid_params);
  CHECK(code_of([] { model("cigar", {.dim = 3}); }) == ErrorCode::invalid_params);
  CHECK(model_names().size() == 7);
}

TEST_CASE("default grids are deterministic and inside the box") {
  auto s = model("line-cigar");
  auto a = s.default_grid();
  auto b = s.default_grid();
  CHECK(a.size() == 16);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].coords == b[k].coords);
    for (int i = 0; i < 3; ++i) {
      CHECK(a[k].coords[i] >= s.box_lo()[i]);
      CHECK(a[k].coords[i] <= s.box_hi()[i]);
    }
  }
  CHECK(s.default_grid(7)[0].coords != a[0].coords);
}

TEST_CASE("closed-form models satisfy the soliton identities on their grids") {
  for (const char* name : {"flat", "gaussian-expander", "cigar", "line-cigar"}) {
    auto s = model(name);
    CAPTURE(name);
    for (const auto& p : s.default_grid()) {
      CHECK(soliton_residual(s, p) < 1e-10);
      auto h = hamilton_identities(s, p);
      CHECK(h.grad_scalar < 1e-9);
      CHECK(h.conservation < 1e-9);
    }
    if (s.steady()) CHECK(scalar_nonneg_scan(s, s.default_grid()) >= -1e-10);
  }
  auto cigar = model("cigar");
  CHECK(hamilton_identities(cigar, ChartPoint{{1.0, 0.0}}).conservation < 1e-9);

  auto tilted = model("line-cigar", {.linear = 0.5});
  CHECK(*tilted.c0() == 4.25);
  for (const auto& p : tilted.default_grid()) {
    CHECK(soliton_residual(tilted, p) < 1e-10);
    CHECK(hamilton_identities(tilted, p).conservation < 1e-9);
  }
}

TEST_CASE("cigar scalar scan") {
  auto s = model("cigar");
  auto grid = s.default_grid();
  double expected = INFINITY;
  for (const auto& p : grid) {
    const double r2 = p.coords[0] * p.coords[0] + p.coords[1] * p.coords[1];
    expected = std::fmin(expected, 4.0 / (1.0 + r2));
  }
  CHECK(scalar_nonneg_scan(s, grid) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected > 0.0);
}

TEST_CASE("profile models satisfy the soliton identities") {
  for (int n : {3, 4}) {
    for (const char* name : {"bryant", "expander"}) {
      auto s = model(name, {.dim = n});
      CAPTURE(name);
      CAPTURE(n);
      for (const auto& p : s.default_grid()) {
        CHECK(soliton_residual(s, p) < s.tolerance());
        auto h = hamilton_identities(s, p);
        CHECK(h.grad_scalar < 1e-6);
        CHECK(h.conservation < 1e-6);
      }
      if (s.steady()) CHECK(scalar_nonneg_scan(s, s.default_grid()) > 0.0);
    }
  }
}

TEST_CASE("shrinking fixture is accepted by the residual only") {
  auto s = model("sphere-factor", {.dim = 4});
  CHECK(s.rho() == 0.5);
  for (const auto& p : s.default_grid()) CHECK(soliton_residual(s, p) < 1e-12);
  CHECK(code_of([&] { hamilton_identities(s, s.default_grid()[0]); }) == ErrorCode::rho_unsupported);
  CHECK(weyl_divergence_check(s.chart(), s.default_grid()[0]) < 1e-10);
}

TEST_CASE("normalization") {
  auto cigar = model("cigar");
  auto unit = normalize_steady(cigar);
  CHECK(*unit.c0() == 1.0);
  const ChartPoint p{{0.4, -0.9}};
  CHECK(hamilton_identities(unit, p).conservation < 1e-12);
  CHECK(soliton_residual(unit, p) < 1e-12);
  auto pc = curvature_pack(cigar.chart(), p, Depth::riemann);
  auto pu = curvature_pack(unit.chart(), p, Depth::riemann);
  CHECK(pu.scalar == doctest::Approx(pc.scalar / 4.0).epsilon(1e-14));
  auto again = normalize_steady(unit);
  CHECK(again.chart_ptr() == unit.chart_ptr());

  auto bryant = model("bryant", {.dim = 3});
  CHECK(normalize_steady(bryant).chart_ptr() == bryant.chart_ptr());
  CHECK(code_of([] { normalize_steady(model("flat")); }) == ErrorCode::zero_c0);
}

TEST_CASE("D tensor symmetries and line-cigar oracle") {
  for (const char* name : {"line-cigar", "bryant", "expander", "gaussian-expander"}) {
    auto s = model(name, {.dim = name[0] == 'l' ? 0 : 4});
    for (const auto& p : s.default_grid()) {
      auto pack = curvature_pack(s.chart(), p, Depth::cotton);
      CHECK(d_symmetry_residual(d_tensor(s, p), pack.g_inv) < 1e-11);
    }
  }
  auto s = model("line-cigar");
  auto d = d_tensor(s, kLinePoint);
  auto pack = curvature_pack(s.chart(), kLinePoint, Depth::cotton);
  CHECK(pack.scalar == doctest::Approx(2.4242424242424242424).epsilon(1e-13));
  CHECK(d(0, 1, 0) == doctest::Approx(-0.51423324150596877870).epsilon(1e-11));
  CHECK(d(0, 2, 0) == doctest::Approx(0.29384756657483930211).epsilon(1e-11));
  CHECK(d(1, 2, 1) == doctest::Approx(-0.17808943428778139522).epsilon(1e-11));
  CHECK(d(1, 2, 2) == doctest::Approx(-0.31165651000361744163).epsilon(1e-11));
  CHECK(std::fabs(d(0, 1, 1)) < 1e-13);
  CHECK(max_abs(d) > 1e-2);
  CHECK(max_abs_difference(d, pack.cotton) < 1e-9);
  CHECK(norm_squared(d, pack.g_inv) == doctest::Approx(2.3151626457411581379).epsilon(1e-11));

  auto flat = model("flat");
  CHECK(max_abs(d_tensor(flat, flat.default_grid()[0])) == 0.0);
  CHECK(code_of([] { d_tensor(model("cigar"), ChartPoint{{0.1, 0.2}}); }) == ErrorCode::dimension_too_low);
}

TEST_CASE("Bach tensor of line-cigar matches the oracle") {
  auto s = model("line-cigar");
  auto b = bach_tensor(s.chart(), kLinePoint);
  CHECK(b(0, 0) == doctest::Approx(0.51423324150596877870).epsilon(1e-10));
  CHECK(b(1, 1) == doctest::Approx(-0.30275203828922837187).epsilon(1e-10));
  CHECK(b(1, 2) == doctest::Approx(0.24932520800289395331).epsilon(1e-10));
  CHECK(b(2, 1) == doctest::Approx(0.24932520800289395331).epsilon(1e-10));
  CHECK(b(2, 2) == doctest::Approx(-0.0089044717143890697610).epsilon(1e-9));
  CHECK(std::fabs(b(0, 1)) < 1e-12);
  auto flux = bach_flux_identity(s, kLinePoint);
  CHECK(flux.cotton_squared == doctest::Approx(2.3151626457411581379).epsilon(1e-11));
  CHECK(flux.div_bach_grad_f == doctest::Approx(-1.1575813228705790689).epsilon(1e-7));
  CHECK(flux.residual < 1e-7);
}

TEST_CASE("D = C + W(grad f) and the Bach-D relation") {
  auto lc = model("line-cigar");
  for (const auto& p : lc.default_grid()) {
    CHECK(check_DCW(lc, p) < 1e-9);
    auto bd = check_BD(lc, p);
    CHECK(bd.residual < 1e-7);
  }
  auto bd = check_BD(lc, kLinePoint);
  CHECK(max_abs(bd.bach_term) > 1e-4);
  CHECK(max_abs(bd.rest) > 1e-4);

  auto b5 = model("bryant", {.dim = 5});
  CHECK(check_DCW(b5, radial_point(5, 2.0)) < 1e-6);
  auto b4 = model("bryant", {.dim = 4});
  CHECK(check_BD(b4, radial_point(4, 1.0)).residual < 1e-6);
  CHECK(max_abs(d_tensor(b4, radial_point(4, 1.0))) < 1e-6);

  auto flat = model("flat", {.dim = 4});
  CHECK(check_DCW(flat, flat.default_grid()[3]) == 0.0);
  CHECK(check_BD(flat, flat.default_grid()[3]).residual == 0.0);
}
