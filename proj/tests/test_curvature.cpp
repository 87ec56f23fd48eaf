#include <chrono>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "soliton/curvature.hpp"
#include "soliton/error.hpp"

using namespace soliton;

namespace {

std::shared_ptr<FunctionChart> flat_chart(int n) {
  return std::make_shared<FunctionChart>("flat", n, [](std::span<const double>) { return true; },
                                         [n](std::span<const Taylor> x) {
                                           std::vector<Taylor> g(n * n, Taylor(x[0].basis(), x[0].order()));
                                           for (int i = 0; i < n; ++i) g[i * n + i] += 1.0;
                                           return g;
                                         });
}

WarpedChart round_sphere(int n) {
  return WarpedChart("sphere", n, [](double r, int order) {
    std::vector<double> d(order + 1);
    for (int k = 0; k <= order; ++k) d[k] = std::sin(r + k * std::numbers::pi / 2);
    return d;
  }, 0.0, std::numbers::pi);
}

ChartPoint sample(int n, double scale) {
  ChartPoint p;
  for (int i = 0; i < n; ++i) p.coords.push_back(scale * std::sin(1.3 * i + 0.4));
  return p;
}

}  // namespace

TEST_CASE("flat chart has vanishing curvature at every depth") {
  for (int n : {2, 3, 4}) {
    auto chart = flat_chart(n);
    auto pack = curvature_pack(*chart, sample(n, 0.5), Depth::bach);
    CHECK(max_abs(pack.riemann) == 0.0);
    CHECK(max_abs(pack.ricci) == 0.0);
    CHECK(pack.scalar == 0.0);
    CHECK(max_abs(pack.cotton) == 0.0);
    if (n >= 3) CHECK(max_abs(pack.bach) == 0.0);
  }
}

TEST_CASE("round sphere sign convention") {
  for (int n : {3, 4, 5}) {
    auto chart = round_sphere(n);
    ChartPoint p;
    p.coords.assign(n, 0.9);
    p.coords[0] = 1.1;
    auto pack = curvature_pack(chart, p, Depth::cotton);
    CHECK(pack.scalar == doctest::Approx(n * (n - 1.0)).epsilon(1e-12));
    CHECK(pack.riemann(0, 1, 0, 1) > 0.0);
    CHECK(pack.riemann(0, 1, 0, 1) == doctest::Approx(std::pow(std::sin(1.1), 2)).epsilon(1e-12));
    CHECK(max_abs(pack.weyl) < 1e-12);
    CHECK(max_abs(pack.cotton) < 1e-12);
  }
}

TEST_CASE("cigar scalar curvature") {
  FunctionChart cigar("cigar", 2, [](std::span<const double>) { return true; },
                      [](std::span<const Taylor> x) {
                        auto c = 1.0 / (1.0 + x[0] * x[0] + x[1] * x[1]);
                        std::vector<Taylor> g(4, Taylor(x[0].basis(), x[0].order()));
                        g[0] = c;
                        g[3] = c;
                        return g;
                      });
  CHECK(curvature_pack(cigar, ChartPoint{{0.0, 0.0}}, Depth::riemann).scalar ==
        doctest::Approx(4.0).epsilon(1e-14));
  for (double r : {0.5, 1.0, 3.0}) {
    auto pack = curvature_pack(cigar, ChartPoint{{r * 0.6, r * 0.8}}, Depth::riemann);
    CHECK(pack.scalar == doctest::Approx(4.0 / (1.0 + r * r)).epsilon(1e-12));
  }
}

TEST_CASE("algebraic identities on random polynomial metrics") {
  for (int n : {3, 4, 5}) {
    for (std::uint64_t seed : {1u, 2u}) {
      auto chart = random_polynomial_chart(n, seed);
      auto pack = curvature_pack(*chart, sample(n, 0.2), Depth::bach);
      auto res = algebraic_residuals(pack);
      CAPTURE(n);
      CHECK(res.max() < 1e-11);
      CHECK(max_abs(pack.cotton) > 1e-3);
      if (n == 3) CHECK(max_abs(pack.weyl) < 1e-12);
      if (n >= 4) {
        CHECK(max_abs(pack.weyl) > 1e-3);
        CHECK(weyl_divergence_check(*chart, sample(n, 0.2)) < 1e-10);
        const double scale = std::fmax(1.0, max_abs(pack.bach));
        CHECK(max_abs_difference(pack.bach, pack.bach_cotton_form) < 1e-9 * scale);
      }
      if (n == 4) {
        double asym = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) asym = std::fmax(asym, std::fabs(pack.bach(i, j) - pack.bach(j, i)));
        CHECK(asym < 1e-9);
        CHECK(std::fabs(trace(pack.bach, pack.g_inv, 0, 1)[0]) < 1e-9);
      }
    }
  }
}

TEST_CASE("non positive definite metric is rejected") {
  FunctionChart bad("bad", 2, [](std::span<const double>) { return true; },
                    [](std::span<const Taylor> x) {
                      std::vector<Taylor> g(4, Taylor(x[0].basis(), x[0].order()));
                      g[0] += 1.0;
                      g[3] += -1.0;
                      return g;
                    });
  try {
    curvature_pack(bad, ChartPoint{{0.0, 0.0}}, Depth::riemann);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_positive_definite);
  }
}

TEST_CASE("weyl divergence needs n >= 4") {
  auto chart = random_polynomial_chart(3, 1);
  CHECK_THROWS_AS(weyl_divergence_check(*chart, sample(3, 0.1)), Error);
}

TEST_CASE("Cotton tensor is conformally invariant in three dimensions") {
  auto base = random_polynomial_chart(3, 11);
  ConformalChart conf("conformal", base, [](std::span<const Taylor> x) {
    return 0.3 * x[0] * x[1] - 0.2 * x[2] * x[2] + 0.1 * x[0] * x[0] * x[2];
  });
  auto p = sample(3, 0.15);
  auto a = curvature_pack(*base, p, Depth::cotton);
  auto b = curvature_pack(conf, p, Depth::cotton);
  CHECK(max_abs(a.cotton) > 1e-3);
  CHECK(max_abs_difference(a.cotton, b.cotton) < 1e-8);
}

TEST_CASE("Bach divergence identities on seeded polynomial metrics") {
  auto t0 = std::chrono::steady_clock::now();
  for (int n : {3, 4, 5}) {
    auto chart = random_polynomial_chart(n, 3);
    auto bd = bach_divergence(*chart, sample(n, 0.1));
    CAPTURE(n);
    if (n != 4) CHECK(max_abs(bd.divergence) > 1e-4);
    CHECK(bd.residual < 1e-7);
  }
  auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  MESSAGE("bach divergence timing " << dt << " s");
}
