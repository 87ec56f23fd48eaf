#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "soliton/error.hpp"
#include "soliton/level.hpp"
#include "soliton/verify.hpp"

using namespace soliton;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit_s;  // 0 means no runtime bound
  std::function<void(Outcome&)> run;
};

ChartPoint sample(int n, double scale, int k) {
  ChartPoint p;
  for (int i = 0; i < n; ++i) p.coords.push_back(scale * std::sin(1.3 * i + 0.4 + 0.9 * k));
  return p;
}

ChartPoint radial_point(int n, double r) {
  ChartPoint p;
  p.coords.assign(n, 1.1);
  p.coords[0] = r;
  p.coords[n - 1] = 0.4;
  return p;
}

double norm_of(const RealTensor& t, const RealTensor& g_inv) { return std::sqrt(norm_squared(t, g_inv)); }

double potential_at(const SolitonStructure& s, double r) { return s.profile()->state(r).f; }

void algebraic_suite(Outcome& o) {
  double worst = 0.0, min_cotton = INFINITY;
  int charts = 0;
  for (int n : {3, 4, 5})
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      auto chart = random_polynomial_chart(n, seed);
      ++charts;
      for (int k = 0; k < 4; ++k) {
        const auto pack = curvature_pack(*chart, sample(n, 0.2, k), Depth::cotton);
        worst = std::max(worst, algebraic_residuals(pack).max());
        min_cotton = std::min(min_cotton, max_abs(pack.cotton));
      }
    }
  o.detail << charts << " charts, max residual " << worst << ", min |C| " << min_cotton;
  o.require(worst < 1e-10, "residual < 1e-10");
  o.require(min_cotton > 1e-4, "nondegenerate Cotton");
}

void cotton_weyl(Outcome& o) {
  double worst = 0.0;
  for (int n : {4, 5})
    for (std::uint64_t seed : {1u, 2u, 3u})
      for (int k = 0; k < 4; ++k)
        worst = std::max(worst, weyl_divergence_check(*random_polynomial_chart(n, seed), sample(n, 0.2, k)));
  o.detail << "max |C + (n-2)/(n-3) div W| " << worst;
  o.require(worst < 1e-10, "residual < 1e-10");
}

void bach_divergences(Outcome& o) {
  const auto c3 = random_polynomial_chart(3, 3);
  const auto b3 = bach_divergence(*c3, sample(3, 0.1, 0));
  const auto c5 = random_polynomial_chart(5, 3);
  const auto b5 = bach_divergence(*c5, sample(5, 0.1, 0));
  const auto lc = model("line-cigar");
  double flux = 0.0, min_c2 = INFINITY;
  for (const auto& p : lc.default_grid()) {
    const auto bf = bach_flux_identity(lc, p);
    flux = std::max(flux, bf.residual);
    min_c2 = std::min(min_c2, bf.cotton_squared);
  }
  o.detail << "3-metric " << b3.residual << " (|div B| " << max_abs(b3.divergence) << "), 5-metric " << b5.residual
           << " (|div B| " << max_abs(b5.divergence) << "), line-cigar flux " << flux << " with min |C|^2 " << min_c2;
  o.require(b3.residual < 1e-7 && max_abs(b3.divergence) > 1e-4, "3-metric");
  o.require(b5.residual < 1e-7 && max_abs(b5.divergence) > 1e-4, "5-metric");
  o.require(flux < 1e-7 && min_c2 > 1e-4, "line-cigar flux");
}

void soliton_battery(Outcome& o) {
  struct Case {
    const char* name;
    int dim;
    double tol;
  };
  const Case cases[] = {{"cigar", 0, 1e-8},  {"line-cigar", 0, 1e-8}, {"gaussian-expander", 0, 1e-8},
                        {"bryant", 3, 1e-6}, {"bryant", 4, 1e-6},     {"bryant", 5, 1e-6},
                        {"bryant", 6, 1e-6}, {"expander", 3, 1e-6},   {"expander", 4, 1e-6}};
  double worst_ratio = 0.0;
  int points = 0;
  for (const auto& c : cases) {
    const auto s = model(c.name, ModelParams{.dim = c.dim});
    const auto grid = s.default_grid();
    std::vector<double> res(grid.size());
    parallel_for(grid.size(), [&](std::size_t k) {
      const auto h = hamilton_identities(s, grid[k]);
      const double scalar = curvature_pack(s.chart(), grid[k], Depth::riemann).scalar;
      res[k] = std::max({soliton_residual(s, grid[k]), h.grad_scalar, h.conservation, -scalar});
    });
    double worst = 0.0;
    for (double v : res) worst = std::max(worst, v);
    points += static_cast<int>(grid.size());
    worst_ratio = std::max(worst_ratio, worst / c.tol);
    o.require(worst < c.tol, std::string(c.name) + "(" + std::to_string(s.dim()) + ")");
  }
  o.detail << points << " points, worst residual / tolerance " << worst_ratio;
}

void d_relations(Outcome& o) {
  struct Case {
    const char* name;
    int dim;
  };
  const Case cases[] = {{"flat", 3},   {"gaussian-expander", 3}, {"line-cigar", 0},
                        {"bryant", 3}, {"bryant", 4},            {"bryant", 5},
                        {"expander", 3}, {"expander", 4},        {"sphere-factor", 4}};
  double worst = 0.0;
  for (const auto& c : cases) {
    const auto s = model(c.name, ModelParams{.dim = c.dim});
    const auto grid = s.default_grid();
    std::vector<double> res(grid.size());
    parallel_for(grid.size(), [&](std::size_t k) {
      res[k] = std::max(check_DCW(s, grid[k]), check_BD(s, grid[k]).residual);
    });
    for (double v : res) worst = std::max(worst, v);
  }
  const auto lc = model("line-cigar");
  const auto bd = check_BD(lc, ChartPoint{{0.3, 0.7, -0.4}});
  o.detail << "max DCW/BD residual " << worst << ", line-cigar |(n-2)B| " << max_abs(bd.bach_term) << " |rest| "
           << max_abs(bd.rest);
  o.require(worst < 1e-6, "residuals < 1e-6");
  o.require(max_abs(bd.bach_term) > 1e-4 && max_abs(bd.rest) > 1e-4, "nondegenerate line-cigar sides");
}

void bryant_bach_flat(Outcome& o) {
  double worst = 0.0;
  for (int n : {3, 4, 5}) {
    const auto s = model("bryant", ModelParams{.dim = n});
    for (double r : {0.5, 1.0, 5.0, 20.0}) {
      const auto p = radial_point(n, r);
      const auto pack = curvature_pack(s.chart(), p, Depth::bach);
      const double d = norm_of(d_tensor(pack, s.potential_jet(p, pack.christoffel)), pack.g_inv);
      worst = std::max({worst, d, norm_of(pack.cotton, pack.g_inv)});
      if (n >= 4) worst = std::max({worst, norm_of(pack.weyl, pack.g_inv), norm_of(pack.bach, pack.g_inv)});
    }
  }
  o.detail << "max |W|, |C|, |B|, |D| " << worst;
  o.require(worst < 1e-6, "all < 1e-6");
}

void asymptotics_check(Outcome& o) {
  for (int n : {3, 4}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto profile = integrate_profile(n, -1.0 / n, 0.0, 1000.0, 1e-10);
    const auto a = asymptotics(profile);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.detail << "n=" << n << ": exponent " << a.volume_exponent << ", rR spread " << a.decay_spread << ", c1 "
             << a.potential.c1 << ", w(eps)/eps " << a.center_limit << ", " << dt << " s; ";
    const std::string tag = "n=" + std::to_string(n);
    o.require(std::fabs(a.volume_exponent - 0.5 * (n + 1)) <= 0.15, tag + " volume exponent");
    o.require(a.decay_spread < 0.05, tag + " decay spread");
    o.require(a.potential.upper_ok && a.potential.lower_ok && a.potential.c1 > 0.0 && a.potential.c1 <= 1.0,
              tag + " potential bounds");
    o.require(std::fabs(a.center_limit - 1.0) < 1e-5, tag + " center limit");
    o.require(dt < 120.0, tag + " runtime");
  }
}

void expanding_profiles(Outcome& o) {
  double worst_sol = 0.0, worst_db = 0.0, min_ric = INFINITY;
  for (int n : {3, 4}) {
    const auto s = model("expander", ModelParams{.dim = n});
    const auto grid = s.default_grid();
    std::vector<std::array<double, 2>> res(grid.size());
    parallel_for(grid.size(), [&](std::size_t k) {
      const auto& p = grid[k];
      const auto pack = curvature_pack(s.chart(), p, Depth::bach);
      const double d = norm_of(d_tensor(pack, s.potential_jet(p, pack.christoffel)), pack.g_inv);
      res[k] = {soliton_residual(s, p), std::max(d, norm_of(pack.bach, pack.g_inv))};
    });
    for (const auto& v : res) {
      worst_sol = std::max(worst_sol, v[0]);
      worst_db = std::max(worst_db, v[1]);
    }
    const auto a = asymptotics(*s.profile());
    o.require(a.potential.upper_ok && a.potential.lower_ok, "potential bounds n=" + std::to_string(n));
    for (const auto& node : s.profile()->nodes()) {
      const auto c = warped_curvature(n, node.w, node.dw, node.d2w);
      min_ric = std::min({min_ric, c.ric_rr, c.ric_tangent});
    }
  }
  o.detail << "soliton residual " << worst_sol << ", max |D|, |B| " << worst_db << ", min Ric " << min_ric;
  o.require(worst_sol < 1e-6, "soliton residual");
  o.require(worst_db < 1e-6, "D and Bach vanish");
  o.require(min_ric >= -1e-8, "Ric >= 0");
}

void level_geometry_check(Outcome& o) {
  const auto lc = model("line-cigar");
  double d2 = 0.0, min_side = INFINITY;
  for (const auto& p : lc.default_grid()) {
    const auto c = check_D2(lc, p);
    d2 = std::max(d2, c.residual);
    min_side = std::min({min_side, c.lhs, c.rhs});
  }
  const auto b3 = model("bryant", ModelParams{.dim = 3});
  const auto e4 = model("expander", ModelParams{.dim = 4});
  const double spread_b3 = prop32_battery(b3, potential_at(b3, 1.0), 8).max_violation();
  const double spread_e4 = prop32_battery(e4, potential_at(e4, 1.0), 8).max_violation();
  double fibers = 0.0;
  for (int n : {4, 5}) {
    const auto b = model("bryant", ModelParams{.dim = n});
    fibers = std::max(fibers, einstein_fiber_check(b, potential_at(b, 1.0), 8).max());
  }
  const double control = prop32_battery(lc, -std::log(2.0), 8).max_violation();
  o.detail << "norm formula " << d2 << " (min side " << min_side << "), level battery bryant(3) " << spread_b3 << " expander(4) "
           << spread_e4 << ", fibers " << fibers << ", line-cigar control " << control;
  o.require(d2 < 1e-6 && min_side > 1e-4, "norm formula on line-cigar");
  o.require(spread_b3 < 1e-6 && spread_e4 < 1e-6, "level battery spreads");
  o.require(fibers < 1e-6, "fiber checks");
  o.require(control >= 1e-6, "negative control fails");
}

void brendle_check(Outcome& o) {
  const auto s = normalize_steady(model("bryant", ModelParams{.dim = 3}));
  const auto profile = s.profile();
  const BrendleTables tables(profile);
  const auto& d = tables.data();
  bool finite = true, strictly = true;
  for (double u : d.u) finite = finite && std::isfinite(u);
  for (std::size_t k = 1; k < d.r.size(); ++k)
    strictly = strictly && (d.s[k] - d.s[k - 1]) * (d.r[k] - d.r[k - 1]) < 0.0;
  const auto& nodes = profile->nodes();
  double prev_r = 0.0, prev_s = INFINITY;
  for (const auto& node : nodes) {
    if (node.r < d.r.back()) continue;
    const double scalar = warped_curvature(3, node.w, node.dw, node.d2w).scalar;
    strictly = strictly && scalar < prev_s && node.r > prev_r;
    prev_r = node.r;
    prev_s = scalar;
  }
  const double min_psi = *std::min_element(d.psi.begin(), d.psi.end());
  double flux = 0.0;
  for (double v : flux_scan(tables, {10.0, 20.0, 40.0})) flux = std::max(flux, std::fabs(v));
  bool decreasing = true;
  double prev = INFINITY;
  for (double r = 10.0; r < profile->rmax() - 1.0; r += 1.0) {
    const double m = weighted_flux(s, r).majorant;
    decreasing = decreasing && m < prev;
    prev = m;
  }
  o.detail << "min psi " << min_psi << ", X residual " << d.x_residual << ", max flux " << flux;
  o.require(d.monotone && strictly, "R strictly decreasing");
  o.require(min_psi > 0.0, "psi > 0");
  o.require(finite, "u finite");
  o.require(d.x_residual < 1e-10, "X residual");
  o.require(flux < 1e-10, "flux");
  o.require(decreasing, "majorant decreasing");
}

std::shared_ptr<WarpedChart> analytic_warped(int n, int kind) {
  RadialJet jet;
  double lo = 0.0, hi = 3.0;
  switch (kind) {
    case 0:  // round sphere
      jet = [](double r, int order) {
        std::vector<double> d(order + 1);
        for (int k = 0; k <= order; ++k) d[k] = std::sin(r + k * std::numbers::pi / 2);
        return d;
      };
      break;
    case 1:  // hyperbolic space
      jet = [](double r, int order) {
        std::vector<double> d(order + 1);
        for (int k = 0; k <= order; ++k) d[k] = k % 2 == 0 ? std::sinh(r) : std::cosh(r);
        return d;
      };
      break;
    default:  // polynomial warp r + r^3 / 10
      jet = [](double r, int order) {
        std::vector<double> d(order + 1, 0.0);
        const double c[] = {r + 0.1 * r * r * r, 1.0 + 0.3 * r * r, 0.6 * r, 0.6};
        for (int k = 0; k <= order && k < 4; ++k) d[k] = c[k];
        return d;
      };
      break;
  }
  return std::make_shared<WarpedChart>("warp", n, jet, lo, hi, ChartKind::closed_form);
}

void engine_cross_validation(Outcome& o) {
  auto rel = [](double x, double y) { return std::fabs(x - y) / std::max(std::fabs(y), 1e-300); };
  double analytic = 0.0;
  for (int n : {3, 4, 5})
    for (int kind : {0, 1, 2}) {
      const auto chart = analytic_warped(n, kind);
      for (double r : {0.3, 0.9, 1.7, 2.5}) {
        const auto pack = curvature_pack(*chart, radial_point(n, r), Depth::riemann);
        const auto& basis = MonomialBasis::get(1, 2);
        const auto t = chart->warp(Taylor::variable(basis, 2, 0, r));
        const double wd[] = {t.coeff(0), t.coeff(1), 2.0 * t.coeff(2)};
        const auto c = warped_curvature(n, wd[0], wd[1], wd[2]);
        analytic = std::max({analytic, rel(pack.ricci(0, 0), c.ric_rr), rel(pack.ricci(1, 1), c.ric_sph),
                             rel(pack.scalar, c.scalar)});
      }
    }
  double interpolated = 0.0;
  for (const char* name : {"bryant", "expander"})
    for (int n : {3, 4}) {
      const auto s = model(name, {.dim = n});
      for (double r : {0.5, 1.0, 5.0, 20.0}) {
        const auto pack = curvature_pack(s.chart(), radial_point(n, r), Depth::riemann);
        const auto c = s.profile()->curvature(r);
        interpolated = std::max({interpolated, rel(pack.ricci(0, 0), c.ric_rr), rel(pack.ricci(1, 1), c.ric_sph),
                                 rel(pack.scalar, c.scalar)});
      }
    }
  o.detail << "analytic " << analytic << ", profile " << interpolated;
  o.require(analytic < 1e-9, "analytic warped charts");
  o.require(interpolated < 1e-6, "profile charts");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void determinism(Outcome& o) {
  const auto dir = std::filesystem::temp_directory_path() / ("soliton_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const char* specs[] = {"--model cigar", "--model line-cigar", "--model bryant --dim 3", "--model expander --dim 4"};
  int compared = 0;
  for (const char* spec : specs) {
    std::string outputs[2];
    for (int k = 0; k < 2; ++k) {
      const auto path = dir / ("run" + std::to_string(k) + ".json");
      const std::string cmd = std::string(SOLITON_FORGE_PATH) + " verify " + spec + " --suite all --out " +
                              path.string() + " >/dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      o.require(WIFEXITED(status) && WEXITSTATUS(status) == 0, std::string("exit status of ") + spec);
      outputs[k] = slurp(path);
    }
    o.require(!outputs[0].empty() && outputs[0] == outputs[1], std::string("identical output for ") + spec);
    ++compared;
  }
  std::filesystem::remove_all(dir);
  o.detail << compared << " specs, repeated runs byte-identical";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "algebraic tensor suite", 10.0, algebraic_suite},
      {2, "Cotton as Weyl divergence", 10.0, cotton_weyl},
      {3, "Bach divergence identities", 60.0, bach_divergences},
      {4, "soliton identity battery", 60.0, soliton_battery},
      {5, "D-tensor relations", 30.0, d_relations},
      {6, "Bryant Bach-flatness", 60.0, bryant_bach_flat},
      {7, "asymptotics", 240.0, asymptotics_check},
      {8, "expanding profiles", 120.0, expanding_profiles},
      {9, "level geometry", 60.0, level_geometry_check},
      {10, "Brendle data", 60.0, brendle_check},
      {11, "engine cross-validation", 30.0, engine_cross_validation},
      {12, "determinism", 0.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0.0) o.require(dt < c.limit_s, "runtime");
    if (!o.pass) ++failures;
    std::printf("%s criterion %2d %-28s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), dt,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
