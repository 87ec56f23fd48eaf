#include "soliton/verify.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <optional>
#include <thread>

#include "soliton/error.hpp"
#include "soliton/level.hpp"

namespace soliton {

namespace {

constexpr double kClosedTol = 1e-8;
constexpr double kProfileTol = 1e-6;

struct NotApplicable {
  std::string why;
};

struct Context {
  const SolitonStructure& s;
  const VerifySpec& spec;
  std::string label;
  std::vector<ChartPoint> grid;

  bool profile() const { return s.profile() != nullptr; }
  double family_tol() const { return profile() ? kProfileTol : kClosedTol; }
};

double worst_of(const std::vector<double>& v) {
  double worst = 0.0;
  for (double x : v) {
    if (std::isnan(x)) return NAN;
    worst = std::max(worst, x);
  }
  return worst;
}

std::vector<std::vector<double>> coords_of(const std::vector<ChartPoint>& pts) {
  std::vector<std::vector<double>> out;
  for (const auto& p : pts) out.push_back(p.coords);
  return out;
}

IdentityReport make_report(const Context& c, const std::string& identity, std::vector<std::vector<double>> points,
                           double residual, double tol, bool expected_failure = false) {
  IdentityReport r;
  r.case_name = c.label;
  r.identity = identity;
  r.dim = c.s.dim();
  r.points = std::move(points);
  r.max_abs_residual = residual;
  auto it = c.spec.tolerances.find(identity);
  r.tolerance = it == c.spec.tolerances.end() ? tol : it->second;
  r.pass = residual <= r.tolerance;
  r.expected_failure = expected_failure;
  return r;
}

IdentityReport over_points(const Context& c, const std::string& identity, double tol,
                           const std::vector<ChartPoint>& pts, const std::function<double(const ChartPoint&)>& fn) {
  std::vector<double> values(pts.size());
  parallel_for(pts.size(), [&](std::size_t k) { values[k] = fn(pts[k]); });
  return make_report(c, identity, coords_of(pts), worst_of(values), tol);
}

IdentityReport over_grid(const Context& c, const std::string& identity, double tol,
                         const std::function<double(const ChartPoint&)>& fn) {
  return over_points(c, identity, tol, c.grid, fn);
}

double norm_of(const RealTensor& t, const RealTensor& g_inv) { return std::sqrt(norm_squared(t, g_inv)); }

// Models whose metric is locally conformally flat with D = 0.
bool conformally_flat(const SolitonStructure& s) {
  return s.profile() != nullptr || s.name().starts_with("flat") || s.name().starts_with("gaussian");
}

std::optional<double> level_value(const Context& c) {
  const auto& s = c.s;
  if (!s.steady() && !s.expanding()) return std::nullopt;
  if (auto p = s.profile()) return p->state(1.0).f;
  if (c.spec.model == "gaussian-expander") return -0.25;
  if (c.spec.model == "cigar" || c.spec.model == "line-cigar") return -std::log(2.0);
  return std::nullopt;
}

std::vector<IdentityReport> steady_identities(const Context& c) {
  const auto& s = c.s;
  const double tol = c.family_tol();
  std::vector<IdentityReport> out;
  out.push_back(over_grid(c, "soliton_equation", s.tolerance(), [&](const ChartPoint& p) {
    return soliton_residual(s, p);
  }));
  if (s.steady() || s.expanding()) {
    std::vector<HamiltonResiduals> h(c.grid.size());
    parallel_for(c.grid.size(), [&](std::size_t k) { h[k] = hamilton_identities(s, c.grid[k]); });
    std::vector<double> g, cons;
    for (const auto& x : h) {
      g.push_back(x.grad_scalar);
      cons.push_back(x.conservation);
    }
    out.push_back(make_report(c, "grad_scalar_identity", coords_of(c.grid), worst_of(g), tol));
    out.push_back(make_report(c, "conservation_law", coords_of(c.grid), worst_of(cons), tol));
  }
  if (s.steady()) {
    out.push_back(over_grid(c, "scalar_nonnegative", tol, [&](const ChartPoint& p) {
      return std::max(0.0, -curvature_pack(s.chart(), p, Depth::riemann).scalar);
    }));
    if (s.c0().value_or(0.0) > 0.0) {
      const auto unit = normalize_steady(s);
      out.push_back(over_grid(c, "normalized_conservation", tol, [&](const ChartPoint& p) {
        return hamilton_identities(unit, p).conservation;
      }));
    }
  }
  return out;
}

std::vector<IdentityReport> conformal_tensors(const Context& c) {
  const auto& s = c.s;
  const int n = s.dim();
  const double exact_tol = c.profile() ? 1e-8 : 1e-10;
  std::vector<AlgebraicResiduals> alg(c.grid.size());
  parallel_for(c.grid.size(), [&](std::size_t k) {
    alg[k] = algebraic_residuals(curvature_pack(s.chart(), c.grid[k], Depth::cotton));
  });
  auto collect = [&](auto&& pick) {
    std::vector<double> v;
    for (const auto& a : alg) v.push_back(pick(a));
    return worst_of(v);
  };
  std::vector<IdentityReport> out;
  const auto pts = coords_of(c.grid);
  out.push_back(make_report(c, "riemann_symmetries", pts, collect([](const AlgebraicResiduals& a) {
                              return std::max({a.riemann_antisymmetry, a.riemann_pair_exchange, a.riemann_bianchi,
                                               a.ricci_symmetry});
                            }),
                            exact_tol));
  if (n < 3) return out;
  out.push_back(make_report(c, "weyl_trace_free", pts, collect([](const AlgebraicResiduals& a) { return a.weyl_trace; }),
                            exact_tol));
  out.push_back(make_report(c, "weyl_schouten_decomposition", pts,
                            collect([](const AlgebraicResiduals& a) { return a.weyl_wra; }), exact_tol));
  out.push_back(make_report(c, "cotton_symmetries", pts, collect([](const AlgebraicResiduals& a) {
                              return std::max({a.cotton_skew, a.cotton_trace, a.cotton_routes});
                            }),
                            exact_tol));
  if (n >= 4)
    out.push_back(over_grid(c, "cotton_weyl_divergence", c.profile() ? kProfileTol : 1e-10,
                            [&](const ChartPoint& p) { return weyl_divergence_check(s.chart(), p); }));
  out.push_back(over_grid(c, "d_symmetries", exact_tol, [&](const ChartPoint& p) {
    const auto pack = curvature_pack(s.chart(), p, Depth::cotton);
    return d_symmetry_residual(d_tensor(pack, s.potential_jet(p, pack.christoffel)), pack.g_inv);
  }));
  out.push_back(over_grid(c, "d_cotton_weyl", kProfileTol, [&](const ChartPoint& p) { return check_DCW(s, p); }));
  out.push_back(over_grid(c, "bach_from_d", kProfileTol, [&](const ChartPoint& p) { return check_BD(s, p).residual; }));
  if (conformally_flat(s)) {
    std::vector<std::array<double, 4>> norms(c.grid.size());
    parallel_for(c.grid.size(), [&](std::size_t k) {
      const auto& p = c.grid[k];
      const auto pack = curvature_pack(s.chart(), p, Depth::bach);
      norms[k] = {n >= 4 ? norm_of(pack.weyl, pack.g_inv) : 0.0, norm_of(pack.cotton, pack.g_inv),
                  norm_of(pack.bach, pack.g_inv),
                  norm_of(d_tensor(pack, s.potential_jet(p, pack.christoffel)), pack.g_inv)};
    });
    const char* names[] = {"weyl_vanishes", "cotton_vanishes", "bach_vanishes", "d_vanishes"};
    for (int m = 0; m < 4; ++m) {
      if (m == 0 && n < 4) continue;
      std::vector<double> v;
      for (const auto& x : norms) v.push_back(x[m]);
      out.push_back(make_report(c, names[m], pts, worst_of(v), kProfileTol));
    }
  }
  return out;
}

std::vector<IdentityReport> bach_divergence_suite(const Context& c) {
  const auto& s = c.s;
  if (s.dim() < 3) throw NotApplicable{"the Bach tensor needs n >= 3"};
  std::vector<IdentityReport> out;
  out.push_back(over_grid(c, "bach_divergence", 1e-7,
                          [&](const ChartPoint& p) { return bach_divergence_check(s.chart(), p); }));
  if (s.dim() == 3 && (s.steady() || s.expanding()))
    out.push_back(over_grid(c, "bach_flux", 1e-7,
                            [&](const ChartPoint& p) { return bach_flux_identity(s, p).residual; }));
  return out;
}

std::vector<IdentityReport> level_geometry(const Context& c) {
  const auto& s = c.s;
  const int n = s.dim();
  std::vector<IdentityReport> out;
  if (n >= 3) {
    std::vector<ChartPoint> regular;
    for (const auto& p : c.grid) {
      const auto f = s.potential_jet(p);
      const auto g_inv = curvature_pack(s.chart(), p, Depth::riemann).g_inv;
      double sq = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sq += g_inv(i, j) * f.grad[i] * f.grad[j];
      if (sq > 1e-12) regular.push_back(p);
    }
    if (!regular.empty())
      out.push_back(over_points(c, "d2_norm_formula", kProfileTol, regular,
                                [&](const ChartPoint& p) { return check_D2(s, p).residual; }));
  }
  if (auto level = level_value(c)) {
    const int m = 8;
    const auto battery = prop32_battery(s, *level, m);
    out.push_back(make_report(c, "level_set_rigidity", coords_of(battery.points), battery.max_violation(),
                              kProfileTol, c.spec.model == "line-cigar"));
    if (n >= 4 && conformally_flat(s)) {
      const auto fibers = einstein_fiber_check(s, *level, m);
      out.push_back(make_report(c, "einstein_fibers", coords_of(fibers.points), fibers.max(), kProfileTol));
    }
  }
  if (out.empty()) throw NotApplicable{"no regular level sets to sample"};
  return out;
}

std::vector<double> log_radii(double lo, double hi, int count) {
  std::vector<double> r;
  for (int k = 0; k < count; ++k) r.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1)));
  return r;
}

std::vector<IdentityReport> asymptotics_suite(const Context& c) {
  const auto& s = c.s;
  auto prof = s.profile();
  if (!prof) throw NotApplicable{"asymptotics need a profile model"};
  const int n = s.dim();
  if (prof->steady() && prof->rmax() < 1000.0)
    prof = std::make_shared<SolitonProfile>(integrate_profile(n, prof->a(), 0.0, 1000.0, prof->tol()));
  const auto a = asymptotics(*prof);
  const std::vector<std::vector<double>> window{{a.window_lo, a.window_hi}};
  std::vector<IdentityReport> out;
  const double bound_tol = prof->steady() ? 10.0 * prof->tol() : 10.0 * prof->tol() * prof->rmax() * prof->rmax();
  out.push_back(make_report(c, "potential_upper_bound", window, std::max(0.0, -a.potential.upper_margin), bound_tol));
  out.push_back(make_report(c, "potential_lower_bound", window, a.potential.lower_ok ? 0.0 : 1.0, 0.0));
  out.push_back(make_report(c, "center_limit", {{prof->eps()}}, std::fabs(a.center_limit - 1.0), 1e-5));

  std::vector<std::vector<double>> node_r;
  double worst_curv = 0.0;
  for (const auto& node : prof->nodes()) {
    node_r.push_back({node.r});
    const auto w = warped_curvature(n, node.w, node.dw, node.d2w);
    if (prof->steady()) {
      // sectional curvatures: radial planes -w''/w, tangential planes (1 - w'^2)/w^2
      worst_curv = std::max({worst_curv, node.d2w / node.w, (node.dw * node.dw - 1.0) / (node.w * node.w)});
    } else {
      worst_curv = std::max({worst_curv, -w.ric_rr, -w.ric_tangent});
    }
  }
  if (prof->steady()) {
    out.push_back(make_report(c, "volume_growth_exponent", window,
                              std::fabs(a.volume_exponent - 0.5 * (n + 1)), 0.15));
    out.push_back(make_report(c, "linear_curvature_decay", window, a.decay_spread, 0.05));
    out.push_back(make_report(c, "sectional_positive", node_r, worst_curv, 0.0));
  } else if (prof->a() <= -0.5) {
    // Ric(0) = -1/2 - a; Ric >= 0 holds along the whole profile exactly in this range.
    out.push_back(make_report(c, "ricci_nonnegative", node_r, worst_curv, 1e-8));
  }

  const auto radii = log_radii(s.box_lo()[0], s.box_hi()[0], 16);
  std::vector<ChartPoint> pts;
  for (double r : radii) {
    ChartPoint p;
    p.coords.assign(n, 0.5 * std::numbers::pi);
    p.coords[0] = r;
    p.coords[n - 1] = 0.0;
    pts.push_back(p);
  }
  out.push_back(over_points(c, "engine_vs_warped", kProfileTol, pts, [&](const ChartPoint& p) {
    const auto pack = curvature_pack(s.chart(), p, Depth::riemann);
    const auto w = s.profile()->curvature(p.coords[0]);
    auto rel = [](double x, double y) { return std::fabs(x - y) / std::max(std::fabs(y), 1e-300); };
    return std::max({rel(pack.ricci(0, 0), w.ric_rr), rel(pack.ricci(1, 1) / pack.g(1, 1), w.ric_tangent),
                     rel(pack.scalar, w.scalar)});
  }));
  return out;
}

std::vector<IdentityReport> brendle_suite(const Context& c) {
  const auto& s = c.s;
  auto prof = s.profile();
  if (!prof || !prof->steady()) throw NotApplicable{"Brendle data need a steady profile model"};
  const int n = s.dim();
  if (std::fabs(-n * prof->a() - 1.0) > 1e-12)
    prof = std::make_shared<SolitonProfile>(
        integrate_profile(n, -1.0 / n, 0.0, std::max(prof->rmax(), 60.0), prof->tol()));
  const BrendleTables tables(prof);
  const auto& d = tables.data();
  std::vector<IdentityReport> out;
  const std::vector<std::vector<double>> range{{d.r.front(), d.r.back()}};
  out.push_back(make_report(c, "scalar_monotone", range, d.monotone ? 0.0 : 1.0, 0.0));
  const double min_psi = *std::min_element(d.psi.begin(), d.psi.end());
  out.push_back(make_report(c, "psi_positive", range, min_psi > 0.0 ? 0.0 : 1.0 - min_psi, 0.0));
  double bad_u = 0.0;
  for (double u : d.u)
    if (!std::isfinite(u)) bad_u += 1.0;
  out.push_back(make_report(c, "u_finite", range, bad_u, 0.0));
  out.push_back(make_report(c, "x_residual", range, d.x_residual, 1e-10));

  std::vector<double> radii;
  for (double r : {10.0, 20.0, 40.0})
    if (r < prof->rmax()) radii.push_back(r);
  std::vector<std::vector<double>> rpts;
  for (double r : radii) rpts.push_back({r});
  double worst_flux = 0.0;
  for (double v : flux_scan(tables, radii)) worst_flux = std::max(worst_flux, std::fabs(v));
  out.push_back(make_report(c, "asym_flux", rpts, worst_flux, 1e-10));

  const auto unit = profile_chart(prof);
  double worst_weighted = 0.0;
  for (double r : radii) worst_weighted = std::max(worst_weighted, std::fabs(weighted_flux(unit, r).flux));
  out.push_back(make_report(c, "weighted_flux", rpts, worst_weighted, 1e-10));

  std::vector<std::vector<double>> scan;
  double rise = 0.0, prev = INFINITY;
  for (double r = 10.0; r < prof->rmax() - 1.0; r += 1.0) {
    const double m = weighted_flux(unit, r).majorant;
    rise = std::max(rise, m - prev);
    prev = m;
    scan.push_back({r});
  }
  out.push_back(make_report(c, "flux_majorant_decreasing", scan, rise, 0.0));
  return out;
}

std::vector<IdentityReport> dispatch(const Context& c, std::string_view suite) {
  if (suite == "steady-identities") return steady_identities(c);
  if (suite == "conformal-tensors") return conformal_tensors(c);
  if (suite == "bach-divergence") return bach_divergence_suite(c);
  if (suite == "level-geometry") return level_geometry(c);
  if (suite == "asymptotics") return asymptotics_suite(c);
  if (suite == "brendle") return brendle_suite(c);
  throw Error(ErrorCode::invalid_params, "unknown suite " + std::string(suite));
}

}  // namespace

std::size_t worker_count() {
  if (const char* env = std::getenv("SOLITON_FORGE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < count; k = next++) {
          try {
            body(k);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      });
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<IdentityReport> run_suite(const SolitonStructure& s, const VerifySpec& spec, std::string_view suite,
                                      const std::string& label) {
  try {
    return dispatch(Context{s, spec, label, s.default_grid(spec.seed)}, suite);
  } catch (const NotApplicable& e) {
    throw Error(ErrorCode::invalid_params, std::string(suite) + " does not apply to " + label + ": " + e.why);
  }
}

RunReport run_verify(const VerifySpec& spec) {
  if (std::find(suite_names().begin(), suite_names().end(), spec.suite) == suite_names().end())
    throw Error(ErrorCode::invalid_params, "unknown suite " + spec.suite);
  for (const auto& [name, tol] : spec.tolerances)
    if (!(tol > 0.0)) throw Error(ErrorCode::invalid_params, "tolerance for " + name + " must be positive");
  const auto s = model(spec.model, spec.params);
  const std::string label = model_label(spec, s.dim());
  RunReport report;
  report.spec = spec;
  std::vector<std::string> suites;
  if (spec.suite == "all")
    suites.assign(suite_names().begin(), suite_names().end() - 1);
  else
    suites.push_back(spec.suite);
  for (const auto& suite : suites) {
    const auto t0 = std::chrono::steady_clock::now();
    if (spec.suite == "all") {
      try {
        auto part = dispatch(Context{s, spec, label, s.default_grid(spec.seed)}, suite);
        report.reports.insert(report.reports.end(), part.begin(), part.end());
      } catch (const NotApplicable&) {
        continue;
      }
    } else {
      auto part = run_suite(s, spec, suite, label);
      report.reports.insert(report.reports.end(), part.begin(), part.end());
    }
    if (spec.timings)
      report.timings[suite] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  report.overall_pass = overall_pass(report.reports);
  return report;
}

}  // namespace soliton
