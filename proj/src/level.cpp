#include "soliton/level.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <boost/random/sobol.hpp>
#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "soliton/error.hpp"

namespace soliton {

namespace {

constexpr double kCriticalThreshold = 1e-8;

Eigen::MatrixXd to_matrix(const RealTensor& t) {
  const int n = t.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = t(i, j);
  return m;
}

double bilinear(const Eigen::MatrixXd& m, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return u.dot(m * v);
}

double four_form(const RealTensor& t, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                 const Eigen::VectorXd& c, const Eigen::VectorXd& d) {
  const int n = t.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += t(i, j, k, l) * a[i] * b[j] * c[k] * d[l];
  return s;
}

AdaptedFrame frame_from(const Eigen::MatrixXd& g, const Eigen::VectorXd& grad_up, double grad_norm) {
  const int n = static_cast<int>(g.rows());
  AdaptedFrame frame;
  frame.e.push_back(grad_up / grad_norm);
  for (int k = 0; k < n && static_cast<int>(frame.e.size()) < n; ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, k);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : frame.e) v -= bilinear(g, e, v) * e;
    const double len = std::sqrt(bilinear(g, v, v));
    if (len > 1e-6) frame.e.push_back(v / len);
  }
  return frame;
}

struct PointGeometry {
  CurvaturePack pack;
  PotentialJet f;
  Eigen::MatrixXd g;
  Eigen::VectorXd grad_up;
  double grad_norm = 0.0;
};

PointGeometry geometry(const SolitonStructure& s, const ChartPoint& p, Depth depth) {
  PointGeometry out;
  out.pack = curvature_pack(s.chart(), p, depth);
  out.f = s.potential_jet(p, out.pack.christoffel);
  out.g = to_matrix(out.pack.g);
  const Eigen::Map<const Eigen::VectorXd> grad(out.f.grad.data(), s.dim());
  out.grad_up = to_matrix(out.pack.g_inv) * grad;
  out.grad_norm = std::sqrt(std::max(0.0, grad.dot(out.grad_up)));
  if (out.grad_norm < kCriticalThreshold)
    throw Error(ErrorCode::critical_point, "|grad f| vanishes at the sample point");
  return out;
}

LevelSurfaceData level_from(const SolitonStructure& s, const PointGeometry& pg) {
  const int n = s.dim();
  LevelSurfaceData out;
  out.frame = frame_from(pg.g, pg.grad_up, pg.grad_norm);
  out.grad_norm = pg.grad_norm;
  const Eigen::MatrixXd hess = to_matrix(pg.f.hess);
  const Eigen::MatrixXd ric = to_matrix(pg.pack.ricci);
  out.h.resize(n - 1, n - 1);
  out.h_ricci.resize(n - 1, n - 1);
  out.ricci_frame.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.ricci_frame(i, j) = bilinear(ric, out.frame.e[i], out.frame.e[j]);
  for (int a = 0; a < n - 1; ++a)
    for (int b = 0; b < n - 1; ++b) {
      out.h(a, b) = bilinear(hess, out.frame.e[a + 1], out.frame.e[b + 1]) / pg.grad_norm;
      out.h_ricci(a, b) = -out.ricci_frame(a + 1, b + 1) / pg.grad_norm;
    }
  out.mean_curvature = out.h.trace();
  out.tangential_grad_scalar.resize(n - 1);
  if (pg.pack.has(Depth::cotton)) {
    const Eigen::Map<const Eigen::VectorXd> dr(pg.pack.grad_scalar.data().data(), n);
    for (int a = 0; a < n - 1; ++a) out.tangential_grad_scalar[a] = dr.dot(out.frame.e[a + 1]);
  } else {
    out.tangential_grad_scalar.setZero();
  }
  const Eigen::MatrixXd tl =
      out.h - out.mean_curvature / (n - 1) * Eigen::MatrixXd::Identity(n - 1, n - 1);
  out.traceless_norm = tl.norm();
  return out;
}

std::vector<std::vector<double>> sobol_units(int dims, int count) {
  std::mt19937_64 rng(kDefaultSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(dims);
  for (double& v : shift) v = unit(rng);
  boost::random::sobol qrng(static_cast<std::size_t>(dims));
  const double span = static_cast<double>(qrng.max()) - static_cast<double>(qrng.min()) + 1.0;
  std::vector<std::vector<double>> out(count, std::vector<double>(dims));
  for (auto& pt : out)
    for (int i = 0; i < dims; ++i) {
      double u = (static_cast<double>(qrng()) - static_cast<double>(qrng.min())) / span + shift[i];
      pt[i] = u - std::floor(u);
    }
  return out;
}

template <class F>
std::optional<double> bracket_root(F&& fn, double lo, double hi, int steps) {
  double a = lo, fa = fn(a);
  for (int k = 1; k <= steps; ++k) {
    const double b = lo + (hi - lo) * k / steps;
    const double fb = fn(b);
    if (fa == 0.0) return a;
    if ((fa < 0.0) != (fb < 0.0)) {
      boost::uintmax_t iters = 200;
      auto root = boost::math::tools::toms748_solve(fn, a, b, fa, fb,
                                                    boost::math::tools::eps_tolerance<double>(50), iters);
      return 0.5 * (root.first + root.second);
    }
    a = b;
    fa = fb;
  }
  return std::nullopt;
}

double spread(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

}  // namespace

AdaptedFrame adapted_frame(const SolitonStructure& s, const ChartPoint& p) {
  const auto pg = geometry(s, p, Depth::riemann);
  return frame_from(pg.g, pg.grad_up, pg.grad_norm);
}

LevelSurfaceData level_data(const SolitonStructure& s, const ChartPoint& p) {
  return level_from(s, geometry(s, p, Depth::cotton));
}

D2Check check_D2(const SolitonStructure& s, const ChartPoint& p) {
  const int n = s.dim();
  if (n < 3) throw Error(ErrorCode::dimension_too_low, "D tensor needs n >= 3");
  const auto pg = geometry(s, p, Depth::cotton);
  const auto level = level_from(s, pg);
  D2Check out;
  out.lhs = norm_squared(d_tensor(pg.pack, pg.f), pg.pack.g_inv);
  const double g4 = std::pow(pg.grad_norm, 4);
  out.rhs = 2.0 * g4 / ((n - 2.0) * (n - 2.0)) * level.traceless_norm * level.traceless_norm +
            level.tangential_grad_scalar.squaredNorm() / (2.0 * (n - 1.0) * (n - 2.0));
  out.residual = std::fabs(out.lhs - out.rhs) / std::max(out.lhs, 1e-14);
  return out;
}

std::vector<ChartPoint> level_points(const SolitonStructure& s, double c, int m) {
  if (m < 1) throw Error(ErrorCode::invalid_params, "need at least one level point");
  const int n = s.dim();
  std::vector<ChartPoint> out;
  if (auto profile = s.profile()) {
    const auto& nodes = profile->nodes();
    auto fr = [&](double r) { return profile->state(r).f - c; };
    const double lo = nodes.front().r, hi = nodes.back().r;
    if ((fr(lo) < 0.0) == (fr(hi) < 0.0)) throw Error(ErrorCode::level_not_found, "level outside the profile");
    boost::uintmax_t iters = 200;
    auto root = boost::math::tools::toms748_solve(fr, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    const double r = 0.5 * (root.first + root.second);
    const auto angles = sobol_units(n - 1, m);
    for (const auto& u : angles) {
      ChartPoint p;
      p.coords.push_back(r);
      for (int i = 1; i < n; ++i) p.coords.push_back(s.box_lo()[i] + (s.box_hi()[i] - s.box_lo()[i]) * u[i - 1]);
      out.push_back(std::move(p));
    }
    return out;
  }
  Eigen::VectorXd origin(n), half(n);
  for (int i = 0; i < n; ++i) {
    origin[i] = 0.5 * (s.box_lo()[i] + s.box_hi()[i]);
    half[i] = 0.5 * (s.box_hi()[i] - s.box_lo()[i]);
  }
  const auto dirs = sobol_units(n, 8 * m);
  for (const auto& u : dirs) {
    if (static_cast<int>(out.size()) == m) break;
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d[i] = 2.0 * u[i] - 1.0;
    if (d.norm() < 1e-3) continue;
    d.normalize();
    double tmax = INFINITY;
    for (int i = 0; i < n; ++i)
      if (std::fabs(d[i]) > 1e-12) tmax = std::min(tmax, half[i] / std::fabs(d[i]));
    auto point = [&](double t) {
      ChartPoint p;
      for (int i = 0; i < n; ++i) p.coords.push_back(origin[i] + t * d[i]);
      return p;
    };
    auto fn = [&](double t) { return s.potential_taylor(point(t), 0).constant() - c; };
    if (auto t = bracket_root(fn, 0.0, 0.999 * tmax, 256)) out.push_back(point(*t));
  }
  if (out.empty()) throw Error(ErrorCode::level_not_found, "no ray meets the level set");
  return out;
}

double LevelBattery::max_violation() const {
  return std::max({grad_sq_spread, scalar_spread, mixed_ricci, umbilic_defect, mean_curvature_spread,
                   lambda_spread, mu_spread, multiplicity_defect});
}

LevelBattery prop32_battery(const SolitonStructure& s, double c, int m) {
  const int n = s.dim();
  LevelBattery out;
  out.points = level_points(s, c, m);
  std::vector<double> grad_sq, scal, mean_curv, lambdas, mus;
  for (const auto& p : out.points) {
    const auto pg = geometry(s, p, Depth::riemann);
    const auto level = level_from(s, pg);
    grad_sq.push_back(pg.grad_norm * pg.grad_norm);
    scal.push_back(pg.pack.scalar);
    mean_curv.push_back(level.mean_curvature);
    const auto& ric = level.ricci_frame;
    for (int a = 1; a < n; ++a) out.mixed_ricci = std::max(out.mixed_ricci, std::fabs(ric(0, a)));
    out.umbilic_defect = std::max(out.umbilic_defect, level.traceless_norm);
    const Eigen::MatrixXd tangential = ric.bottomRightCorner(n - 1, n - 1);
    const double mu = tangential.trace() / (n - 1);
    out.multiplicity_defect = std::max(
        out.multiplicity_defect, (tangential - mu * Eigen::MatrixXd::Identity(n - 1, n - 1)).cwiseAbs().maxCoeff());
    lambdas.push_back(ric(0, 0));
    mus.push_back(mu);
  }
  out.grad_sq_spread = spread(grad_sq);
  out.scalar_spread = spread(scal);
  out.mean_curvature_spread = spread(mean_curv);
  out.lambda_spread = spread(lambdas);
  out.mu_spread = spread(mus);
  out.lambda = mean(lambdas);
  out.mu = mean(mus);
  return out;
}

double FiberCheck::max() const { return std::max({gauss_vs_formula, weyl_1a1a, round_defect}); }

FiberCheck einstein_fiber_check(const SolitonStructure& s, double c, int m) {
  const int n = s.dim();
  if (n < 4) throw Error(ErrorCode::dimension_too_low, "fiber check needs n >= 4");
  FiberCheck out;
  out.points = level_points(s, c, m);
  std::vector<double> fiber;
  for (const auto& p : out.points) {
    const auto pg = geometry(s, p, Depth::riemann);
    const auto level = level_from(s, pg);
    const auto& e = level.frame.e;
    const double H = level.mean_curvature;
    for (int a = 1; a < n; ++a) {
      out.weyl_1a1a = std::max(out.weyl_1a1a, std::fabs(four_form(pg.pack.weyl, e[0], e[a], e[0], e[a])));
      double gauss = 0.0;
      for (int b = 1; b < n; ++b) {
        if (b == a) continue;
        const double k = four_form(pg.pack.riemann, e[a], e[b], e[a], e[b]);
        const double ha = level.h(a - 1, a - 1), hb = level.h(b - 1, b - 1), hab = level.h(a - 1, b - 1);
        gauss += k + ha * hb - hab * hab;
      }
      const double formula = 2.0 * level.ricci_frame(a, a) - pg.pack.scalar / (n - 1.0) +
                             (n - 2.0) * H * H / ((n - 1.0) * (n - 1.0));
      out.gauss_vs_formula = std::max(out.gauss_vs_formula, std::fabs(gauss - formula));
      fiber.push_back(gauss);
      if (auto profile = s.profile()) {
        const double w = profile->state(p.coords[0]).w;
        out.round_defect = std::max(out.round_defect, std::fabs(gauss - (n - 2.0) / (w * w)));
      }
    }
  }
  out.fiber_ricci = mean(fiber);
  return out;
}

WeightedFlux weighted_flux(const SolitonStructure& s, double r) {
  const auto profile = s.profile();
  if (!profile) throw Error(ErrorCode::invalid_params, "weighted flux needs a profile-backed structure");
  if (!(r > profile->eps() && r < profile->rmax()))
    throw Error(ErrorCode::radius_outside_profile, "radius outside the profile");
  const int n = s.dim();
  ChartPoint p;
  p.coords.push_back(r);
  for (int i = 1; i < n; ++i) p.coords.push_back(0.5 * (s.box_lo()[i] + s.box_hi()[i]));
  const auto pack = curvature_pack(s.chart(), p, Depth::cotton);
  const auto f = s.potential_jet(p, pack.christoffel);
  const auto d = d_tensor(pack, f);
  const Eigen::Map<const Eigen::VectorXd> grad(f.grad.data(), n);
  const Eigen::VectorXd up = to_matrix(pack.g_inv) * grad;
  double integrand = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) integrand += d(i, 0, j) * up[i] * up[j];  // nu = d/dr
  const double area = sphere_area(n) * std::pow(profile->state(r).w, n - 1);
  const double weight = area * std::exp(f.f);
  const double grad_norm = std::sqrt(grad.dot(up));
  WeightedFlux out;
  out.flux = weight * integrand;
  out.bound = weight * (std::sqrt(norm_squared(pack.ricci, pack.g_inv)) + std::fabs(pack.scalar)) *
              std::pow(grad_norm, 3);
  out.majorant = 2.0 * weight;
  return out;
}

}  // namespace soliton
