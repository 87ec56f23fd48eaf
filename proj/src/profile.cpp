#include "soliton/profile.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "soliton/error.hpp"
#include "soliton/taylor.hpp"

namespace soliton {

namespace {

constexpr int kMaxJetOrder = 6;
constexpr double kTableStart = 0.1;

void validate(int n, double a, double rho) {
  if (n < 3) throw Error(ErrorCode::invalid_params, "profile dimension must be at least 3");
  if (!(a <= 0.0) || !std::isfinite(a)) throw Error(ErrorCode::invalid_params, "center data a must be <= 0");
  if (rho != 0.0 && rho != -0.5)
    throw Error(ErrorCode::invalid_params, "rho must be 0 (steady) or -1/2 (expanding)");
}

Taylor integrate(const Taylor& t) {
  Taylor out(t.basis(), t.order());
  for (int k = t.order() - 1; k >= 0; --k) out.coeff(k + 1) = t.coeff(k) / (k + 1);
  return out;
}

// Quintic in t in [0, 1] through (y, h y', h^2 y'') at both ends.
struct Quintic {
  double c[6];

  Quintic(double h, double y0, double d0, double s0, double y1, double d1, double s1) {
    const double dy = y1 - y0;
    const double hd0 = h * d0, hd1 = h * d1;
    const double hs0 = h * h * s0, hs1 = h * h * s1;
    c[0] = y0;
    c[1] = hd0;
    c[2] = 0.5 * hs0;
    c[3] = 10 * dy - 6 * hd0 - 4 * hd1 - 1.5 * hs0 + 0.5 * hs1;
    c[4] = -15 * dy + 8 * hd0 + 7 * hd1 + 1.5 * hs0 - hs1;
    c[5] = 6 * dy - 3 * hd0 - 3 * hd1 - 0.5 * hs0 + 0.5 * hs1;
  }
  double value(double t) const {
    return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
  }
  double slope(double t) const {
    return c[1] + t * (2 * c[2] + t * (3 * c[3] + t * (4 * c[4] + t * 5 * c[5])));
  }
};

// w, p = w' - 1, f, f', volume. Carrying w' - 1 keeps 1 - w'^2 = -p(2 + p)
// free of cancellation near the center.
using State = std::array<double, 5>;

struct SolitonOde {
  int n;
  double rho;
  double omega;

  double d2w(double w, double p, double phi) const {
    return (-(n - 2) * p * (2.0 + p) + w * (1.0 + p) * phi - rho * w * w) / w;
  }
  void operator()(const State& y, State& dy, double) const {
    const double wpp = d2w(y[0], y[1], y[3]);
    dy[0] = 1.0 + y[1];
    dy[1] = wpp;
    dy[2] = y[3];
    dy[3] = rho + (n - 1) * wpp / y[0];
    dy[4] = omega * std::pow(y[0], n - 1);
  }
};

// R and R' along a profile from w derivatives up to order 3.
std::pair<double, double> scalar_and_slope(int n, const std::vector<double>& wd) {
  const auto& basis = MonomialBasis::get(1, 1);
  Taylor w(basis, 1, wd[0]), dw(basis, 1, wd[1]), d2w(basis, 1, wd[2]);
  w.coeff(1) = wd[1];
  dw.coeff(1) = wd[2];
  d2w.coeff(1) = wd[3];
  const Taylor inv = reciprocal(w);
  Taylor r = -2.0 * (n - 1) * d2w * inv + (n - 1.0) * (n - 2.0) * (1.0 - dw * dw) * inv * inv;
  return {r.coeff(0), r.coeff(1)};
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

double sphere_area(int n) { return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n); }

CenterSeries center_series(int n, double a, double rho) {
  validate(n, a, rho);
  CenterSeries s;
  const double A = (a - rho) / (6.0 * (n - 1));
  s.w3 = A;
  s.w5 = ((39.0 * n - 30.0) * A * A + 6.0 * rho * A) / (10.0 * (n + 2));
  s.f4 = a * (a - rho) / (6.0 * (n + 2));
  s.f0 = rho == 0.0 ? 0.0 : -n * (rho - a);
  return s;
}

RadialState series_seed(int n, double a, double rho, double eps) {
  if (!(eps > 0.0 && eps <= 1e-2)) throw Error(ErrorCode::invalid_params, "eps must lie in (0, 1e-2]");
  const CenterSeries c = center_series(n, a, rho);
  const double r = eps, r2 = eps * eps;
  RadialState s;
  s.w = r * (1.0 + r2 * (c.w3 + r2 * c.w5));
  s.dw = 1.0 + r2 * (3.0 * c.w3 + 5.0 * r2 * c.w5);
  s.f = c.f0 + r2 * (0.5 * a + r2 * c.f4);
  s.df = r * (a + 4.0 * r2 * c.f4);
  return s;
}

RadialJets radial_jets(int n, double rho, const RadialState& s, int order) {
  if (order < 0 || order > kMaxJetOrder)
    throw Error(ErrorCode::order_unsupported, "radial jets up to order 6");
  const int k = std::max(order, 2);
  const auto& basis = MonomialBasis::get(1, k);
  auto variable = [&](double c0, double c1) {
    Taylor t(basis, k, c0);
    t.coeff(1) = c1;
    return t;
  };
  Taylor w = variable(s.w, s.dw), v(basis, k, s.dw), phi(basis, k, s.df), f = variable(s.f, s.df);
  for (int it = 0; it <= k; ++it) {
    const Taylor inv = reciprocal(w);
    Taylor num = (n - 2.0) * (1.0 - v * v) + w * v * phi - rho * w * w;
    Taylor wpp = num * inv;
    Taylor fpp = rho + (n - 1.0) * wpp * inv;
    v = s.dw + integrate(wpp);
    phi = s.df + integrate(fpp);
    w = s.w + integrate(v);
    f = s.f + integrate(phi);
  }
  RadialJets out;
  out.w.resize(order + 1);
  out.f.resize(order + 1);
  double fact = 1.0;
  for (int j = 0; j <= order; ++j) {
    if (j > 0) fact *= j;
    out.w[j] = w.coeff(j) * fact;
    out.f[j] = f.coeff(j) * fact;
  }
  return out;
}

WarpedCurvature warped_curvature(int n, double w, double dw, double d2w) {
  WarpedCurvature c;
  c.ric_rr = -(n - 1) * d2w / w;
  c.ric_sph = (n - 2) * (1.0 - dw * dw) - w * d2w;
  c.ric_tangent = c.ric_sph / (w * w);
  c.scalar = -2.0 * (n - 1) * d2w / w + (n - 1.0) * (n - 2.0) * (1.0 - dw * dw) / (w * w);
  return c;
}

SolitonProfile::SolitonProfile(int dim, double a, double rho, double tol, double eps,
                               std::vector<Node> nodes)
    : dim_(dim), a_(a), rho_(rho), tol_(tol), eps_(eps), nodes_(std::move(nodes)) {}

std::size_t SolitonProfile::segment(double r) const {
  if (!(r >= nodes_.front().r && r <= nodes_.back().r)) {
    std::ostringstream msg;
    msg << "r = " << r << " outside [" << nodes_.front().r << ", " << nodes_.back().r << "]";
    throw Error(ErrorCode::radius_outside_profile, msg.str());
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r,
                             [](double x, const Node& node) { return x < node.r; });
  std::size_t k = static_cast<std::size_t>(it - nodes_.begin());
  if (k == 0) k = 1;
  if (k >= nodes_.size()) k = nodes_.size() - 1;
  return k - 1;
}

RadialState SolitonProfile::state(double r) const {
  const std::size_t k = segment(r);
  const Node& a = nodes_[k];
  const Node& b = nodes_[k + 1];
  if (r == a.r) return {a.w, a.dw, a.f, a.df};
  if (r == b.r) return {b.w, b.dw, b.f, b.df};
  const double h = b.r - a.r;
  const double t = (r - a.r) / h;
  const Quintic qw(h, a.w, a.dw, a.d2w, b.w, b.dw, b.d2w);
  const Quintic qf(h, a.f, a.df, a.d2f, b.f, b.df, b.d2f);
  return {qw.value(t), qw.slope(t) / h, qf.value(t), qf.slope(t) / h};
}

RadialJets SolitonProfile::jets(double r, int order) const {
  return radial_jets(dim_, rho_, state(r), order);
}

double SolitonProfile::volume(double r) const {
  const std::size_t k = segment(r);
  const Node& a = nodes_[k];
  const Node& b = nodes_[k + 1];
  const double omega = sphere_area(dim_);
  const double h = b.r - a.r;
  const double t = (r - a.r) / h;
  const double da = omega * std::pow(a.w, dim_ - 1);
  const double db = omega * std::pow(b.w, dim_ - 1);
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  return h00 * a.volume + h10 * h * da + h01 * b.volume + h11 * h * db;
}

WarpedCurvature SolitonProfile::curvature(double r) const {
  const auto j = jets(r, 2);
  return warped_curvature(dim_, j.w[0], j.w[1], j.w[2]);
}

SolitonProfile integrate_profile(int n, double a, double rho, double rmax, double tol,
                                 const ProfileOptions& options) {
  validate(n, a, rho);
  if (!(rmax > 1.0)) throw Error(ErrorCode::invalid_params, "rmax must exceed 1");
  if (!(tol >= 1e-12 && tol <= 1e-6)) throw Error(ErrorCode::invalid_params, "tol must lie in [1e-12, 1e-6]");
  const double eps = options.eps;
  const RadialState seed = series_seed(n, a, rho, eps);
  const SolitonOde ode{n, rho, sphere_area(n)};
  const double max_step = options.max_step > 0.0 ? options.max_step : rmax / 200.0;

  std::vector<SolitonProfile::Node> nodes;
  auto record = [&](double r, const State& y) {
    const double wpp = ode.d2w(y[0], y[1], y[3]);
    nodes.push_back({r, y[0], 1.0 + y[1], wpp, y[2], y[3], rho + (n - 1) * wpp / y[0], y[4]});
  };
  const CenterSeries c = center_series(n, a, rho);
  const double p0 = eps * eps * (3.0 * c.w3 + 5.0 * eps * eps * c.w5);
  State y{seed.w, p0, seed.f, seed.df, ode.omega * std::pow(eps, n) / n};
  double r = eps;
  record(r, y);

  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(tol * eps, tol, odeint::runge_kutta_dopri5<State>());
  double dt = eps;
  auto failure = [&](const std::string& why) {
    std::ostringstream msg;
    msg.precision(17);
    msg << why << "; last good r = " << r;
    return Error(ErrorCode::step_failure, msg.str());
  };
  std::size_t steps = 0;
  while (r < rmax) {
    if (++steps > options.max_steps) throw failure("step budget exhausted");
    dt = std::min({dt, max_step, rmax - r});
    State trial = y;
    double rt = r;
    if (stepper.try_step(ode, trial, rt, dt) == odeint::fail) {
      if (dt < 1e-14 * std::max(1.0, r)) throw failure("step size underflow");
      continue;
    }
    for (double v : trial)
      if (!std::isfinite(v)) throw failure("non-finite state");
    if (!(trial[0] > 0.0)) throw failure("warping function reached zero");
    if (rmax - rt < 1e-12 * rmax) rt = rmax;
    y = trial;
    r = rt;
    record(r, y);
  }
  return SolitonProfile(n, a, rho, tol, eps, std::move(nodes));
}

std::shared_ptr<WarpedChart> profile_metric_chart(std::shared_ptr<const SolitonProfile> profile) {
  const int n = profile->dim();
  std::ostringstream name;
  name << (profile->steady() ? "bryant(" : "expander(") << n << ",a=" << profile->a() << ")";
  const double lo = profile->eps(), hi = profile->rmax();
  return std::make_shared<WarpedChart>(
      name.str(), n, [profile](double r, int order) { return profile->jets(r, order).w; }, lo, hi);
}

Asymptotics asymptotics(const SolitonProfile& profile) {
  const double rmax = profile.rmax();
  if (profile.steady() && rmax < 500.0)
    throw Error(ErrorCode::rmax_too_small, "steady asymptotics need rmax >= 500");
  Asymptotics out;
  out.window_lo = rmax / 10.0;
  out.window_hi = rmax;
  out.center_limit = profile.nodes().front().w / profile.eps();

  constexpr int kSamples = 201;
  std::vector<double> logr, logv, rr;
  for (int i = 0; i < kSamples; ++i) {
    const double r = out.window_lo * std::pow(10.0, static_cast<double>(i) / (kSamples - 1));
    const double rc = std::min(r, rmax);
    logr.push_back(std::log(rc));
    logv.push_back(std::log(profile.volume(rc)));
    rr.push_back(rc * profile.scalar(rc));
  }
  out.volume_exponent = least_squares_slope(logr, logv);

  double lo = rr[0], hi = rr[0], sum = 0.0, max_abs_scalar = 0.0;
  for (double v : rr) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
    max_abs_scalar = std::max(max_abs_scalar, std::fabs(v));
  }
  out.decay_const = sum / kSamples;
  if (max_abs_scalar < 1e-12) {
    out.degenerate = true;
    out.decay_spread = 0.0;
  } else {
    out.decay_spread = (hi - lo) / std::fabs(out.decay_const);
  }

  const auto& nodes = profile.nodes();
  const double f0 = nodes.front().f;
  PotentialFit& fit = out.potential;
  fit.upper_margin = INFINITY;
  if (profile.steady()) {
    // R + |grad f|^2 = C0 = -n a gives |grad f| <= sqrt(C0); C0 = 1 is the normalized case.
    const double slope_cap = std::sqrt(-profile.dim() * profile.a());
    std::vector<double> x, y;
    for (const auto& node : nodes)
      if (node.r >= out.window_lo) {
        x.push_back(node.r);
        y.push_back(-node.f);
      }
    fit.c1 = least_squares_slope(x, y);
    fit.c2 = -INFINITY;
    for (const auto& node : nodes) {
      fit.c2 = std::max(fit.c2, fit.c1 * node.r + node.f);
      fit.upper_margin = std::min(fit.upper_margin, slope_cap * node.r + std::fabs(f0) + node.f);
    }
    fit.c2 = std::max(fit.c2, 0.0);
    fit.upper_ok = fit.upper_margin >= -10.0 * profile.tol();
    fit.lower_ok = fit.c1 > 0.0 && fit.c1 <= slope_cap * (1.0 + 10.0 * profile.tol());
  } else {
    // With R >= -K and Hess(-f) >= delta g the bounds read
    // delta (r - c1)^2 <= -f and -f <= (r + 2 sqrt(K - f0))^2 / 4 - K; K = 0, delta = 1/2 when Ric >= 0.
    double min_scalar = INFINITY, min_ric_rr = INFINITY;
    for (const auto& node : nodes) {
      const auto c = warped_curvature(profile.dim(), node.w, node.dw, node.d2w);
      min_scalar = std::min(min_scalar, c.scalar);
      min_ric_rr = std::min(min_ric_rr, c.ric_rr);
    }
    fit.scalar_floor = std::max(0.0, -min_scalar);
    fit.hess_floor = 0.5 + std::min(0.0, min_ric_rr);
    const double k = fit.scalar_floor, delta = fit.hess_floor;
    const double base = k - f0;
    fit.c1 = -INFINITY;
    fit.c2 = 0.0;
    bool slope_ok = delta > 0.0;
    for (const auto& node : nodes) {
      const double bound = 0.25 * std::pow(node.r + 2.0 * std::sqrt(std::max(base, 0.0)), 2) - k;
      fit.upper_margin = std::min(fit.upper_margin, bound + node.f);
      if (delta > 0.0) fit.c1 = std::max(fit.c1, node.r - std::sqrt(std::max(-node.f, 0.0) / delta));
      if (-node.df < delta * node.r - 10.0 * profile.tol() * std::max(1.0, node.r)) slope_ok = false;
    }
    fit.upper_ok = base >= 0.0 && fit.upper_margin >= -10.0 * profile.tol() * rmax * rmax;
    fit.lower_ok = slope_ok;
  }
  return out;
}

BrendleTables::BrendleTables(std::shared_ptr<const SolitonProfile> profile, double psi_scale)
    : profile_(std::move(profile)), psi_scale_(psi_scale) {
  const SolitonProfile& p = *profile_;
  const int n = p.dim();
  if (!p.steady()) throw Error(ErrorCode::psi_undefined, "psi is defined for steady profiles only");
  const auto& nodes = p.nodes();

  // Table radii: nodes in [kTableStart, rmax). Closer to the center 1 - R is
  // of order r^2 and is lost to cancellation in the curvature formula.
  std::vector<double> radii, scal, slope, dfs;
  for (std::size_t k = 1; k + 1 < nodes.size(); ++k) {
    if (nodes[k].r < kTableStart) continue;
    const auto j = p.jets(nodes[k].r, 3);
    const auto [s, ds] = scalar_and_slope(n, j.w);
    radii.push_back(nodes[k].r);
    scal.push_back(s);
    slope.push_back(ds);
    dfs.push_back(j.f[1]);
  }
  if (radii.size() < 2) throw Error(ErrorCode::invalid_params, "profile too short for Brendle tables");
  bool monotone = true;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(slope[k] < 0.0)) monotone = false;
    if (k > 0 && !(scal[k] < scal[k - 1])) monotone = false;
  }
  if (!monotone) throw Error(ErrorCode::non_monotone_r, "scalar curvature is not strictly decreasing");
  if (!(scal.front() < 1.0 && scal.back() > 0.0 && scal.front() > 0.5 && scal.back() < 0.5))
    throw Error(ErrorCode::invalid_params, "profile must be normalized so that R spans 1/2 inside (0, 1)");

  // Radius where R = 1/2.
  {
    auto above = std::find_if(scal.begin(), scal.end(), [](double s) { return s < 0.5; });
    const std::size_t k = static_cast<std::size_t>(above - scal.begin());
    boost::uintmax_t iters = 200;
    auto g = [&](double r) { return p.scalar(r) - 0.5; };
    auto root = boost::math::tools::toms748_solve(g, radii[k - 1], radii[k],
                                                  boost::math::tools::eps_tolerance<double>(52), iters);
    r_half_ = 0.5 * (root.first + root.second);
  }

  // Cumulative I2 along the radii, measured from r_half.
  auto integrand = [&](double r) {
    const auto j = p.jets(r, 2);
    const double s = warped_curvature(n, j.w[0], j.w[1], j.w[2]).scalar;
    return (n - 1.0 - (n - 3.0) * s) / (1.0 - s) * j.f[1] / psi_scale_;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  i2_.assign(radii.size(), 0.0);
  for (std::size_t k = 1; k < radii.size(); ++k)
    i2_[k] = i2_[k - 1] + GK::integrate(integrand, radii[k - 1], radii[k], 8, 1e-10);
  {
    auto it = std::upper_bound(radii.begin(), radii.end(), r_half_);
    const std::size_t k = static_cast<std::size_t>(it - radii.begin()) - 1;
    const double at_half = i2_[k] + GK::integrate(integrand, radii[k], r_half_, 8, 1e-10);
    for (double& v : i2_) v -= at_half;
  }

  data_.monotone = monotone;
  const std::size_t m = radii.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t k = m - 1 - i;  // increasing s
    const double psi = slope[k] / dfs[k] * psi_scale_;
    const double s = scal[k];
    const double i1 = -n * std::log(2.0 * (1.0 - s));
    data_.r.push_back(radii[k]);
    data_.s.push_back(s);
    data_.psi.push_back(psi);
    data_.u.push_back(std::log(psi) + (i1 - i2_[k]) / (n - 1));
  }

  double xres = 0.0;
  for (std::size_t k = 0; k + 1 < radii.size(); k += std::max<std::size_t>(1, radii.size() / 400)) {
    const double rm = 0.5 * (radii[k] + radii[k + 1]);
    const auto j = p.jets(rm, 3);
    const auto [s, ds] = scalar_and_slope(n, j.w);
    const double x = ds - psi(s) / psi_scale_ * j.f[1];
    xres = std::max(xres, std::fabs(x));
  }
  data_.x_residual = xres;
}

double BrendleTables::psi_at_radius(double r) const {
  const auto j = profile_->jets(r, 3);
  const auto [s, ds] = scalar_and_slope(profile_->dim(), j.w);
  return ds / j.f[1] * psi_scale_;
}

double BrendleTables::radius_of(double s) const {
  const auto& sv = data_.s;
  if (!(s >= sv.front() && s <= sv.back()))
    throw Error(ErrorCode::radius_outside_profile, "s outside the realized curvature range");
  auto it = std::lower_bound(sv.begin(), sv.end(), s);
  std::size_t k = static_cast<std::size_t>(it - sv.begin());
  if (sv[k] == s) return data_.r[k];
  // data_.r decreases as s increases.
  const double lo = data_.r[k], hi = data_.r[k - 1];
  auto g = [&](double r) { return profile_->scalar(r) - s; };
  boost::uintmax_t iters = 200;
  auto root = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (root.first + root.second);
}

double BrendleTables::psi(double s) const { return psi_at_radius(radius_of(s)); }

double BrendleTables::u_at_radius(double r) const {
  const SolitonProfile& p = *profile_;
  const int n = p.dim();
  // data_.r is decreasing; find the table radius just below r.
  const auto& rs = data_.r;
  if (!(r >= rs.back() && r <= rs.front()))
    throw Error(ErrorCode::radius_outside_profile, "radius outside the Brendle table");
  const std::size_t m = rs.size();
  std::size_t lo = 0;
  {
    // radii in increasing order are rs[m-1-k]
    std::size_t a = 0, b = m - 1;
    while (b - a > 1) {
      const std::size_t c = (a + b) / 2;
      if (rs[m - 1 - c] <= r) a = c; else b = c;
    }
    lo = a;
  }
  const double r0 = rs[m - 1 - lo];
  auto integrand = [&](double x) {
    const auto j = p.jets(x, 2);
    const double s = warped_curvature(n, j.w[0], j.w[1], j.w[2]).scalar;
    return (n - 1.0 - (n - 3.0) * s) / (1.0 - s) * j.f[1] / psi_scale_;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  const double i2 = i2_[lo] + (r > r0 ? GK::integrate(integrand, r0, r, 8, 1e-10) : 0.0);
  const auto j = p.jets(r, 2);
  const double s = warped_curvature(n, j.w[0], j.w[1], j.w[2]).scalar;
  const double i1 = -n * std::log(2.0 * (1.0 - s));
  return std::log(psi_at_radius(r)) + (i1 - i2) / (n - 1);
}

BrendleData brendle_tables(std::shared_ptr<const SolitonProfile> profile) {
  return BrendleTables(std::move(profile)).data();
}

std::vector<double> flux_scan(const BrendleTables& tables, const std::vector<double>& radii) {
  const SolitonProfile& p = tables.profile();
  const int n = p.dim();
  const double omega = sphere_area(n);
  std::vector<double> out;
  for (double r : radii) {
    const auto j = p.jets(r, 3);
    const auto [s, ds] = scalar_and_slope(n, j.w);
    // psi(R(r)) is evaluated through the radius parametrization so that the
    // Bryant case cancels without round trips through root finding.
    const double psi = ds / j.f[1] * tables.psi_scale();
    const double x = ds - psi * j.f[1];
    out.push_back(omega * std::pow(j.w[0], n - 1) * std::exp(tables.u_at_radius(r)) * x);
  }
  return out;
}

}  // namespace soliton
