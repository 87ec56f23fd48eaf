#include "soliton/models.hpp"

#include <boost/random/sobol.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "soliton/error.hpp"

namespace soliton {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Taylor> coordinate_taylors(std::span<const double> p, int order) {
  const int n = static_cast<int>(p.size());
  const auto& basis = MonomialBasis::get(n, std::max(order, 1));
  std::vector<Taylor> x;
  for (int i = 0; i < n; ++i) x.push_back(Taylor::variable(basis, order, i, p[i]));
  return x;
}

Taylor zero_like(const Taylor& x) { return Taylor(x.basis(), x.order()); }

std::vector<Taylor> identity_metric(std::span<const Taylor> x) {
  const std::size_t n = x.size();
  std::vector<Taylor> g(n * n, zero_like(x[0]));
  for (std::size_t i = 0; i < n; ++i) g[i * n + i] += 1.0;
  return g;
}

Domain open_box(const std::vector<double>& lo, const std::vector<double>& hi) { return box_domain(lo, hi); }

void require_dim(int n, int lo, std::string_view model) {
  if (n < lo) {
    std::ostringstream msg;
    msg << model << " needs dimension >= " << lo << ", got " << n;
    throw Error(ErrorCode::invalid_params, msg.str());
  }
}

SolitonStructure flat_model(int n) {
  require_dim(n, 2, "flat");
  std::vector<double> lo(n, -1.0), hi(n, 1.0);
  auto chart = std::make_shared<FunctionChart>("flat(" + std::to_string(n) + ")", n,
                                               open_box(std::vector<double>(n, -1e6), std::vector<double>(n, 1e6)),
                                               [](std::span<const Taylor> x) { return identity_metric(x); });
  return SolitonStructure(chart->name(), chart, [](std::span<const Taylor> x) { return zero_like(x[0]); },
                          0.0, 0.0, lo, hi);
}

SolitonStructure gaussian_expander(int n) {
  require_dim(n, 2, "gaussian-expander");
  std::vector<double> lo(n, -2.0), hi(n, 2.0);
  auto chart = std::make_shared<FunctionChart>("gaussian-expander(" + std::to_string(n) + ")", n,
                                               open_box(std::vector<double>(n, -1e6), std::vector<double>(n, 1e6)),
                                               [](std::span<const Taylor> x) { return identity_metric(x); });
  auto f = [](std::span<const Taylor> x) {
    Taylor s = zero_like(x[0]);
    for (const auto& xi : x) s.add_product(xi, xi);
    return -0.25 * s;
  };
  return SolitonStructure(chart->name(), chart, f, -0.5, std::nullopt, lo, hi);
}

Taylor cigar_factor(const Taylor& x, const Taylor& y) { return 1.0 + x * x + y * y; }

SolitonStructure cigar() {
  auto chart = std::make_shared<FunctionChart>(
      "cigar", 2, open_box({-1e6, -1e6}, {1e6, 1e6}), [](std::span<const Taylor> x) {
        const Taylor c = reciprocal(cigar_factor(x[0], x[1]));
        std::vector<Taylor> g(4, zero_like(x[0]));
        g[0] = c;
        g[3] = c;
        return g;
      });
  auto f = [](std::span<const Taylor> x) { return -log(cigar_factor(x[0], x[1])); };
  return SolitonStructure("cigar", chart, f, 0.0, 4.0, {-2.0, -2.0}, {2.0, 2.0});
}

// Coordinates (t, x, y): dt^2 + (dx^2 + dy^2)/(1 + x^2 + y^2).
SolitonStructure line_cigar(double linear) {
  std::ostringstream name;
  name << "line-cigar";
  if (linear != 0.0) name << "(linear=" << linear << ")";
  auto chart = std::make_shared<FunctionChart>(
      name.str(), 3, open_box({-1e6, -1e6, -1e6}, {1e6, 1e6, 1e6}), [](std::span<const Taylor> x) {
        const Taylor c = reciprocal(cigar_factor(x[1], x[2]));
        std::vector<Taylor> g(9, zero_like(x[0]));
        g[0] += 1.0;
        g[4] = c;
        g[8] = c;
        return g;
      });
  auto f = [linear](std::span<const Taylor> x) { return -log(cigar_factor(x[1], x[2])) + linear * x[0]; };
  return SolitonStructure(name.str(), chart, f, 0.0, 4.0 + linear * linear, {-1.0, -2.0, -2.0},
                          {1.0, 2.0, 2.0});
}

// S^2 of radius sqrt(2) times R^{n-2} with the Gaussian shrinker potential |y|^2/4.
SolitonStructure sphere_factor(int n) {
  require_dim(n, 3, "sphere-factor");
  std::vector<double> dom_lo(n, -1e6), dom_hi(n, 1e6), lo(n, -1.0), hi(n, 1.0);
  dom_lo[0] = WarpedChart::kPoleMargin;
  dom_hi[0] = kPi - WarpedChart::kPoleMargin;
  lo[0] = 0.3;
  hi[0] = kPi - 0.3;
  lo[1] = -2.5;
  hi[1] = 2.5;
  auto chart = std::make_shared<FunctionChart>(
      "sphere-factor(" + std::to_string(n) + ")", n, open_box(dom_lo, dom_hi), [n](std::span<const Taylor> x) {
        std::vector<Taylor> g = identity_metric(x);
        g[0] = zero_like(x[0]) + 2.0;
        g[n + 1] = 2.0 * square(sin(x[0]));
        return g;
      });
  auto f = [](std::span<const Taylor> x) {
    Taylor s = zero_like(x[0]);
    for (std::size_t i = 2; i < x.size(); ++i) s.add_product(x[i], x[i]);
    return 0.25 * s;
  };
  return SolitonStructure(chart->name(), chart, f, 0.5, std::nullopt, lo, hi);
}

SolitonStructure profile_model(int n, double a, double rho, const ModelParams& params) {
  auto profile = std::make_shared<SolitonProfile>(integrate_profile(n, a, rho, params.rmax, params.tol));
  return profile_chart(profile);
}

int pick_dim(const ModelParams& params, int fallback) { return params.dim > 0 ? params.dim : fallback; }

}  // namespace

SolitonStructure::SolitonStructure(std::string name, std::shared_ptr<const MetricChart> chart,
                                   ScalarFormula potential, double rho, std::optional<double> c0,
                                   std::vector<double> box_lo, std::vector<double> box_hi)
    : name_(std::move(name)),
      chart_(std::move(chart)),
      potential_(std::move(potential)),
      rho_(rho),
      c0_(c0),
      box_lo_(std::move(box_lo)),
      box_hi_(std::move(box_hi)) {}

Taylor SolitonStructure::potential_taylor(const ChartPoint& p, int order) const {
  if (!chart_->contains(p.coords)) throw Error(ErrorCode::point_outside_domain, "potential evaluated outside the chart");
  const auto x = coordinate_taylors(p.coords, order);
  return potential_(x);
}

PotentialJet SolitonStructure::potential_jet(const ChartPoint& p, const RealTensor& christoffel) const {
  const int n = dim();
  const Taylor f = potential_taylor(p, 2);
  const auto& basis = f.basis();
  PotentialJet jet;
  jet.f = f.constant();
  jet.grad.assign(n, 0.0);
  jet.hess = RealTensor(n, 2);
  std::vector<int> e(n, 0);
  for (int i = 0; i < n; ++i) {
    e.assign(n, 0);
    e[i] = 1;
    jet.grad[i] = f.coeff(basis.index(e));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      e.assign(n, 0);
      ++e[i];
      ++e[j];
      const int m = basis.index(e);
      double h = f.coeff(m) * basis.factorial(m);
      for (int k = 0; k < n; ++k) h -= christoffel(k, i, j) * jet.grad[k];
      jet.hess(i, j) = h;
    }
  }
  return jet;
}

PotentialJet SolitonStructure::potential_jet(const ChartPoint& p) const {
  return potential_jet(p, curvature_pack(*chart_, p, Depth::riemann).christoffel);
}

std::vector<ChartPoint> SolitonStructure::default_grid(std::uint64_t seed) const {
  const int n = dim();
  const std::size_t count = std::size_t{1} << (n + 1);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(n);
  for (double& s : shift) s = unit(rng);
  boost::random::sobol qrng(static_cast<std::size_t>(n));
  const double span = static_cast<double>(qrng.max()) - static_cast<double>(qrng.min()) + 1.0;
  std::vector<ChartPoint> grid;
  for (std::size_t k = 0; k < count; ++k) {
    ChartPoint p;
    for (int i = 0; i < n; ++i) {
      double u = (static_cast<double>(qrng()) - static_cast<double>(qrng.min())) / span + shift[i];
      u -= std::floor(u);
      p.coords.push_back(box_lo_[i] + (box_hi_[i] - box_lo_[i]) * u);
    }
    grid.push_back(std::move(p));
  }
  return grid;
}

SolitonStructure profile_chart(std::shared_ptr<const SolitonProfile> profile) {
  const int n = profile->dim();
  auto chart = profile_metric_chart(profile);
  auto f = [profile](std::span<const Taylor> x) {
    const Taylor& r = x[0];
    return compose(r, profile->jets(r.constant(), r.order()).f);
  };
  std::optional<double> c0;
  if (profile->steady()) c0 = -n * profile->a();
  std::vector<double> lo(n, 0.3), hi(n, kPi - 0.3);
  lo[0] = std::max(0.5, profile->eps() * 10.0);
  hi[0] = std::min(20.0, 0.5 * profile->rmax());
  if (n >= 2) {
    lo[n - 1] = -2.5;
    hi[n - 1] = 2.5;
  }
  SolitonStructure s(chart->name(), chart, f, profile->rho(), c0, lo, hi);
  s.set_profile(profile);
  s.set_tolerance(10.0 * profile->tol());
  return s;
}

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names{"flat",   "gaussian-expander", "cigar",        "line-cigar",
                                              "bryant", "expander",          "sphere-factor"};
  return names;
}

SolitonStructure model(std::string_view name, const ModelParams& params) {
  if (name == "flat") return flat_model(pick_dim(params, 3));
  if (name == "gaussian-expander") return gaussian_expander(pick_dim(params, 3));
  if (name == "cigar") {
    if (params.dim != 0 && params.dim != 2) throw Error(ErrorCode::invalid_params, "cigar is two-dimensional");
    return cigar();
  }
  if (name == "line-cigar") {
    if (params.dim != 0 && params.dim != 3) throw Error(ErrorCode::invalid_params, "line-cigar is three-dimensional");
    return line_cigar(params.linear);
  }
  if (name == "bryant") {
    const int n = pick_dim(params, 3);
    const double a = params.a.value_or(-1.0 / n);
    if (!(a < 0.0)) throw Error(ErrorCode::invalid_params, "bryant needs a < 0");
    return profile_model(n, a, 0.0, params);
  }
  if (name == "expander") {
    const int n = pick_dim(params, 3);
    const double a = params.a.value_or(-1.0);
    if (!(a < 0.0)) throw Error(ErrorCode::invalid_params, "expander needs a < 0");
    return profile_model(n, a, -0.5, params);
  }
  if (name == "sphere-factor") return sphere_factor(pick_dim(params, 4));
  throw Error(ErrorCode::unknown_model, "unknown model '" + std::string(name) + "'");
}

}  // namespace soliton
