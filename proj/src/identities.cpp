#include "soliton/identities.hpp"

#include <cmath>
#include <sstream>

#include "soliton/error.hpp"

namespace soliton {

namespace {

std::vector<double> raise1(const std::vector<double>& v, const RealTensor& g_inv) {
  const int n = g_inv.dim();
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i] += g_inv(i, j) * v[j];
  return out;
}

}  // namespace

double soliton_residual(const SolitonStructure& s, const ChartPoint& p) {
  const auto pack = curvature_pack(s.chart(), p, Depth::riemann);
  const auto f = s.potential_jet(p, pack.christoffel);
  const int n = s.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      worst = std::fmax(worst, std::fabs(pack.ricci(i, j) + f.hess(i, j) - s.rho() * pack.g(i, j)));
  return worst;
}

HamiltonResiduals hamilton_identities(const SolitonStructure& s, const ChartPoint& p) {
  if (!s.steady() && !s.expanding())
    throw Error(ErrorCode::rho_unsupported, "Hamilton identities need rho = 0 or rho = -1/2");
  const auto pack = curvature_pack(s.chart(), p, Depth::cotton);
  const auto f = s.potential_jet(p, pack.christoffel);
  const int n = s.dim();
  const auto up = raise1(f.grad, pack.g_inv);
  HamiltonResiduals out;
  double grad_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    grad_sq += f.grad[i] * up[i];
    double twice_ric = 0.0;
    for (int j = 0; j < n; ++j) twice_ric += 2.0 * pack.ricci(i, j) * up[j];
    out.grad_scalar = std::fmax(out.grad_scalar, std::fabs(pack.grad_scalar[i] - twice_ric));
  }
  if (s.steady()) {
    if (!s.c0()) throw Error(ErrorCode::invalid_params, "steady structure without C0");
    out.conservation = std::fabs(pack.scalar + grad_sq - *s.c0());
  } else {
    out.conservation = std::fabs(pack.scalar + grad_sq + f.f);
  }
  return out;
}

double scalar_nonneg_scan(const SolitonStructure& s, const std::vector<ChartPoint>& points) {
  double lo = INFINITY;
  for (const auto& p : points) lo = std::fmin(lo, curvature_pack(s.chart(), p, Depth::riemann).scalar);
  return lo;
}

SolitonStructure normalize_steady(const SolitonStructure& s) {
  if (!s.steady()) throw Error(ErrorCode::invalid_params, "normalization applies to steady structures");
  const double c0 = s.c0().value_or(0.0);
  if (c0 == 0.0) throw Error(ErrorCode::zero_c0, "C0 = 0 cannot be normalized");
  if (!(c0 > 0.0)) throw Error(ErrorCode::invalid_params, "C0 must be positive");
  if (c0 == 1.0) return s;
  const double phi = 0.5 * std::log(c0);
  std::ostringstream name;
  name.precision(17);
  name << s.name() << "*" << c0;
  auto chart = std::make_shared<ConformalChart>(name.str(), s.chart_ptr(), [phi](std::span<const Taylor> x) {
    return Taylor(x[0].basis(), x[0].order(), phi);
  });
  SolitonStructure out(name.str(), chart, s.potential(), 0.0, 1.0, s.box_lo(), s.box_hi());
  out.set_tolerance(s.tolerance());
  return out;
}

RealTensor d_tensor(const CurvaturePack& pack, const PotentialJet& f) {
  const int n = pack.dim;
  if (n < 3) throw Error(ErrorCode::dimension_too_low, "D tensor needs n >= 3");
  const double a = 1.0 / (n - 2.0);
  const double b = 1.0 / (2.0 * (n - 1.0) * (n - 2.0));
  const double c = pack.scalar / ((n - 1.0) * (n - 2.0));
  const auto& g = pack.g;
  const auto& ric = pack.ricci;
  const auto& dr = pack.grad_scalar;
  const auto& df = f.grad;
  RealTensor d(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        d(i, j, k) = a * (ric(j, k) * df[i] - ric(i, k) * df[j]) + b * (g(j, k) * dr[i] - g(i, k) * dr[j]) +
                     c * (g(i, k) * df[j] - g(j, k) * df[i]);
  return d;
}

RealTensor d_tensor(const SolitonStructure& s, const ChartPoint& p) {
  if (s.dim() < 3) throw Error(ErrorCode::dimension_too_low, "D tensor needs n >= 3");
  const auto pack = curvature_pack(s.chart(), p, Depth::cotton);
  return d_tensor(pack, s.potential_jet(p, pack.christoffel));
}

double d_symmetry_residual(const RealTensor& d, const RealTensor& g_inv) {
  const int n = d.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) worst = std::fmax(worst, std::fabs(d(i, j, k) + d(j, i, k)));
  for (int s : {1, 2}) {
    const RealTensor t = trace(d, g_inv, 0, s);
    for (double v : t.data()) worst = std::fmax(worst, std::fabs(v));
  }
  return worst;
}

double check_DCW(const SolitonStructure& s, const ChartPoint& p) {
  const int n = s.dim();
  if (n < 3) throw Error(ErrorCode::dimension_too_low, "D tensor needs n >= 3");
  const auto pack = curvature_pack(s.chart(), p, Depth::cotton);
  const auto f = s.potential_jet(p, pack.christoffel);
  const auto d = d_tensor(pack, f);
  const auto up = raise1(f.grad, pack.g_inv);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double w = 0.0;
        if (n >= 4)
          for (int l = 0; l < n; ++l) w += pack.weyl(i, j, k, l) * up[l];
        worst = std::fmax(worst, std::fabs(d(i, j, k) - pack.cotton(i, j, k) - w));
      }
  return worst;
}

BDCheck check_BD(const SolitonStructure& s, const ChartPoint& p, double h0) {
  const int n = s.dim();
  if (n < 3) throw Error(ErrorCode::dimension_too_low, "D tensor needs n >= 3");
  const auto pack = curvature_pack(s.chart(), p, Depth::bach);
  const auto f = s.potential_jet(p, pack.christoffel);
  const auto d = d_tensor(pack, f);
  const auto dd = richardson_partials(
      s.chart(), p, [&s](const ChartPoint& q) { return d_tensor(s, q); }, h0);
  const auto nabla_d = covariant_derivative(d, dd, pack.christoffel);  // (a, i, k, j)
  const auto div_d = trace(nabla_d, pack.g_inv, 0, 2);                  // (i, j)
  const auto up = raise1(f.grad, pack.g_inv);
  BDCheck out;
  out.bach_term = RealTensor(n, 2);
  out.rest = RealTensor(n, 2);
  const double c = (n - 3.0) / (n - 2.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double cf = 0.0;
      for (int l = 0; l < n; ++l) cf += pack.cotton(j, l, i) * up[l];
      out.bach_term(i, j) = (n - 2.0) * pack.bach(i, j);
      out.rest(i, j) = div_d(i, j) + c * cf;
      out.residual = std::fmax(out.residual, std::fabs(out.bach_term(i, j) + out.rest(i, j)));
    }
  return out;
}

BachFlux bach_flux_identity(const SolitonStructure& s, const ChartPoint& p, double h0) {
  if (s.dim() != 3) throw Error(ErrorCode::invalid_params, "the Bach flux identity is three-dimensional");
  const auto pack = curvature_pack(s.chart(), p, Depth::cotton);
  const auto f = s.potential_jet(p, pack.christoffel);
  const auto bd = bach_divergence(s.chart(), p, h0);
  const auto up = raise1(f.grad, pack.g_inv);
  BachFlux out;
  for (int i = 0; i < 3; ++i) out.div_bach_grad_f += bd.divergence[i] * up[i];
  out.cotton_squared = norm_squared(pack.cotton, pack.g_inv);
  out.residual = std::fabs(out.div_bach_grad_f + 0.5 * out.cotton_squared);
  return out;
}

}  // namespace soliton
