#include "soliton/curvature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "soliton/error.hpp"

namespace soliton {

namespace {

std::size_t ipow(int n, int r) {
  std::size_t s = 1;
  for (int i = 0; i < r; ++i) s *= static_cast<std::size_t>(n);
  return s;
}

TaylorTensor taylor_tensor(int n, int rank, const MonomialBasis& basis, int order) {
  return TaylorTensor(n, rank, Taylor(basis, order));
}

void update_max(double& m, double v) { m = std::fmax(m, std::fabs(v)); }

}  // namespace

RealTensor constant_part(const TaylorTensor& t) {
  RealTensor out(t.dim(), t.rank());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i].constant();
  return out;
}

std::vector<Taylor> inverse_metric(std::span<const Taylor> g, int n, int order) {
  Eigen::MatrixXd g0(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g0(i, j) = g[i * n + j].constant();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!std::isfinite(g0(i, j)))
        throw Error(ErrorCode::non_positive_definite, "metric has non-finite entries");
  Eigen::LLT<Eigen::MatrixXd> llt(g0);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::non_positive_definite, "metric is not positive definite");
  const Eigen::MatrixXd m = llt.solve(Eigen::MatrixXd::Identity(n, n));

  const auto& basis = g[0].basis();
  auto constant = [&](double v) { return Taylor(basis, order, v); };
  // e = -(g - g0) m has no constant term, so the series terminates at `order`.
  std::vector<Taylor> e(n * n, constant(0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Taylor d = g[i * n + k].truncated(order);
        d.coeff(0) = 0.0;
        if (m(k, j) != 0.0) e[i * n + j] -= d * m(k, j);
      }
    }
  }
  std::vector<Taylor> sum(n * n, constant(0.0));
  std::vector<Taylor> term(n * n, constant(0.0));
  for (int i = 0; i < n; ++i) {
    sum[i * n + i] += 1.0;
    term[i * n + i] += 1.0;
  }
  for (int k = 1; k <= order; ++k) {
    std::vector<Taylor> next(n * n, constant(0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) next[i * n + j].add_product(term[i * n + l], e[l * n + j]);
    term = std::move(next);
    for (int i = 0; i < n * n; ++i) sum[i] += term[i];
  }
  std::vector<Taylor> inv(n * n, constant(0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        if (m(i, l) != 0.0) inv[i * n + j] += sum[l * n + j] * m(i, l);
  return inv;
}

TaylorTensor covariant_derivative(const TaylorTensor& t, const TaylorTensor& christoffel) {
  const int n = t.dim();
  const int r = t.rank();
  const std::size_t size = t.size();
  const int order = t[0].order() - 1;
  TaylorTensor out = taylor_tensor(n, r + 1, t[0].basis(), order);
  std::vector<int> idx(r);
  for (int m = 0; m < n; ++m) {
    for (std::size_t f = 0; f < size; ++f) {
      Taylor& o = out[m * size + f];
      o = t[f].derivative(m);
      t.unflatten(f, idx.data());
      for (int slot = 0; slot < r; ++slot) {
        const std::size_t stride = ipow(n, r - 1 - slot);
        const std::size_t base = f - idx[slot] * stride;
        for (int s = 0; s < n; ++s) o.add_product(christoffel(s, m, idx[slot]), t[base + s * stride], -1.0);
      }
    }
  }
  return out;
}

RealTensor covariant_derivative(const RealTensor& t, const RealTensor& dt,
                                const RealTensor& christoffel) {
  const int n = t.dim();
  const int r = t.rank();
  const std::size_t size = t.size();
  RealTensor out(n, r + 1);
  std::vector<int> idx(r);
  for (int m = 0; m < n; ++m) {
    for (std::size_t f = 0; f < size; ++f) {
      double v = dt[m * size + f];
      t.unflatten(f, idx.data());
      for (int slot = 0; slot < r; ++slot) {
        const std::size_t stride = ipow(n, r - 1 - slot);
        const std::size_t base = f - idx[slot] * stride;
        for (int s = 0; s < n; ++s) v -= christoffel(s, m, idx[slot]) * t[base + s * stride];
      }
      out[m * size + f] = v;
    }
  }
  return out;
}

CurvaturePack curvature_from_taylor(std::span<const Taylor> metric, int n, Depth depth) {
  const int K = required_order(depth);
  if (n < 2) throw Error(ErrorCode::invalid_params, "dimension must be at least 2");
  if (metric.size() != static_cast<std::size_t>(n * n) || metric[0].order() < K)
    throw Error(ErrorCode::insufficient_jet_order,
                "curvature depth needs metric jets of order " + std::to_string(K));
  const auto& basis = metric[0].basis();

  CurvaturePack pack;
  pack.dim = n;
  pack.depth = depth;

  TaylorTensor g = taylor_tensor(n, 2, basis, K);
  for (int i = 0; i < n * n; ++i) g[i] = metric[i].truncated(K);
  TaylorTensor ginv = taylor_tensor(n, 2, basis, K - 1);
  {
    auto inv = inverse_metric(metric, n, K - 1);
    for (int i = 0; i < n * n; ++i) ginv[i] = std::move(inv[i]);
  }

  // Christoffel symbols, order K-1.
  TaylorTensor dg = taylor_tensor(n, 3, basis, K - 1);  // (k, i, j) = d_k g_ij
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg(k, i, j) = g(i, j).derivative(k);
  TaylorTensor lower = taylor_tensor(n, 3, basis, K - 1);  // Gamma_{k b c}
  for (int k = 0; k < n; ++k)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        Taylor v = dg(b, k, c) + dg(c, k, b) - dg(k, b, c);
        v *= 0.5;
        lower(k, b, c) = v;
        lower(k, c, b) = v;
      }
  TaylorTensor gamma = taylor_tensor(n, 3, basis, K - 1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        Taylor& v = gamma(a, b, c);
        for (int k = 0; k < n; ++k) v.add_product(ginv(a, k), lower(k, b, c));
        gamma(a, c, b) = v;
      }

  // Riemann, order K-2.
  const int kr = K - 2;
  TaylorTensor dgamma = taylor_tensor(n, 4, basis, kr);  // (i, m, j, l) = d_i Gamma^m_jl
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) dgamma(i, m, j, l) = gamma(m, j, l).derivative(i);
  TaylorTensor rup = taylor_tensor(n, 4, basis, kr);  // (m, i, j, l)
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          Taylor v = dgamma(i, m, j, l) - dgamma(j, m, i, l);
          for (int s = 0; s < n; ++s) {
            v.add_product(gamma(m, i, s), gamma(s, j, l));
            v.add_product(gamma(m, j, s), gamma(s, i, l), -1.0);
          }
          rup(m, j, i, l) = -v;
          rup(m, i, j, l) = std::move(v);
        }
  TaylorTensor gk = taylor_tensor(n, 2, basis, kr);
  for (std::size_t i = 0; i < g.size(); ++i) gk[i] = g[i].truncated(kr);
  TaylorTensor riem = taylor_tensor(n, 4, basis, kr);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Taylor& v = riem(i, j, k, l);
          for (int m = 0; m < n; ++m) v.add_product(gk(k, m), rup(m, i, j, l));
        }
  TaylorTensor ric = taylor_tensor(n, 2, basis, kr);
  for (int j = 0; j < n; ++j)
    for (int l = j; l < n; ++l) {
      Taylor& v = ric(j, l);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) v.add_product(ginv(i, k), riem(i, j, k, l));
      ric(l, j) = v;
    }
  Taylor scalar(basis, kr);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) scalar.add_product(ginv(j, l), ric(j, l));
  TaylorTensor schouten = taylor_tensor(n, 2, basis, kr);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      schouten(i, j) = ric(i, j);
      schouten(i, j).add_product(scalar, gk(i, j), -1.0 / (2.0 * (n - 1)));
    }

  TaylorTensor weyl;
  if (n >= 3) {
    weyl = taylor_tensor(n, 4, basis, kr);
    const double c1 = 1.0 / (n - 2);
    const double c2 = 1.0 / ((n - 1.0) * (n - 2.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            Taylor v = riem(i, j, k, l);
            v.add_product(gk(i, k), ric(j, l), -c1);
            v.add_product(gk(i, l), ric(j, k), c1);
            v.add_product(gk(j, k), ric(i, l), c1);
            v.add_product(gk(j, l), ric(i, k), -c1);
            Taylor gg = gk(i, k) * gk(j, l) - gk(i, l) * gk(j, k);
            v.add_product(scalar, gg, c2);
            weyl(i, j, k, l) = std::move(v);
          }
  }

  pack.g = constant_part(g);
  pack.g_inv = constant_part(ginv);
  pack.christoffel = constant_part(gamma);
  pack.riemann = constant_part(riem);
  pack.ricci = constant_part(ric);
  pack.scalar = scalar.constant();
  pack.schouten = constant_part(schouten);
  if (n >= 3) {
    pack.weyl = constant_part(weyl);
    pack.weyl_wra = RealTensor(n, 4);
    const auto& G = pack.g;
    const auto& A = pack.schouten;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            pack.weyl_wra(i, j, k, l) =
                pack.riemann(i, j, k, l) - (G(i, k) * A(j, l) - G(i, l) * A(j, k) -
                                            G(j, k) * A(i, l) + G(j, l) * A(i, k)) /
                                               (n - 2);
  }
  if (depth == Depth::riemann) return pack;

  // Cotton, order K-3.
  const int kc = K - 3;
  TaylorTensor grad_ric = covariant_derivative(ric, gamma);
  TaylorTensor grad_a = covariant_derivative(schouten, gamma);
  TaylorTensor grad_r = taylor_tensor(n, 1, basis, kc);
  for (int i = 0; i < n; ++i) grad_r[i] = scalar.derivative(i);
  TaylorTensor cotton = taylor_tensor(n, 3, basis, kc);
  RealTensor cotton_s(n, 3);
  const double cc = 1.0 / (2.0 * (n - 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Taylor v = grad_ric(i, j, k) - grad_ric(j, i, k);
        v.add_product(gk(j, k), grad_r[i], -cc);
        v.add_product(gk(i, k), grad_r[j], cc);
        cotton(i, j, k) = std::move(v);
        cotton_s(i, j, k) = grad_a(i, j, k).constant() - grad_a(j, i, k).constant();
      }
  pack.grad_scalar = constant_part(grad_r);
  pack.grad_ricci = constant_part(grad_ric);
  pack.cotton = constant_part(cotton);
  pack.cotton_schouten = std::move(cotton_s);

  TaylorTensor div_w;
  if (n >= 3) {
    TaylorTensor grad_w = covariant_derivative(weyl, gamma);  // (m, i, j, k, l)
    div_w = taylor_tensor(n, 3, basis, kc);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Taylor& v = div_w(i, j, k);
          for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) v.add_product(ginv(l, m), grad_w(m, i, j, k, l));
        }
    pack.weyl_divergence = constant_part(div_w);
  }
  if (depth == Depth::cotton || n < 3) return pack;

  // Bach, order K-4 = 0.
  TaylorTensor grad_c = covariant_derivative(cotton, gamma);  // (m, k, i, j)
  const RealTensor& gi = pack.g_inv;
  RealTensor div_c(n, 2);  // nabla^k C_kij
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) v += gi(k, m) * grad_c(m, k, i, j).constant();
      div_c(i, j) = v;
    }
  if (n == 3) {
    pack.bach = div_c;
    pack.bach_cotton_form = div_c;
    return pack;
  }
  const RealTensor ric_up = raise2(pack.ricci, gi);
  RealTensor rw(n, 2);  // R^ab W_iajb
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) v += ric_up(a, b) * pack.weyl(i, a, j, b);
      rw(i, j) = v;
    }
  TaylorTensor grad_div_w = covariant_derivative(div_w, gamma);  // (m, i, k, j)
  pack.bach = RealTensor(n, 2);
  pack.bach_cotton_form = RealTensor(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double dd = 0.0;
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) dd += gi(k, m) * grad_div_w(m, i, k, j).constant();
      pack.bach(i, j) = dd / (n - 3) + rw(i, j) / (n - 2);
      pack.bach_cotton_form(i, j) = (div_c(i, j) + rw(i, j)) / (n - 2);
    }
  return pack;
}

CurvaturePack curvature_from_jet(const MetricJet& jet, Depth depth) {
  if (jet.order() < required_order(depth))
    throw Error(ErrorCode::insufficient_jet_order,
                "curvature depth needs metric jets of order " + std::to_string(required_order(depth)));
  const auto t = jet.to_taylor();
  return curvature_from_taylor(t, jet.dim(), depth);
}

CurvaturePack curvature_pack(const MetricChart& chart, const ChartPoint& p, Depth depth) {
  const int order = required_order(depth);
  if (order > chart.max_order())
    throw Error(ErrorCode::insufficient_jet_order, chart.name() + " cannot supply the jet order");
  const auto t = chart.taylor_metric(p, order);
  return curvature_from_taylor(t, chart.dim(), depth);
}

RealTensor trace(const RealTensor& t, const RealTensor& g_inv, int slot_a, int slot_b) {
  const int n = t.dim();
  const int r = t.rank();
  RealTensor out(n, r - 2);
  std::vector<int> idx(r);
  for (std::size_t f = 0; f < t.size(); ++f) {
    t.unflatten(f, idx.data());
    std::size_t o = 0;
    for (int s = 0; s < r; ++s)
      if (s != slot_a && s != slot_b) o = o * n + idx[s];
    out[o] += g_inv(idx[slot_a], idx[slot_b]) * t[f];
  }
  return out;
}

RealTensor raise2(const RealTensor& t, const RealTensor& g_inv) {
  const int n = t.dim();
  RealTensor half(n, 2), out(n, 2);
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d)
      for (int c = 0; c < n; ++c) half(a, d) += g_inv(a, c) * t(c, d);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) out(a, b) += half(a, d) * g_inv(d, b);
  return out;
}

double norm_squared(const RealTensor& t, const RealTensor& g_inv) {
  const int n = t.dim();
  const int r = t.rank();
  RealTensor up = t;
  std::vector<int> idx(r);
  for (int slot = 0; slot < r; ++slot) {
    const std::size_t stride = ipow(n, r - 1 - slot);
    RealTensor next(n, r);
    for (std::size_t f = 0; f < up.size(); ++f) {
      up.unflatten(f, idx.data());
      const std::size_t base = f - idx[slot] * stride;
      double v = 0.0;
      for (int s = 0; s < n; ++s) v += g_inv(idx[slot], s) * up[base + s * stride];
      next[f] = v;
    }
    up = std::move(next);
  }
  double sum = 0.0;
  for (std::size_t f = 0; f < t.size(); ++f) sum += t[f] * up[f];
  return sum;
}

double AlgebraicResiduals::max() const {
  return std::max({riemann_antisymmetry, riemann_pair_exchange, riemann_bianchi, ricci_symmetry,
                   weyl_trace, weyl_wra, cotton_skew, cotton_trace, cotton_routes});
}

AlgebraicResiduals algebraic_residuals(const CurvaturePack& pack) {
  AlgebraicResiduals res;
  const int n = pack.dim;
  const auto& R = pack.riemann;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          update_max(res.riemann_antisymmetry, R(i, j, k, l) + R(j, i, k, l));
          update_max(res.riemann_antisymmetry, R(i, j, k, l) + R(i, j, l, k));
          update_max(res.riemann_pair_exchange, R(i, j, k, l) - R(k, l, i, j));
          update_max(res.riemann_bianchi, R(i, j, k, l) + R(j, k, i, l) + R(k, i, j, l));
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) update_max(res.ricci_symmetry, pack.ricci(i, j) - pack.ricci(j, i));
  if (!pack.weyl.empty()) {
    for (auto [a, b] : {std::pair{0, 2}, {0, 3}, {1, 2}, {1, 3}})
      res.weyl_trace = std::fmax(res.weyl_trace, max_abs(trace(pack.weyl, pack.g_inv, a, b)));
    res.weyl_wra = max_abs_difference(pack.weyl, pack.weyl_wra);
  }
  if (!pack.cotton.empty()) {
    const auto& C = pack.cotton;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) update_max(res.cotton_skew, C(i, j, k) + C(j, i, k));
    for (auto [a, b] : {std::pair{0, 1}, {0, 2}, {1, 2}})
      res.cotton_trace = std::fmax(res.cotton_trace, max_abs(trace(C, pack.g_inv, a, b)));
    res.cotton_routes = max_abs_difference(C, pack.cotton_schouten);
  }
  return res;
}

double weyl_divergence_check(const MetricChart& chart, const ChartPoint& p) {
  const int n = chart.dim();
  if (n <= 3) throw Error(ErrorCode::dimension_too_low, "Weyl divergence identity needs n >= 4");
  const auto pack = curvature_pack(chart, p, Depth::cotton);
  const double c = (n - 2.0) / (n - 3.0);
  double m = 0.0;
  for (std::size_t f = 0; f < pack.cotton.size(); ++f)
    update_max(m, pack.cotton[f] + c * pack.weyl_divergence[f]);
  return m;
}

RealTensor bach_tensor(const MetricChart& chart, const ChartPoint& p) {
  if (chart.dim() <= 2) throw Error(ErrorCode::dimension_too_low, "Bach tensor needs n >= 3");
  return curvature_pack(chart, p, Depth::bach).bach;
}

RealTensor richardson_partials(const MetricChart& chart, const ChartPoint& p, const PointTensor& f,
                               double h0) {
  const int n = chart.dim();
  auto fits = [&](double h) {
    ChartPoint q = p;
    for (int k = 0; k < n; ++k) {
      for (double s : {h, -h}) {
        q.coords[k] = p.coords[k] + s;
        if (!chart.contains(q.coords)) return false;
      }
      q.coords[k] = p.coords[k];
    }
    return true;
  };
  double h = h0;
  while (!fits(h)) {
    h *= 0.5;
    if (h < 1e-6) throw Error(ErrorCode::step_underflow, "point too close to the chart boundary");
  }
  auto central = [&](int k, double step) {
    ChartPoint plus = p, minus = p;
    plus.coords[k] += step;
    minus.coords[k] -= step;
    RealTensor a = f(plus);
    const RealTensor b = f(minus);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = (a[i] - b[i]) / (2.0 * step);
    return a;
  };
  RealTensor out;
  for (int k = 0; k < n; ++k) {
    const RealTensor coarse = central(k, h);
    const RealTensor fine = central(k, 0.5 * h);
    if (out.empty()) out = RealTensor(coarse.dim(), coarse.rank() + 1);
    for (std::size_t i = 0; i < coarse.size(); ++i)
      out[k * coarse.size() + i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  }
  return out;
}

BachDivergence bach_divergence(const MetricChart& chart, const ChartPoint& p, double h0) {
  const int n = chart.dim();
  if (n <= 2) throw Error(ErrorCode::dimension_too_low, "Bach tensor needs n >= 3");
  const auto pack = curvature_pack(chart, p, Depth::bach);
  const RealTensor db = richardson_partials(
      chart, p, [&](const ChartPoint& q) { return curvature_pack(chart, q, Depth::bach).bach; }, h0);
  const RealTensor grad_b = covariant_derivative(pack.bach, db, pack.christoffel);  // (k, i, j)
  const RealTensor ric_up = raise2(pack.ricci, pack.g_inv);

  BachDivergence out;
  out.divergence = RealTensor(n, 1);
  out.cotton_ricci = RealTensor(n, 1);
  for (int i = 0; i < n; ++i) {
    double div = 0.0, cr = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        div += pack.g_inv(j, k) * grad_b(k, i, j);
        cr += pack.cotton(i, j, k) * ric_up(j, k);
      }
    out.divergence[i] = div;
    out.cotton_ricci[i] = cr;
  }
  const double c = n == 3 ? -1.0 : (n - 4.0) / ((n - 2.0) * (n - 2.0));
  for (int i = 0; i < n; ++i)
    update_max(out.residual, out.divergence[i] - c * out.cotton_ricci[i]);
  return out;
}

double bach_divergence_check(const MetricChart& chart, const ChartPoint& p, double h0) {
  return bach_divergence(chart, p, h0).residual;
}

}  // namespace soliton
