#pragma once

#include <functional>
#include <span>
#include <vector>

#include "soliton/chart.hpp"
#include "soliton/taylor.hpp"
#include "soliton/tensor.hpp"

namespace soliton {

using TaylorTensor = Tensor<Taylor>;

/// How far down the pipeline a pack is populated. The value is the metric
/// jet order it consumes.
enum class Depth { riemann = 2, cotton = 3, bach = 4 };

constexpr int required_order(Depth d) { return static_cast<int>(d); }

/// Curvature tensors at one point, all indices lowered. Index conventions:
///   christoffel(a, b, c) = Gamma^a_{bc}
///   riemann(i, j, k, l)  with R_1212 > 0 on the round sphere, Ric_jl = g^ik R_ijkl
///   grad_ricci(m, j, k)  = nabla_m R_jk
///   cotton(i, j, k)      = nabla_i R_jk - nabla_j R_ik - (g_jk nabla_i R - g_ik nabla_j R) / (2(n-1))
///   weyl_divergence(i, j, k) = nabla^l W_ijkl
/// Weyl entries are empty for n = 2; Bach entries are empty for n = 2.
struct CurvaturePack {
  int dim = 0;
  Depth depth = Depth::riemann;

  RealTensor g;
  RealTensor g_inv;
  RealTensor christoffel;
  RealTensor riemann;
  RealTensor ricci;
  double scalar = 0.0;
  RealTensor schouten;
  RealTensor weyl;
  RealTensor weyl_wra;

  RealTensor grad_scalar;
  RealTensor grad_ricci;
  RealTensor cotton;
  RealTensor cotton_schouten;
  RealTensor weyl_divergence;

  RealTensor bach;
  RealTensor bach_cotton_form;

  bool has(Depth d) const noexcept { return static_cast<int>(depth) >= static_cast<int>(d); }
};

/// Throws insufficient_jet_order, non_positive_definite, point_outside_domain.
CurvaturePack curvature_pack(const MetricChart& chart, const ChartPoint& p, Depth depth);
CurvaturePack curvature_from_jet(const MetricJet& jet, Depth depth);
CurvaturePack curvature_from_taylor(std::span<const Taylor> metric, int dim, Depth depth);

/// Inverse metric as a Taylor matrix to the given order (Neumann series
/// about the constant part). Throws non_positive_definite.
std::vector<Taylor> inverse_metric(std::span<const Taylor> g, int dim, int order);

/// (nabla T)_{m i_1..i_r}: derivative index first; result order is one lower.
TaylorTensor covariant_derivative(const TaylorTensor& t, const TaylorTensor& christoffel);

/// Real version from coordinate partials dt(m, i_1..i_r).
RealTensor covariant_derivative(const RealTensor& t, const RealTensor& dt,
                                const RealTensor& christoffel);

RealTensor constant_part(const TaylorTensor& t);

struct AlgebraicResiduals {
  double riemann_antisymmetry = 0.0;
  double riemann_pair_exchange = 0.0;
  double riemann_bianchi = 0.0;
  double ricci_symmetry = 0.0;
  double weyl_trace = 0.0;
  double weyl_wra = 0.0;
  double cotton_skew = 0.0;
  double cotton_trace = 0.0;
  double cotton_routes = 0.0;

  double max() const;
};

AlgebraicResiduals algebraic_residuals(const CurvaturePack& pack);

/// Contraction of t with g^{ab} over two slots; the result keeps the other slots in order.
RealTensor trace(const RealTensor& t, const RealTensor& g_inv, int slot_a, int slot_b);

/// max_{ijk} |C_ijk + (n-2)/(n-3) nabla^l W_ijkl|. Throws dimension_too_low for n <= 3.
double weyl_divergence_check(const MetricChart& chart, const ChartPoint& p);

/// Bach tensor; n >= 4 also cross-checked against the Cotton form.
RealTensor bach_tensor(const MetricChart& chart, const ChartPoint& p);

struct BachDivergence {
  RealTensor divergence;  // nabla^j B_ij
  RealTensor cotton_ricci;  // C_ijk R^jk
  double residual = 0.0;
};

/// n = 3: max |nabla^j B_ij + C_ijk R^jk|; n >= 4: max |nabla^j B_ij - (n-4)/(n-2)^2 C_ijk R^jk|.
BachDivergence bach_divergence(const MetricChart& chart, const ChartPoint& p, double h0 = 1e-3);
double bach_divergence_check(const MetricChart& chart, const ChartPoint& p, double h0 = 1e-3);

using PointTensor = std::function<RealTensor(const ChartPoint&)>;

/// Coordinate partials of a tensor-valued map by central differences at h and
/// h/2 combined with one Richardson step. The step starts at h0 and is halved
/// until p +- h stays in the chart domain; throws step_underflow below 1e-6.
/// Result layout (k, i_1..i_r).
RealTensor richardson_partials(const MetricChart& chart, const ChartPoint& p,
                               const PointTensor& f, double h0 = 1e-3);

/// Raise both indices of a symmetric 2-tensor.
RealTensor raise2(const RealTensor& t, const RealTensor& g_inv);

/// Squared norm with all indices contracted by g^{-1}.
double norm_squared(const RealTensor& t, const RealTensor& g_inv);

}  // namespace soliton
