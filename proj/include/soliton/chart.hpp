#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "soliton/taylor.hpp"
#include "soliton/tensor.hpp"

namespace soliton {

struct ChartPoint {
  std::vector<double> coords;

  int dim() const noexcept { return static_cast<int>(coords.size()); }
};

/// Metric components and their exact partial derivatives at a point.
/// partial(k) has rank 2 + k with layout (i, j, d_1, ..., d_k) and is
/// symmetric in (i, j) and in the derivative slots.
class MetricJet {
 public:
  MetricJet() = default;
  MetricJet(int dim, int order);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }

  RealTensor& g() { return g_; }
  const RealTensor& g() const { return g_; }
  RealTensor& partial(int k) { return partials_.at(k - 1); }
  const RealTensor& partial(int k) const { return partials_.at(k - 1); }

  /// Taylor expansions g_ij(p + t), row-major n x n.
  std::vector<Taylor> to_taylor() const;
  static MetricJet from_taylor(std::span<const Taylor> components, int dim, int order);

 private:
  int dim_ = 0;
  int order_ = 0;
  RealTensor g_;
  std::vector<RealTensor> partials_;
};

enum class ChartKind { closed_form, polynomial, warped_profile };

using Domain = std::function<bool(std::span<const double>)>;

/// Open box lo < x < hi componentwise.
Domain box_domain(std::vector<double> lo, std::vector<double> hi);

/// A coordinate chart carrying a Riemannian metric with exact derivatives up
/// to max_order(). Immutable after construction and safe to share across threads.
class MetricChart {
 public:
  MetricChart(std::string name, int dim, ChartKind kind, Domain domain)
      : name_(std::move(name)), dim_(dim), kind_(kind), domain_(std::move(domain)) {}
  virtual ~MetricChart() = default;

  const std::string& name() const noexcept { return name_; }
  int dim() const noexcept { return dim_; }
  ChartKind kind() const noexcept { return kind_; }
  virtual int max_order() const { return 4; }

  bool contains(std::span<const double> x) const;

  /// Validated jet evaluation; throws point_outside_domain / order_unsupported.
  MetricJet jet(const ChartPoint& p, int order) const;

  /// Same validation as jet(), returning the Taylor form of g.
  std::vector<Taylor> taylor_metric(const ChartPoint& p, int order) const;

  /// Exact Taylor expansion of g_ij about p to the given order, row-major.
  /// Callers are expected to have validated p and order.
  virtual std::vector<Taylor> expand(std::span<const double> p, int order) const = 0;

 protected:
  /// Coordinate functions x_i = p_i + t_i.
  std::vector<Taylor> coordinates(std::span<const double> p, int order) const;

 private:
  std::string name_;
  int dim_;
  ChartKind kind_;
  Domain domain_;
};

MetricJet metric_jet(const MetricChart& chart, const ChartPoint& p, int order);

/// Metric given by a closed-form expression evaluated in Taylor arithmetic
/// (multivariate forward-mode differentiation).
using MetricFormula = std::function<std::vector<Taylor>(std::span<const Taylor>)>;

class FunctionChart : public MetricChart {
 public:
  FunctionChart(std::string name, int dim, Domain domain, MetricFormula formula,
                ChartKind kind = ChartKind::closed_form)
      : MetricChart(std::move(name), dim, kind, std::move(domain)), formula_(std::move(formula)) {}

  std::vector<Taylor> expand(std::span<const double> p, int order) const override;

 private:
  MetricFormula formula_;
};

struct Monomial {
  double coeff = 0.0;
  std::vector<int> exps;
};

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int vars) : vars_(vars) {}
  Polynomial(int vars, std::vector<Monomial> terms) : vars_(vars), terms_(std::move(terms)) {}

  int vars() const noexcept { return vars_; }
  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  void add_term(double coeff, std::vector<int> exps) { terms_.push_back({coeff, std::move(exps)}); }

  double operator()(std::span<const double> x) const;
  Polynomial derivative(int var) const;
  Taylor expand(std::span<const Taylor> x) const;

 private:
  int vars_ = 0;
  std::vector<Monomial> terms_;
};

/// g_ij = delta_ij + P_ij(x) with P symmetric; components given for i <= j in
/// row-major upper-triangle order.
class PolynomialChart : public MetricChart {
 public:
  PolynomialChart(std::string name, int dim, Domain domain, std::vector<Polynomial> upper);

  const Polynomial& component(int i, int j) const;
  std::vector<Taylor> expand(std::span<const double> p, int order) const override;

 private:
  std::vector<Polynomial> upper_;
};

/// Seeded random perturbation of the identity: each upper-triangle component
/// gets `terms` monomials of degree 1..max_degree with coefficients in
/// [-amplitude, amplitude]. Domain is the box [-half_width, half_width]^n; with
/// the defaults the metric is diagonally dominant there.
std::shared_ptr<PolynomialChart> random_polynomial_chart(int dim, std::uint64_t seed,
                                                         int max_degree = 4, int terms = 6,
                                                         double amplitude = 0.1,
                                                         double half_width = 0.3);

/// e^{2 phi} g for a base chart and a conformal exponent phi.
using ScalarFormula = std::function<Taylor(std::span<const Taylor>)>;

class ConformalChart : public MetricChart {
 public:
  ConformalChart(std::string name, std::shared_ptr<const MetricChart> base, ScalarFormula phi);

  std::vector<Taylor> expand(std::span<const double> p, int order) const override;

 private:
  std::shared_ptr<const MetricChart> base_;
  ScalarFormula phi_;
};

/// w^(k)(r) for k = 0..order.
using RadialJet = std::function<std::vector<double>(double r, int order)>;

/// dr^2 + w(r)^2 * (round metric on S^{n-1}) in coordinates (r, theta_1..theta_{n-1}),
/// with the round metric dtheta_1^2 + sin^2 theta_1 dtheta_2^2 + ...
class WarpedChart : public MetricChart {
 public:
  static constexpr double kPoleMargin = 0.05;

  WarpedChart(std::string name, int dim, RadialJet warp, double r_lo, double r_hi,
              ChartKind kind = ChartKind::warped_profile);

  double r_lo() const noexcept { return r_lo_; }
  double r_hi() const noexcept { return r_hi_; }
  std::vector<Taylor> expand(std::span<const double> p, int order) const override;

  /// w(r) as a Taylor expansion in the chart variables.
  Taylor warp(const Taylor& r) const;

 private:
  RadialJet warp_;
  double r_lo_;
  double r_hi_;
};

}  // namespace soliton
