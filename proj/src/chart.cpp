#include "soliton/chart.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "soliton/error.hpp"

namespace soliton {

namespace {

// Exponent vector of a derivative multi-index (d_1..d_k).
void exponents_of(std::span<const int> slots, std::vector<int>& exps) {
  std::fill(exps.begin(), exps.end(), 0);
  for (int s : slots) ++exps[s];
}

}  // namespace

MetricJet::MetricJet(int dim, int order) : dim_(dim), order_(order), g_(dim, 2) {
  for (int k = 1; k <= order; ++k) partials_.emplace_back(dim, 2 + k);
}

std::vector<Taylor> MetricJet::to_taylor() const {
  const auto& basis = MonomialBasis::get(dim_, std::max(order_, 1));
  std::vector<Taylor> out(static_cast<std::size_t>(dim_) * dim_, Taylor(basis, order_));
  std::vector<int> slots;
  for (std::size_t m = 1; m < basis.size(order_); ++m) {
    auto e = basis.exponents(m);
    slots.clear();
    for (int v = 0; v < dim_; ++v)
      for (int c = 0; c < e[v]; ++c) slots.push_back(v);
    const int k = basis.degree(m);
    const RealTensor& d = partial(k);
    const double inv_fact = 1.0 / basis.factorial(m);
    for (int i = 0; i < dim_; ++i) {
      for (int j = 0; j < dim_; ++j) {
        std::size_t flat = static_cast<std::size_t>(i) * dim_ + j;
        for (int s : slots) flat = flat * dim_ + s;
        out[i * dim_ + j].coeff(m) = d[flat] * inv_fact;
      }
    }
  }
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) out[i * dim_ + j].coeff(0) = g_(i, j);
  return out;
}

MetricJet MetricJet::from_taylor(std::span<const Taylor> components, int dim, int order) {
  MetricJet jet(dim, order);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) jet.g_(i, j) = components[i * dim + j].constant();
  std::vector<int> idx(2 + order);
  std::vector<int> exps(dim);
  for (int k = 1; k <= order; ++k) {
    RealTensor& d = jet.partial(k);
    for (std::size_t f = 0; f < d.size(); ++f) {
      d.unflatten(f, idx.data());
      exponents_of(std::span<const int>(idx.data() + 2, k), exps);
      const Taylor& t = components[idx[0] * dim + idx[1]];
      const int m = t.basis().index(exps);
      d[f] = t.coeff(m) * t.basis().factorial(m);
    }
  }
  return jet;
}

Domain box_domain(std::vector<double> lo, std::vector<double> hi) {
  return [lo = std::move(lo), hi = std::move(hi)](std::span<const double> x) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
    return true;
  };
}

bool MetricChart::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) return false;
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return domain_(x);
}

std::vector<Taylor> MetricChart::taylor_metric(const ChartPoint& p, int order) const {
  if (order < 0 || order > max_order())
    throw Error(ErrorCode::order_unsupported,
                name_ + " supports jets up to order " + std::to_string(max_order()));
  if (!contains(p.coords)) throw Error(ErrorCode::point_outside_domain, name_);
  return expand(p.coords, order);
}

MetricJet MetricChart::jet(const ChartPoint& p, int order) const {
  return MetricJet::from_taylor(taylor_metric(p, order), dim_, order);
}

std::vector<Taylor> MetricChart::coordinates(std::span<const double> p, int order) const {
  const auto& basis = MonomialBasis::get(dim_, std::max(order, 1));
  std::vector<Taylor> x;
  x.reserve(dim_);
  for (int i = 0; i < dim_; ++i) x.push_back(Taylor::variable(basis, order, i, p[i]));
  return x;
}

MetricJet metric_jet(const MetricChart& chart, const ChartPoint& p, int order) {
  return chart.jet(p, order);
}

std::vector<Taylor> FunctionChart::expand(std::span<const double> p, int order) const {
  return formula_(coordinates(p, order));
}

double Polynomial::operator()(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff;
    for (int i = 0; i < vars_; ++i) v *= std::pow(x[i], t.exps[i]);
    sum += v;
  }
  return sum;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial out(vars_);
  for (const auto& t : terms_) {
    if (t.exps[var] == 0) continue;
    auto e = t.exps;
    const double c = t.coeff * e[var];
    --e[var];
    out.add_term(c, std::move(e));
  }
  return out;
}

Taylor Polynomial::expand(std::span<const Taylor> x) const {
  Taylor sum(x[0].basis(), x[0].order());
  for (const auto& t : terms_) {
    Taylor term(x[0].basis(), x[0].order(), t.coeff);
    for (int i = 0; i < vars_; ++i)
      for (int k = 0; k < t.exps[i]; ++k) term = term * x[i];
    sum += term;
  }
  return sum;
}

PolynomialChart::PolynomialChart(std::string name, int dim, Domain domain,
                                 std::vector<Polynomial> upper)
    : MetricChart(std::move(name), dim, ChartKind::polynomial, std::move(domain)),
      upper_(std::move(upper)) {
  if (upper_.size() != static_cast<std::size_t>(dim * (dim + 1) / 2))
    throw Error(ErrorCode::invalid_params, "polynomial chart needs n(n+1)/2 components");
}

const Polynomial& PolynomialChart::component(int i, int j) const {
  if (i > j) std::swap(i, j);
  const int n = dim();
  return upper_[i * n - i * (i - 1) / 2 + (j - i)];
}

std::vector<Taylor> PolynomialChart::expand(std::span<const double> p, int order) const {
  const int n = dim();
  const auto x = coordinates(p, order);
  std::vector<Taylor> g(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Taylor c = component(i, j).expand(x);
      if (i == j) c += 1.0;
      g[i * n + j] = c;
      g[j * n + i] = c;
    }
  }
  return g;
}

std::shared_ptr<PolynomialChart> random_polynomial_chart(int dim, std::uint64_t seed,
                                                         int max_degree, int terms,
                                                         double amplitude, double half_width) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-amplitude, amplitude);
  std::uniform_int_distribution<int> degree(1, max_degree);
  std::uniform_int_distribution<int> var(0, dim - 1);
  std::vector<Polynomial> upper;
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      Polynomial p(dim);
      for (int t = 0; t < terms; ++t) {
        std::vector<int> e(dim, 0);
        const int d = degree(rng);
        for (int k = 0; k < d; ++k) ++e[var(rng)];
        p.add_term(coeff(rng), std::move(e));
      }
      upper.push_back(std::move(p));
    }
  }
  return std::make_shared<PolynomialChart>(
      "random-polynomial(" + std::to_string(dim) + ",seed=" + std::to_string(seed) + ")", dim,
      box_domain(std::vector<double>(dim, -half_width), std::vector<double>(dim, half_width)),
      std::move(upper));
}

ConformalChart::ConformalChart(std::string name, std::shared_ptr<const MetricChart> base,
                               ScalarFormula phi)
    : MetricChart(std::move(name), base->dim(), base->kind(),
                  [b = base.get()](std::span<const double> x) { return b->contains(x); }),
      base_(std::move(base)),
      phi_(std::move(phi)) {}

std::vector<Taylor> ConformalChart::expand(std::span<const double> p, int order) const {
  auto g = base_->expand(p, order);
  const Taylor factor = exp(2.0 * phi_(coordinates(p, order)));
  for (auto& c : g)
    if (!c.is_zero()) c = c * factor;
  return g;
}

WarpedChart::WarpedChart(std::string name, int dim, RadialJet warp, double r_lo, double r_hi,
                         ChartKind kind)
    : MetricChart(std::move(name), dim, kind,
                  [r_lo, r_hi](std::span<const double> x) {
                    if (!(x[0] > r_lo && x[0] < r_hi)) return false;
                    const std::size_t n = x.size();
                    for (std::size_t k = 1; k + 1 < n; ++k)
                      if (!(x[k] > kPoleMargin && x[k] < std::numbers::pi - kPoleMargin))
                        return false;
                    return n < 2 || (x[n - 1] > -std::numbers::pi && x[n - 1] < std::numbers::pi);
                  }),
      warp_(std::move(warp)),
      r_lo_(r_lo),
      r_hi_(r_hi) {}

Taylor WarpedChart::warp(const Taylor& r) const {
  const auto d = warp_(r.constant(), r.order());
  return compose(r, d);
}

std::vector<Taylor> WarpedChart::expand(std::span<const double> p, int order) const {
  const int n = dim();
  const auto x = coordinates(p, order);
  const auto& basis = x[0].basis();
  std::vector<Taylor> g(static_cast<std::size_t>(n) * n, Taylor(basis, order));
  g[0] = Taylor(basis, order, 1.0);
  Taylor scale = square(warp(x[0]));
  for (int k = 1; k < n; ++k) {
    g[k * n + k] = scale;
    if (k + 1 < n) scale = scale * square(sin(x[k]));
  }
  return g;
}

}  // namespace soliton
