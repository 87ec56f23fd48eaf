#include "soliton/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <utility>

#include "soliton/error.hpp"

namespace soliton {

namespace {

void enumerate_degree(int vars, int degree, int var, std::vector<int>& current,
                      std::vector<int>& out) {
  if (var == vars - 1) {
    current[var] = degree;
    out.insert(out.end(), current.begin(), current.end());
    current[var] = 0;
    return;
  }
  // Lexicographically descending in the first variable.
  for (int e = degree; e >= 0; --e) {
    current[var] = e;
    enumerate_degree(vars, degree - e, var + 1, current, out);
  }
  current[var] = 0;
}

long encode(std::span<const int> exps, int order) {
  long code = 0;
  for (int e : exps) code = code * (order + 1) + e;
  return code;
}

}  // namespace

MonomialBasis::MonomialBasis(int vars, int order) : vars_(vars), order_(order) {
  prefix_.push_back(0);
  std::vector<int> current(vars, 0);
  for (int d = 0; d <= order; ++d) {
    enumerate_degree(vars, d, 0, current, exps_);
    prefix_.push_back(exps_.size() / vars);
  }
  const std::size_t n = prefix_.back();
  degree_.resize(n);
  factorial_.resize(n);
  auto& lookup = lookup_;
  for (std::size_t i = 0; i < n; ++i) {
    auto e = exponents(i);
    degree_[i] = std::accumulate(e.begin(), e.end(), 0);
    double fact = 1.0;
    for (int k : e)
      for (int j = 2; j <= k; ++j) fact *= j;
    factorial_[i] = fact;
    lookup[encode(e, order)] = static_cast<int>(i);
  }

  raised_.assign(n * vars, -1);
  std::vector<int> tmp(vars);
  for (std::size_t i = 0; i < n; ++i) {
    if (degree_[i] == order) continue;
    auto e = exponents(i);
    for (int v = 0; v < vars; ++v) {
      std::copy(e.begin(), e.end(), tmp.begin());
      ++tmp[v];
      raised_[i * vars + v] = lookup.at(encode(tmp, order));
    }
  }

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (degree_[a] + degree_[b] > order) continue;
      auto ea = exponents(a);
      auto eb = exponents(b);
      for (int v = 0; v < vars; ++v) tmp[v] = ea[v] + eb[v];
      products_.push_back({static_cast<int>(a), static_cast<int>(b), lookup.at(encode(tmp, order))});
    }
  }
  std::stable_sort(products_.begin(), products_.end(), [this](const Product& x, const Product& y) {
    return degree_[x.c] < degree_[y.c];
  });
  product_end_.assign(order + 1, 0);
  for (int d = 0; d <= order; ++d) {
    product_end_[d] = std::partition_point(products_.begin(), products_.end(),
                                           [&](const Product& p) { return degree_[p.c] <= d; }) -
                      products_.begin();
  }
}

const MonomialBasis& MonomialBasis::get(int vars, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<MonomialBasis>> cache;
  if (vars < 1 || order < 0 || order > 8)
    throw Error(ErrorCode::order_unsupported, "monomial basis vars=" + std::to_string(vars) +
                                                  " order=" + std::to_string(order));
  std::lock_guard lock(mutex);
  auto& slot = cache[{vars, order}];
  if (!slot) slot.reset(new MonomialBasis(vars, order));
  return *slot;
}

int MonomialBasis::index(std::span<const int> exps) const {
  const int d = std::accumulate(exps.begin(), exps.end(), 0);
  if (d > order_) return -1;
  auto it = lookup_.find(encode(exps, order_));
  return it == lookup_.end() ? -1 : it->second;
}

Taylor::Taylor(const MonomialBasis& basis, int order, double constant)
    : basis_(&basis), order_(order), c_(basis.size(order), 0.0) {
  if (order > basis.order()) throw Error(ErrorCode::order_unsupported, "taylor order exceeds basis");
  c_[0] = constant;
}

Taylor Taylor::variable(const MonomialBasis& basis, int order, int var, double value) {
  Taylor t(basis, order, value);
  if (order >= 1) t.c_[1 + var] = 1.0;
  return t;
}

double Taylor::partial(std::span<const int> exps) const {
  const int idx = basis_->index(exps);
  if (idx < 0 || static_cast<std::size_t>(idx) >= c_.size())
    throw Error(ErrorCode::insufficient_jet_order, "partial beyond taylor order");
  return c_[idx] * basis_->factorial(idx);
}

Taylor Taylor::derivative(int var) const {
  if (order_ < 1) throw Error(ErrorCode::insufficient_jet_order, "derivative of order-0 taylor");
  Taylor out(*basis_, order_ - 1);
  for (std::size_t i = 0; i < out.c_.size(); ++i) {
    const int up = basis_->raised(i, var);
    out.c_[i] = (basis_->exponents(i)[var] + 1) * c_[up];
  }
  return out;
}

Taylor Taylor::truncated(int order) const {
  if (order >= order_) return *this;
  Taylor out = *this;
  out.order_ = order;
  out.c_.resize(basis_->size(order));
  return out;
}

bool Taylor::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](double v) { return v == 0.0; });
}

Taylor& Taylor::operator+=(const Taylor& rhs) {
  if (rhs.order_ < order_) {
    order_ = rhs.order_;
    c_.resize(rhs.c_.size());
  }
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
  return *this;
}

Taylor& Taylor::operator-=(const Taylor& rhs) {
  if (rhs.order_ < order_) {
    order_ = rhs.order_;
    c_.resize(rhs.c_.size());
  }
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= rhs.c_[i];
  return *this;
}

Taylor& Taylor::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

void Taylor::add_product(const Taylor& a, const Taylor& b, double scale) {
  const int k = std::min({order_, a.order_, b.order_});
  if (k < order_) {
    order_ = k;
    c_.resize(basis_->size(k));
  }
  if (a.is_zero() || b.is_zero()) return;
  for (const auto& p : basis_->products(k)) c_[p.c] += scale * a.c_[p.a] * b.c_[p.b];
}

Taylor operator*(const Taylor& a, const Taylor& b) {
  Taylor out(*a.basis_, std::min(a.order_, b.order_));
  out.add_product(a, b);
  return out;
}

Taylor compose(const Taylor& u, std::span<const double> derivs) {
  const int k = u.order();
  Taylor result(u.basis(), k, derivs[0]);
  if (k == 0) return result;
  Taylor delta = u;
  delta.c_[0] = 0.0;
  Taylor power = delta;
  double fact = 1.0;
  for (int j = 1; j <= k; ++j) {
    fact *= j;
    if (derivs[j] != 0.0) {
      const double s = derivs[j] / fact;
      for (std::size_t i = 0; i < result.c_.size(); ++i) result.c_[i] += s * power.c_[i];
    }
    if (j < k) power = power * delta;
  }
  return result;
}

Taylor reciprocal(const Taylor& u) {
  const double x = u.constant();
  if (x == 0.0) throw Error(ErrorCode::invalid_params, "taylor reciprocal of zero");
  std::array<double, 9> d{};
  double v = 1.0 / x;
  for (int k = 0; k <= u.order(); ++k) {
    d[k] = v;
    v *= -(k + 1) / x;
  }
  return compose(u, d);
}

Taylor operator/(const Taylor& a, const Taylor& b) { return a * reciprocal(b); }

Taylor operator/(double s, const Taylor& u) { return reciprocal(u) *= s; }

Taylor square(const Taylor& u) { return u * u; }

Taylor exp(const Taylor& u) {
  std::array<double, 9> d{};
  d.fill(std::exp(u.constant()));
  return compose(u, d);
}

Taylor log(const Taylor& u) {
  const double x = u.constant();
  if (x <= 0.0) throw Error(ErrorCode::invalid_params, "taylor log of non-positive value");
  std::array<double, 9> d{};
  d[0] = std::log(x);
  double v = 1.0 / x;
  for (int k = 1; k <= u.order(); ++k) {
    d[k] = v;
    v *= -k / x;
  }
  return compose(u, d);
}

Taylor pow(const Taylor& u, double p) {
  const double x = u.constant();
  std::array<double, 9> d{};
  double coeff = 1.0;
  for (int k = 0; k <= u.order(); ++k) {
    d[k] = coeff * std::pow(x, p - k);
    coeff *= (p - k);
  }
  return compose(u, d);
}

Taylor sqrt(const Taylor& u) { return pow(u, 0.5); }

Taylor sin(const Taylor& u) {
  const double s = std::sin(u.constant());
  const double c = std::cos(u.constant());
  const std::array<double, 4> cycle{s, c, -s, -c};
  std::array<double, 9> d{};
  for (int k = 0; k <= u.order(); ++k) d[k] = cycle[k % 4];
  return compose(u, d);
}

Taylor cos(const Taylor& u) {
  const double s = std::sin(u.constant());
  const double c = std::cos(u.constant());
  const std::array<double, 4> cycle{c, -s, -c, s};
  std::array<double, 9> d{};
  for (int k = 0; k <= u.order(); ++k) d[k] = cycle[k % 4];
  return compose(u, d);
}

}  // namespace soliton
