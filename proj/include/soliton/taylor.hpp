#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

namespace soliton {

/// Monomials in `vars` variables of total degree <= `order`, in graded order,
/// so that every lower-degree truncation is a prefix of the full list.
class MonomialBasis {
 public:
  struct Product {
    int a;
    int b;
    int c;
  };

  /// Shared, immutable basis. Thread-safe; instances live for the program lifetime.
  static const MonomialBasis& get(int vars, int order);

  int vars() const noexcept { return vars_; }
  int order() const noexcept { return order_; }

  /// Number of monomials of degree <= `degree`.
  std::size_t size(int degree) const { return prefix_[degree + 1]; }
  std::size_t size() const { return size(order_); }

  std::span<const int> exponents(std::size_t idx) const {
    return {exps_.data() + idx * vars_, static_cast<std::size_t>(vars_)};
  }
  int degree(std::size_t idx) const { return degree_[idx]; }
  double factorial(std::size_t idx) const { return factorial_[idx]; }

  /// Index of the monomial with the given exponents; -1 when its degree exceeds the order.
  int index(std::span<const int> exps) const;

  /// Index of x^e * x_var, or -1 when that exceeds the order.
  int raised(std::size_t idx, int var) const { return raised_[idx * vars_ + var]; }

  /// Index pairs (a, b) -> c with deg a + deg b = deg c <= max_degree.
  std::span<const Product> products(int max_degree) const {
    return {products_.data(), product_end_[max_degree]};
  }

 private:
  MonomialBasis(int vars, int order);

  int vars_;
  int order_;
  std::vector<int> exps_;
  std::vector<int> degree_;
  std::vector<double> factorial_;
  std::vector<std::size_t> prefix_;
  std::vector<int> raised_;
  std::vector<Product> products_;
  std::vector<std::size_t> product_end_;
  std::unordered_map<long, int> lookup_;
};

/// Truncated multivariate Taylor polynomial about a point: the coefficient of
/// t^e is the partial derivative d^e / e!. Arithmetic truncates to the lower
/// order of the operands.
class Taylor {
 public:
  Taylor() = default;
  Taylor(const MonomialBasis& basis, int order, double constant = 0.0);

  /// The coordinate function x_var = value + t_var.
  static Taylor variable(const MonomialBasis& basis, int order, int var, double value);

  bool valid() const noexcept { return basis_ != nullptr; }
  const MonomialBasis& basis() const { return *basis_; }
  int order() const noexcept { return order_; }
  int vars() const { return basis_->vars(); }

  double constant() const { return c_[0]; }
  double coeff(std::size_t idx) const { return c_[idx]; }
  double& coeff(std::size_t idx) { return c_[idx]; }
  std::span<const double> coeffs() const { return c_; }

  /// Partial derivative at the expansion point for the given exponent vector.
  double partial(std::span<const int> exps) const;

  /// Exact partial derivative d/dx_var; the result has order one lower.
  Taylor derivative(int var) const;
  Taylor truncated(int order) const;
  bool is_zero() const;

  Taylor& operator+=(const Taylor& rhs);
  Taylor& operator-=(const Taylor& rhs);
  Taylor& operator+=(double s) {
    c_[0] += s;
    return *this;
  }
  Taylor& operator-=(double s) {
    c_[0] -= s;
    return *this;
  }
  Taylor& operator*=(double s);

  /// this += a * b, truncated to this->order().
  void add_product(const Taylor& a, const Taylor& b, double scale = 1.0);

  friend Taylor operator*(const Taylor& a, const Taylor& b);
  friend Taylor compose(const Taylor& u, std::span<const double> derivs);

 private:
  const MonomialBasis* basis_ = nullptr;
  int order_ = -1;
  std::vector<double> c_;
};

inline Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
inline Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
inline Taylor operator+(Taylor a, double s) { return a += s; }
inline Taylor operator+(double s, Taylor a) { return a += s; }
inline Taylor operator-(Taylor a, double s) { return a -= s; }
inline Taylor operator-(double s, const Taylor& a) {
  Taylor r = a;
  r *= -1.0;
  return r += s;
}
inline Taylor operator*(Taylor a, double s) { return a *= s; }
inline Taylor operator*(double s, Taylor a) { return a *= s; }
inline Taylor operator-(Taylor a) { return a *= -1.0; }

/// F(u) given F^(k)(u.constant()) for k = 0..u.order().
Taylor compose(const Taylor& u, std::span<const double> derivs);

Taylor reciprocal(const Taylor& u);
Taylor operator/(const Taylor& a, const Taylor& b);
inline Taylor operator/(Taylor a, double s) { return a *= 1.0 / s; }
Taylor operator/(double s, const Taylor& u);
Taylor square(const Taylor& u);
Taylor exp(const Taylor& u);
Taylor log(const Taylor& u);
Taylor sqrt(const Taylor& u);
Taylor pow(const Taylor& u, double p);
Taylor sin(const Taylor& u);
Taylor cos(const Taylor& u);

}  // namespace soliton
