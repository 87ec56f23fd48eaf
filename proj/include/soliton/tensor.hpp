#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace soliton {

/// Rank-r array with every index running over 0..dim-1, stored row-major.
template <class T>
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, int rank, const T& fill = T{}) : dim_(dim), rank_(rank) {
    std::size_t size = 1;
    for (int i = 0; i < rank; ++i) size *= static_cast<std::size_t>(dim);
    data_.assign(size, fill);
  }

  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  template <class... I>
  T& operator()(I... idx) {
    return data_[flat(idx...)];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    return data_[flat(idx...)];
  }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  /// Decompose a flat index into its rank-many components.
  void unflatten(std::size_t flat_index, int* idx) const {
    for (int r = rank_ - 1; r >= 0; --r) {
      idx[r] = static_cast<int>(flat_index % dim_);
      flat_index /= dim_;
    }
  }

 private:
  template <class... I>
  std::size_t flat(I... idx) const {
    std::size_t f = 0;
    ((f = f * dim_ + static_cast<std::size_t>(idx)), ...);
    return f;
  }

  int dim_ = 0;
  int rank_ = 0;
  std::vector<T> data_;
};

using RealTensor = Tensor<double>;

inline double max_abs(const RealTensor& t) {
  double m = 0.0;
  for (double v : t.data()) m = std::fmax(m, std::fabs(v));
  return m;
}

inline double max_abs_difference(const RealTensor& a, const RealTensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
  return m;
}

/// Plain-text dump: one header line naming the index order, then the flat
/// row-major values, one per line, 17 significant digits.
void dump_tensor(std::ostream& out, const RealTensor& t, const std::string& index_order);

}  // namespace soliton
