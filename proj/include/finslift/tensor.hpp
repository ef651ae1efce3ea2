#pragma once

// Dense coefficient arrays with row-major storage. Index order follows the
// usual display: upper indices first, then lower indices, derivative indices
// last.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace finslift {

template <class T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape, const T& fill = T()) : shape_(std::move(shape)) {
    std::size_t n = 1;
    for (int d : shape_) {
      if (d < 0) throw std::invalid_argument("negative tensor extent");
      n *= static_cast<std::size_t>(d);
    }
    data_.assign(n, fill);
  }

  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  template <class... I>
  T& operator()(I... idx) {
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    return data_[offset({static_cast<int>(idx)...})];
  }

  T& at(const std::vector<int>& idx) { return data_[offset_of(idx)]; }
  const T& at(const std::vector<int>& idx) const { return data_[offset_of(idx)]; }

  // Multi-index of flat position k.
  std::vector<int> unravel(std::size_t k) const {
    std::vector<int> idx(shape_.size());
    for (std::size_t i = shape_.size(); i-- > 0;) {
      const auto d = static_cast<std::size_t>(shape_[i]);
      idx[i] = static_cast<int>(k % d);
      k /= d;
    }
    return idx;
  }

  template <class F>
  auto map(F&& f) const -> Tensor<decltype(f(std::declval<const T&>()))> {
    Tensor<decltype(f(std::declval<const T&>()))> r(shape_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data()[k] = f(data_[k]);
    return r;
  }

 private:
  std::size_t offset(std::initializer_list<int> idx) const {
    if (idx.size() != shape_.size()) throw std::out_of_range("tensor rank mismatch");
    std::size_t off = 0;
    std::size_t i = 0;
    for (int v : idx) {
      if (v < 0 || v >= shape_[i]) throw std::out_of_range("tensor index out of range");
      off = off * static_cast<std::size_t>(shape_[i]) + static_cast<std::size_t>(v);
      ++i;
    }
    return off;
  }
  std::size_t offset_of(const std::vector<int>& idx) const {
    if (idx.size() != shape_.size()) throw std::out_of_range("tensor rank mismatch");
    std::size_t off = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] < 0 || idx[i] >= shape_[i]) throw std::out_of_range("tensor index out of range");
      off = off * static_cast<std::size_t>(shape_[i]) + static_cast<std::size_t>(idx[i]);
    }
    return off;
  }

  std::vector<int> shape_;
  std::vector<T> data_;
};

using Array = Tensor<double>;

inline double max_abs(const Array& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

inline Array operator-(const Array& a, const Array& b) {
  if (a.shape() != b.shape()) throw std::invalid_argument("shape mismatch in difference");
  Array r = a;
  for (std::size_t k = 0; k < r.size(); ++k) r.data()[k] -= b.data()[k];
  return r;
}

inline Array operator+(const Array& a, const Array& b) {
  if (a.shape() != b.shape()) throw std::invalid_argument("shape mismatch in sum");
  Array r = a;
  for (std::size_t k = 0; k < r.size(); ++k) r.data()[k] += b.data()[k];
  return r;
}

}  // namespace finslift
