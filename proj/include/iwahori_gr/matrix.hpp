#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

namespace iwahori_gr {

/// Small dense square-or-rectangular matrix over a commutative ring whose
/// elements carry their own zero (e.g. int64 or TruncatedUnramified).
template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, const T& zero)
      : rows_(rows), cols_(cols), data_(rows * cols, zero), zero_(zero) {}

  static DenseMatrix identity(std::size_t n, const T& zero, const T& one) {
    DenseMatrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const T& zero() const { return zero_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix r(a.rows_, b.cols_, a.zero_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == a.zero_) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) = r(i, j) + aik * b(k, j);
      }
    return r;
  }
  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] = a.data_[i] + b.data_[i];
    return a;
  }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] = a.data_[i] - b.data_[i];
    return a;
  }
  DenseMatrix scaled(const T& c) const {
    DenseMatrix r = *this;
    for (auto& x : r.data_) x = x * c;
    return r;
  }
  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!(x == zero_)) return false;
    return true;
  }

  friend std::ostream& operator<<(std::ostream& os, const DenseMatrix& m) {
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? "\n" : "");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m(i, j);
    }
    return os;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
  T zero_{};
};

using IntDense = DenseMatrix<std::int64_t>;

inline IntDense int_identity(std::size_t n) { return IntDense::identity(n, 0, 1); }
inline IntDense elementary(std::size_t n, std::size_t i, std::size_t j) {
  IntDense m(n, n, 0);
  m(i, j) = 1;
  return m;
}
inline IntDense lie_bracket(const IntDense& a, const IntDense& b) { return a * b - b * a; }

}  // namespace iwahori_gr
