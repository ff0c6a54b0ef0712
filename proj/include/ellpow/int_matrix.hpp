#pragma once

// Dense integer matrices over arbitrary-precision integers.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellpow {

using BigInt = boost::multiprecision::cpp_int;

/// Narrow a BigInt to int64, throwing if it does not fit.
inline std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("integer does not fit in 64 bits: " + v.str());
  }
  return v.convert_to<std::int64_t>();
}

/// Floor division and non-negative remainder (Euclidean for positive divisors).
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  BigInt r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) q -= 1;
  return q;
}

inline BigInt mod_floor(const BigInt& a, const BigInt& b) { return a - floor_div(a, b) * b; }

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("IntMatrix: ragged initializer");
      for (long long v : r) data_.emplace_back(v);
    }
  }

  static IntMatrix identity(std::size_t d) {
    IntMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (rows[i].size() != m.cols_) throw std::invalid_argument("IntMatrix: ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<BigInt> row(std::size_t i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
  }

  std::vector<std::int64_t> row_int64(std::size_t i) const {
    std::vector<std::int64_t> out(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out[j] = to_int64((*this)(i, j));
    return out;
  }

  std::vector<std::vector<std::int64_t>> to_int64_rows() const {
    std::vector<std::vector<std::int64_t>> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row_int64(i));
    return out;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("IntMatrix: shape mismatch in product");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  /// Row-major lexicographic order on (rows, cols, entries).
  friend bool operator<(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
    if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
    return a.data_ < b.data_;
  }

  /// Determinant by fraction-free Bareiss elimination.
  BigInt det() const {
    if (!is_square()) throw std::invalid_argument("IntMatrix::det: matrix is not square");
    const std::size_t n = rows_;
    if (n == 0) return 1;
    IntMatrix m = *this;
    BigInt sign = 1;
    BigInt prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (m(k, k) == 0) {
        std::size_t p = k + 1;
        while (p < n && m(p, k) == 0) ++p;
        if (p == n) return 0;
        for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i)
        for (std::size_t j = k + 1; j < n; ++j)
          m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
  }

  /// Exact inverse of a unimodular matrix (det = ±1); throws otherwise.
  IntMatrix unimodular_inverse() const {
    const BigInt d = det();
    if (d != 1 && d != -1) throw std::invalid_argument("IntMatrix: matrix is not unimodular");
    const std::size_t n = rows_;
    IntMatrix adj(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        IntMatrix minor(n - 1, n - 1);
        for (std::size_t r = 0, mr = 0; r < n; ++r) {
          if (r == j) continue;
          for (std::size_t c = 0, mc = 0; c < n; ++c) {
            if (c == i) continue;
            minor(mr, mc++) = (*this)(r, c);
          }
          ++mr;
        }
        BigInt cof = n == 1 ? BigInt(1) : minor.det();
        if ((i + j) % 2 == 1) cof = -cof;
        adj(i, j) = cof * d;  // d = ±1 so dividing equals multiplying
      }
    return adj;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? ",[" : "[";
      for (std::size_t j = 0; j < cols_; ++j) s += (j ? "," : "") + (*this)(i, j).str();
      s += "]";
    }
    return s + "]";
  }

  friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) { return os << m.str(); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

}  // namespace ellpow
