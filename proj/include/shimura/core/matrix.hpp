#pragma once

#include "shimura/core/errors.hpp"
#include "shimura/core/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace shimura {

/// Dense row-major matrix with exact entries. Arithmetic never rounds; the
/// element type decides the ring (Integer, Rational, GaussianRational,
/// int64 residues handled by the mod-n helpers).
template <class T> class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) throw shape_error("entry count differs from rows*cols");
  }
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto &r : rows) {
      if (r.size() != cols_) throw shape_error("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<T> &entries() const { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw shape_error("block out of range");
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix &b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw shape_error("block out of range");
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Matrix column(std::size_t j) const { return block(0, j, rows_, 1); }

  Matrix &operator+=(const Matrix &o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix &operator-=(const Matrix &o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix &operator*=(const T &s) {
    for (auto &x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
  friend Matrix operator-(Matrix a) {
    for (auto &x : a.data_) x = -x;
    return a;
  }
  friend Matrix operator*(Matrix a, const T &s) { return a *= s; }
  friend Matrix operator*(const T &s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.cols_ != b.rows_) throw shape_error("product of incompatible shapes");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T &aik = a(i, k);
        if (aik == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend bool operator==(const Matrix &a, const Matrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T &x) { return x == T(0); });
  }
  bool is_symmetric() const { return square() && *this == transpose(); }

  /// Horizontal concatenation [A | B].
  friend Matrix hcat(const Matrix &a, const Matrix &b) {
    if (a.rows_ != b.rows_) throw shape_error("hcat row mismatch");
    Matrix c(a.rows_, a.cols_ + b.cols_);
    c.set_block(0, 0, a);
    c.set_block(0, a.cols_, b);
    return c;
  }
  /// Vertical concatenation [A ; B].
  friend Matrix vcat(const Matrix &a, const Matrix &b) {
    if (a.cols_ != b.cols_) throw shape_error("vcat column mismatch");
    Matrix c(a.rows_ + b.rows_, a.cols_);
    c.set_block(0, 0, a);
    c.set_block(a.rows_, 0, b);
    return c;
  }

private:
  void check_same(const Matrix &o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw shape_error("shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using QMatrix = Matrix<Rational>;
using CMatrix = Matrix<GaussianRational>;

inline bool is_zero(const Integer &x) { return sgn(x) == 0; }
inline bool is_zero(const Rational &x) { return sgn(x) == 0; }
inline bool is_zero(const GaussianRational &x) { return x.is_zero(); }

// --- conversions ---------------------------------------------------------

QMatrix to_rational(const IntMatrix &m);
CMatrix to_gaussian(const QMatrix &m);
CMatrix make_complex(const QMatrix &re, const QMatrix &im);
QMatrix real_part(const CMatrix &m);
QMatrix imag_part(const CMatrix &m);
CMatrix conj(const CMatrix &m);
/// Conjugate transpose.
CMatrix adjoint(const CMatrix &m);
/// Throws domain_error if an entry is not an integer.
IntMatrix to_integer(const QMatrix &m);
/// Realification z = a+ib -> [[a, -b], [b, a]] blockwise (2n x 2n).
QMatrix realify(const CMatrix &m);
/// Least common denominator of all entries.
Integer common_denominator(const QMatrix &m);

// --- field linear algebra (Rational, GaussianRational) ----------------------

template <class T> struct RowEchelon {
  Matrix<T> reduced;               // reduced row echelon form
  std::vector<std::size_t> pivots; // pivot column of each nonzero row
};

template <class T> RowEchelon<T> rref(Matrix<T> m);
template <class T> std::size_t rank(const Matrix<T> &m);
/// Basis of the right kernel {x : m x = 0}, as columns.
template <class T> Matrix<T> nullspace(const Matrix<T> &m);
/// One solution X of A X = B, or nullopt if the system is inconsistent.
template <class T> std::optional<Matrix<T>> solve(const Matrix<T> &a, const Matrix<T> &b);
/// Fraction-free (Bareiss) determinant.
template <class T> T determinant(const Matrix<T> &m);
/// Inverse via fraction-free Bareiss elimination; throws degeneracy_error
/// when singular.
template <class T> Matrix<T> inverse(const Matrix<T> &m);

template <> Rational determinant(const QMatrix &m);
template <> QMatrix inverse(const QMatrix &m);
Integer determinant(const IntMatrix &m);

/// Sylvester criterion: all leading principal minors strictly positive.
/// Throws shape_error for non-square or non-symmetric input.
bool is_positive_definite(const QMatrix &m);
/// Hermitian positive definiteness through the real symmetric realification.
bool is_positive_definite(const CMatrix &m);

/// Leading principal minors d_1..d_n (exact).
std::vector<Rational> leading_minors(const QMatrix &m);

// --- structured matrices ----------------------------------------------------

/// The 2d x 2d Gram matrix [[0, I_d], [-I_d, 0]] of the standard symplectic
/// form sum x_i y'_i - sum x'_i y_i. Throws domain_error for d = 0.
template <class T = Rational> Matrix<T> symplectic_gram(std::size_t d) {
  if (d == 0) throw domain_error("symplectic_gram needs d >= 1");
  Matrix<T> m(2 * d, 2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    m(i, d + i) = T(1);
    m(d + i, i) = T(-1);
  }
  return m;
}

std::string to_string(const QMatrix &m);
std::string to_string(const CMatrix &m);
std::string to_string(const IntMatrix &m);

} // namespace shimura
