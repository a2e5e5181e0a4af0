#include "shimura/core/matrix.hpp"

#include <sstream>

namespace shimura {

QMatrix to_rational(const IntMatrix &m) {
  QMatrix q(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) q(i, j) = Rational(m(i, j));
  return q;
}

CMatrix to_gaussian(const QMatrix &m) {
  CMatrix c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = GaussianRational(m(i, j));
  return c;
}

CMatrix make_complex(const QMatrix &re, const QMatrix &im) {
  if (re.rows() != im.rows() || re.cols() != im.cols()) throw shape_error("make_complex shape");
  CMatrix c(re.rows(), re.cols());
  for (std::size_t i = 0; i < re.rows(); ++i)
    for (std::size_t j = 0; j < re.cols(); ++j) c(i, j) = GaussianRational(re(i, j), im(i, j));
  return c;
}

QMatrix real_part(const CMatrix &m) {
  QMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).re;
  return r;
}

QMatrix imag_part(const CMatrix &m) {
  QMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).im;
  return r;
}

CMatrix conj(const CMatrix &m) {
  CMatrix c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = m(i, j).conj();
  return c;
}

CMatrix adjoint(const CMatrix &m) { return conj(m).transpose(); }

IntMatrix to_integer(const QMatrix &m) {
  IntMatrix z(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!is_integer(m(i, j))) throw domain_error("non-integral entry " + to_string(m(i, j)));
      z(i, j) = m(i, j).get_num();
    }
  return z;
}

QMatrix realify(const CMatrix &m) {
  QMatrix r(2 * m.rows(), 2 * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto &z = m(i, j);
      r(2 * i, 2 * j) = z.re;
      r(2 * i, 2 * j + 1) = -z.im;
      r(2 * i + 1, 2 * j) = z.im;
      r(2 * i + 1, 2 * j + 1) = z.re;
    }
  return r;
}

Integer common_denominator(const QMatrix &m) {
  Integer l = 1;
  for (const auto &x : m.entries()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

// --- field elimination -------------------------------------------------------

template <class T> RowEchelon<T> rref(Matrix<T> m) {
  RowEchelon<T> out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && is_zero(m(piv, c))) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    T inv = T(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      T f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

template <class T> std::size_t rank(const Matrix<T> &m) { return rref(m).pivots.size(); }

template <class T> Matrix<T> nullspace(const Matrix<T> &m) {
  auto e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free.push_back(c);
  Matrix<T> basis(m.cols(), free.size());
  for (std::size_t k = 0; k < free.size(); ++k) {
    basis(free[k], k) = T(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) basis(e.pivots[r], k) = -e.reduced(r, free[k]);
  }
  return basis;
}

template <class T> std::optional<Matrix<T>> solve(const Matrix<T> &a, const Matrix<T> &b) {
  if (a.rows() != b.rows()) throw shape_error("solve: row mismatch");
  auto e = rref(hcat(a, b));
  Matrix<T> x(a.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    std::size_t c = e.pivots[r];
    if (c >= a.cols()) return std::nullopt; // pivot in the augmented part
    for (std::size_t j = 0; j < b.cols(); ++j) x(c, j) = e.reduced(r, a.cols() + j);
  }
  return x;
}

namespace {

// Bareiss elimination with row pivoting on an n x m working matrix whose left
// n x n block is eliminated. Returns the sign-adjusted determinant of that
// block; the right block is transformed alongside. Exact division only.
template <class T> T bareiss(Matrix<T> &w, std::size_t n, bool &singular) {
  T prev(1);
  int sign = 1;
  singular = false;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && is_zero(w(piv, k))) ++piv;
    if (piv == n) {
      singular = true;
      return T(0);
    }
    if (piv != k) {
      for (std::size_t j = 0; j < w.cols(); ++j) std::swap(w(piv, j), w(k, j));
      sign = -sign;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      for (std::size_t j = 0; j < w.cols(); ++j) {
        if (j == k) continue;
        w(i, j) = (w(k, k) * w(i, j) - w(i, k) * w(k, j)) / prev;
      }
      w(i, k) = T(0);
    }
    prev = w(k, k);
  }
  T det = w(n - 1, n - 1);
  if (sign < 0) det = -det;
  return det;
}

Integer exact_div(const Integer &a, const Integer &b) {
  Integer q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Integer fraction-free Gauss-Jordan on [A | B]. On return the left block is
// det(PA) * I, P the accumulated row swaps, and the right block is
// det(PA) * A^{-1} * B.
Integer bareiss_jordan(IntMatrix &w, std::size_t n, bool &singular) {
  Integer prev = 1;
  int sign = 1;
  singular = false;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && w(piv, k) == 0) ++piv;
    if (piv == n) {
      singular = true;
      return 0;
    }
    if (piv != k) {
      for (std::size_t j = 0; j < w.cols(); ++j) std::swap(w(piv, j), w(k, j));
      sign = -sign;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      for (std::size_t j = 0; j < w.cols(); ++j) {
        if (j == k) continue;
        w(i, j) = exact_div(w(k, k) * w(i, j) - w(i, k) * w(k, j), prev);
      }
      w(i, k) = 0;
    }
    prev = w(k, k);
  }
  Integer det = w(n - 1, n - 1);
  if (sign < 0) det = -det;
  return det;
}

} // namespace

Integer determinant(const IntMatrix &m) {
  if (!m.square()) throw shape_error("determinant of non-square matrix");
  if (m.rows() == 0) return 1;
  IntMatrix w = m;
  bool singular = false;
  Integer d = bareiss_jordan(w, m.rows(), singular);
  return singular ? Integer(0) : d;
}

template <class T> T determinant(const Matrix<T> &m) {
  if (!m.square()) throw shape_error("determinant of non-square matrix");
  if (m.rows() == 0) return T(1);
  Matrix<T> w = m;
  bool singular = false;
  T d = bareiss(w, m.rows(), singular);
  return singular ? T(0) : d;
}

template <> Rational determinant(const QMatrix &m) {
  if (!m.square()) throw shape_error("determinant of non-square matrix");
  Integer den = common_denominator(m);
  IntMatrix z = to_integer(m * Rational(den));
  Integer scale = 1;
  mpz_pow_ui(scale.get_mpz_t(), den.get_mpz_t(), m.rows());
  return make_rational(determinant(z), scale);
}

template <> QMatrix inverse(const QMatrix &m) {
  if (!m.square()) throw shape_error("inverse of non-square matrix");
  const std::size_t n = m.rows();
  Integer den = common_denominator(m);
  IntMatrix w(n, 2 * n);
  IntMatrix z = to_integer(m * Rational(den));
  w.set_block(0, 0, z);
  for (std::size_t i = 0; i < n; ++i) w(i, n + i) = 1;
  bool singular = false;
  Integer det = n ? bareiss_jordan(w, n, singular) : Integer(1);
  if (singular) throw degeneracy_error("matrix is singular");
  QMatrix inv(n, n);
  Integer diag = w(0, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = make_rational(w(i, n + j) * den, diag);
  return inv;
}

template <class T> Matrix<T> inverse(const Matrix<T> &m) {
  if (!m.square()) throw shape_error("inverse of non-square matrix");
  const std::size_t n = m.rows();
  // Gauss-Jordan; for Q(i) entries the coefficient growth is modest at the
  // sizes used here.
  auto e = rref(hcat(m, Matrix<T>::identity(n)));
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw degeneracy_error("matrix is singular");
  return e.reduced.block(0, n, n, n);
}

std::vector<Rational> leading_minors(const QMatrix &m) {
  if (!m.square()) throw shape_error("leading minors of non-square matrix");
  const std::size_t n = m.rows();
  Integer den = common_denominator(m);
  IntMatrix w = to_integer(m * Rational(den));
  std::vector<Rational> minors;
  Integer prev = 1;
  Integer scale = 1;
  // Bareiss without pivoting: after step k the (k,k) entry equals the k-th
  // leading principal minor of the integer matrix.
  for (std::size_t k = 0; k < n; ++k) {
    scale *= den;
    minors.push_back(make_rational(w(k, k), scale));
    if (w(k, k) == 0) {
      // later minors are computed directly
      for (std::size_t r = k + 1; r < n; ++r) {
        scale *= den;
        minors.push_back(make_rational(determinant(to_integer(m.block(0, 0, r + 1, r + 1) * Rational(den))), scale));
      }
      return minors;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        w(i, j) = exact_div(w(k, k) * w(i, j) - w(i, k) * w(k, j), prev);
      w(i, k) = 0;
    }
    prev = w(k, k);
  }
  return minors;
}

bool is_positive_definite(const QMatrix &m) {
  if (!m.square()) throw shape_error("positive definiteness needs a square matrix");
  if (!m.is_symmetric()) throw shape_error("positive definiteness needs a symmetric matrix");
  Integer den = common_denominator(m);
  IntMatrix w = to_integer(m * Rational(den));
  Integer prev = 1;
  const std::size_t n = m.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (w(k, k) <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        w(i, j) = exact_div(w(k, k) * w(i, j) - w(i, k) * w(k, j), prev);
      w(i, k) = 0;
    }
    prev = w(k, k);
  }
  return true;
}

bool is_positive_definite(const CMatrix &m) {
  if (!m.square()) throw shape_error("positive definiteness needs a square matrix");
  if (!(m == adjoint(m))) throw shape_error("positive definiteness needs a Hermitian matrix");
  return is_positive_definite(realify(m));
}

namespace {
std::string to_string(const Integer &z) { return z.get_str(); }
using shimura::to_string;

template <class M> std::string matrix_string(const M &m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << to_string(m(i, j));
    os << "]";
  }
  os << "]";
  return os.str();
}
} // namespace

std::string to_string(const QMatrix &m) { return matrix_string(m); }
std::string to_string(const CMatrix &m) { return matrix_string(m); }
std::string to_string(const IntMatrix &m) { return matrix_string(m); }

template RowEchelon<Rational> rref(QMatrix);
template RowEchelon<GaussianRational> rref(CMatrix);
template std::size_t rank(const QMatrix &);
template std::size_t rank(const CMatrix &);
template QMatrix nullspace(const QMatrix &);
template CMatrix nullspace(const CMatrix &);
template std::optional<QMatrix> solve(const QMatrix &, const QMatrix &);
template std::optional<CMatrix> solve(const CMatrix &, const CMatrix &);
template GaussianRational determinant(const CMatrix &);
template CMatrix inverse(const CMatrix &);

} // namespace shimura
