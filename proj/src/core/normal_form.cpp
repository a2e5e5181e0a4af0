#include "shimura/core/normal_form.hpp"

#include <utility>

namespace shimura {

Integer xgcd(const Integer &a, const Integer &b, Integer &x, Integer &y) {
  Integer g;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

namespace {

void swap_rows(IntMatrix &m, std::size_t a, std::size_t b) {
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(IntMatrix &m, std::size_t a, std::size_t b) {
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// rows (r, s) <- [[x, y], [-b/g, a/g]] (r, s): determinant one
void combine_rows(IntMatrix &m, std::size_t r, std::size_t s, const Integer &x, const Integer &y,
                  const Integer &p, const Integer &q) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Integer mr = m(r, j), ms = m(s, j);
    m(r, j) = x * mr + y * ms;
    m(s, j) = p * mr + q * ms;
  }
}
void combine_cols(IntMatrix &m, std::size_t r, std::size_t s, const Integer &x, const Integer &y,
                  const Integer &p, const Integer &q) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer mr = m(i, r), ms = m(i, s);
    m(i, r) = x * mr + y * ms;
    m(i, s) = p * mr + q * ms;
  }
}

Integer fdiv(const Integer &a, const Integer &b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Echelon reduction of h in place, mirrored on u. Returns the pivot columns.
std::vector<std::size_t> echelonize(IntMatrix &h, IntMatrix &u) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    // gcd-combine every lower row into row r
    for (std::size_t i = r + 1; i < h.rows(); ++i) {
      if (h(i, c) == 0) continue;
      if (h(r, c) == 0) {
        swap_rows(h, r, i);
        swap_rows(u, r, i);
        continue;
      }
      Integer a = h(r, c), b = h(i, c), x, y;
      Integer g = xgcd(a, b, x, y);
      Integer p = -b / g, q = a / g;
      combine_rows(h, r, i, x, y, p, q);
      combine_rows(u, r, i, x, y, p, q);
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      for (std::size_t j = 0; j < h.cols(); ++j) h(r, j) = -h(r, j);
      for (std::size_t j = 0; j < u.cols(); ++j) u(r, j) = -u(r, j);
    }
    // reduce the rows above into [0, pivot)
    for (std::size_t i = 0; i < r; ++i) {
      Integer f = fdiv(h(i, c), h(r, c));
      if (f == 0) continue;
      for (std::size_t j = 0; j < h.cols(); ++j) h(i, j) -= f * h(r, j);
      for (std::size_t j = 0; j < u.cols(); ++j) u(i, j) -= f * u(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

} // namespace

HermiteResult hermite_normal_form(const IntMatrix &m) {
  HermiteResult out{m, IntMatrix::identity(m.rows())};
  auto pivots = echelonize(out.h, out.u);
  if (pivots.size() != m.rows()) throw rank_error("hermite_normal_form needs full row rank");
  return out;
}

IntMatrix row_lattice_hnf(const IntMatrix &m) {
  IntMatrix h = m;
  IntMatrix u = IntMatrix::identity(m.rows());
  auto pivots = echelonize(h, u);
  return h.block(0, 0, pivots.size(), h.cols());
}

IntMatrix column_lattice_hnf(const IntMatrix &m) { return row_lattice_hnf(m.transpose()).transpose(); }

SmithResult smith_normal_form(const IntMatrix &m) {
  SmithResult s{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.cols())};
  IntMatrix &d = s.d;
  const std::size_t n = std::min(d.rows(), d.cols());
  for (std::size_t t = 0; t < n; ++t) {
    // bring a nonzero entry to (t, t)
    bool found = false;
    for (std::size_t i = t; i < d.rows() && !found; ++i)
      for (std::size_t j = t; j < d.cols() && !found; ++j)
        if (d(i, j) != 0) {
          swap_rows(d, t, i);
          swap_rows(s.u, t, i);
          swap_cols(d, t, j);
          swap_cols(s.v, t, j);
          found = true;
        }
    if (!found) break;
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < d.rows(); ++i) {
        if (d(i, t) == 0) continue;
        Integer a = d(t, t), b = d(i, t), x = 1, y = 0;
        // plain elimination when the pivot divides, so |pivot| strictly drops otherwise
        Integer g = b % a == 0 ? Integer(abs(a)) : xgcd(a, b, x, y);
        if (b % a == 0 && a < 0) x = -1;
        combine_rows(d, t, i, x, y, -b / g, a / g);
        combine_rows(s.u, t, i, x, y, -b / g, a / g);
      }
      for (std::size_t j = t + 1; j < d.cols(); ++j) {
        if (d(t, j) == 0) continue;
        Integer a = d(t, t), b = d(t, j), x = 1, y = 0;
        Integer g = b % a == 0 ? Integer(abs(a)) : xgcd(a, b, x, y);
        if (b % a == 0 && a < 0) x = -1;
        combine_cols(d, t, j, x, y, -b / g, a / g);
        combine_cols(s.v, t, j, x, y, -b / g, a / g);
        clean = false;
      }
      if (!clean) continue;
      // divisibility: d(t,t) must divide the remaining block
      bool divides = true;
      for (std::size_t i = t + 1; i < d.rows() && divides; ++i)
        for (std::size_t j = t + 1; j < d.cols(); ++j)
          if (d(i, j) % d(t, t) != 0) {
            for (std::size_t k = 0; k < d.cols(); ++k) d(t, k) += d(i, k);
            for (std::size_t k = 0; k < s.u.cols(); ++k) s.u(t, k) += s.u(i, k);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d(t, t) < 0) {
      for (std::size_t k = 0; k < d.cols(); ++k) d(t, k) = -d(t, k);
      for (std::size_t k = 0; k < s.u.cols(); ++k) s.u(t, k) = -s.u(t, k);
    }
  }
  return s;
}

std::vector<Integer> elementary_divisors(const IntMatrix &m) {
  auto s = smith_normal_form(m);
  std::vector<Integer> out;
  for (std::size_t t = 0; t < std::min(m.rows(), m.cols()); ++t)
    if (s.d(t, t) != 0) out.push_back(s.d(t, t));
  return out;
}

} // namespace shimura
