#pragma once

#include "shimura/core/matrix.hpp"

#include <random>

namespace shimura::testing {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }

  Rational rational(long num_bound = 5, long den_bound = 4) {
    return make_rational(uniform(-num_bound, num_bound), uniform(1, den_bound));
  }

  GaussianRational gaussian(long num_bound = 5, long den_bound = 4) {
    return {rational(num_bound, den_bound), rational(num_bound, den_bound)};
  }

  QMatrix rational_matrix(std::size_t r, std::size_t c, long nb = 5, long db = 4) {
    QMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rational(nb, db);
    return m;
  }

  QMatrix symmetric_rational(std::size_t n, long nb = 5, long db = 4) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = rational(nb, db);
    return m;
  }

  /// A^T A + I/k: positive definite by construction.
  QMatrix positive_definite(std::size_t n) {
    QMatrix a = rational_matrix(n, n, 3, 3);
    QMatrix p = a.transpose() * a;
    for (std::size_t i = 0; i < n; ++i) p(i, i) += make_rational(1, uniform(1, 4));
    return p;
  }

  /// Random point of the Siegel upper half space with small entries.
  CMatrix siegel_point(std::size_t d) {
    return make_complex(symmetric_rational(d, 3, 3), positive_definite(d));
  }

  CMatrix symmetric_complex(std::size_t d) {
    return make_complex(symmetric_rational(d, 3, 3), symmetric_rational(d, 3, 3));
  }

  std::mt19937_64 &engine() { return eng_; }

private:
  std::mt19937_64 eng_;
};

} // namespace shimura::testing
