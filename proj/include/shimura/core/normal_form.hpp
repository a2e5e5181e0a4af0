#pragma once

#include "shimura/core/matrix.hpp"

#include <vector>

namespace shimura {

struct HermiteResult {
  IntMatrix h; // row Hermite normal form
  IntMatrix u; // unimodular transform, h = u * m
};

/// Row Hermite normal form of a full-row-rank integer matrix: pivot columns
/// strictly increase, pivots are positive and entries above a pivot lie in
/// [0, pivot). Throws rank_error on rank-deficient input.
HermiteResult hermite_normal_form(const IntMatrix &m);

/// HNF of the row lattice generated by the rows of m (any rank); zero rows are
/// dropped, so the result has rank(m) rows.
IntMatrix row_lattice_hnf(const IntMatrix &m);

/// Canonical basis (as columns) of the lattice spanned by the columns of m.
IntMatrix column_lattice_hnf(const IntMatrix &m);

struct SmithResult {
  IntMatrix d; // diagonal, d_1 | d_2 | ... , nonnegative
  IntMatrix u; // unimodular, d = u * m * v
  IntMatrix v; // unimodular
};

SmithResult smith_normal_form(const IntMatrix &m);

/// Nonzero diagonal of the Smith form, sorted by divisibility.
std::vector<Integer> elementary_divisors(const IntMatrix &m);

/// Extended gcd: g = a*x + b*y with g >= 0.
Integer xgcd(const Integer &a, const Integer &b, Integer &x, Integer &y);

} // namespace shimura
