#pragma once

#include "shimura/core/matrix.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace shimura::pel {

/// Order with Z-basis alpha_1..alpha_t: alpha_i alpha_j = sum_k mult[i][j][k] alpha_k,
/// alpha_j^* = sum_i involution(i, j) alpha_i.
struct FiniteAlgebra {
  std::size_t rank = 0;
  std::vector<std::vector<std::vector<Integer>>> mult;
  IntMatrix involution;

  /// Coordinates of x y.
  std::vector<Integer> multiply(const std::vector<Integer> &x, const std::vector<Integer> &y) const;
  std::vector<Integer> star(const std::vector<Integer> &x) const;
  /// Coordinates of the unit, if the table has one.
  std::optional<std::vector<Integer>> unit() const;
  /// Matrix of left multiplication by alpha_i.
  IntMatrix left_multiplication(std::size_t i) const;
  /// Regular trace Tr_{O/Z}.
  Integer trace(const std::vector<Integer> &x) const;
};

struct PELDatum {
  FiniteAlgebra algebra;
  std::vector<IntMatrix> actions; // action of alpha_j on Lambda = Z^{2N}
  IntMatrix pairing;              // <x, y> = x^T P y
  QMatrix h1, hi;                 // h(1), h(i) on Lambda (x) R
  bool type_d = false;

  std::size_t lattice_rank() const { return pairing.rows(); }
  /// Throws shape_error when the table, actions and matrices have inconsistent sizes.
  void check_shapes() const;
};

struct AxiomVerdict {
  std::string axiom;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<AxiomVerdict> verdicts;
  bool all_pass() const;
};

ValidationReport validate_pel(const PELDatum &d);

/// det of the trace form Tr(alpha_i alpha_j).
Integer discriminant(const FiniteAlgebra &a);

struct PrimeVerdict {
  bool good = true;
  std::vector<std::string> reasons;
};

PrimeVerdict good_prime(const PELDatum &d, const Integer &p);

enum class ReflexKind { Rational, ImaginaryQuadratic };

struct ReflexResult {
  std::vector<GaussianRational> traces; // Tr(alpha_j | V^{-1,0})
  ReflexKind kind = ReflexKind::Rational;
  Integer discriminant = 1; // of the reflex field; 1 for Q
};

/// Basis of V^{-1,0} = ker(h(i) - i) as columns; throws degeneracy_error
/// when its dimension is not N.
CMatrix hodge_subspace(const PELDatum &d);

ReflexResult reflex_traces(const PELDatum &d);

/// Polynomial in X_1..X_t: exponent vector -> coefficient.
using Polynomial = std::map<std::vector<unsigned>, GaussianRational>;

/// det(sum_j X_j alpha_j | V^{-1,0}).
Polynomial determinant_polynomial(const PELDatum &d);
GaussianRational evaluate(const Polynomial &f, const std::vector<GaussianRational> &x);
/// Every coefficient has denominators built from the bad primes only.
bool coefficients_integral_away_from(const Polynomial &f, const std::vector<Integer> &bad_primes);
/// Primes dividing disc(O) or det(P), plus 2 for type D.
std::vector<Integer> bad_primes(const PELDatum &d);

/// New basis alpha'_j = sum_i u(i, j) alpha_i with u unimodular.
PELDatum change_basis(const PELDatum &d, const IntMatrix &u);

// Packaged data.

/// O = Z, standard pairing on Z^2d, h(a+ib) = [[aI, -bI], [bI, aI]].
PELDatum siegel_datum(std::size_t d);
/// O = Z[i], eps = i, H = diag(I_p, -I_q), pairing Tr(eps H), h(z) = diag(z I_p, conj(z) I_q).
PELDatum unitary_datum(std::size_t p, std::size_t q);
/// Lipschitz quaternions, Lambda = O^2n, skew-Hermitian [[0, I], [-I, 0]], type D.
PELDatum quaternion_datum(std::size_t n);

} // namespace shimura::pel
