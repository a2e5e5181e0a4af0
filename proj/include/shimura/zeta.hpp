#pragma once

#include "shimura/core/errors.hpp"
#include "shimura/core/scalar.hpp"

#include <cstdint>
#include <vector>

namespace shimura::zeta {

/// F_{p^k} with elements packed as base-p digit strings of polynomial coefficients
/// modulo the lexicographically least monic irreducible of degree k.
class FiniteField {
public:
  using Elem = std::uint32_t;

  static constexpr std::uint64_t max_size = std::uint64_t{1} << 24;

  FiniteField(std::int64_t p, unsigned k);

  std::int64_t characteristic() const { return p_; }
  unsigned degree() const { return k_; }
  std::uint64_t size() const { return q_; }
  /// Coefficients c_0..c_k of the modulus (c_k = 1).
  const std::vector<std::int64_t> &modulus() const { return modulus_; }
  Elem generator() const { return exp_[1 % (q_ - 1)]; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  /// Image of an integer under Z -> F_p -> F_q.
  Elem from_int(std::int64_t a) const;

  Elem add(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    std::uint64_t e = std::uint64_t(log_[a]) + log_[b];
    if (e >= q_ - 1) e -= q_ - 1;
    return exp_[e];
  }
  Elem inv(Elem a) const;
  Elem pow(Elem a, std::uint64_t e) const;

  /// Elements fixed by x -> x^{p^d}; for d | k this is the copy of F_{p^d}.
  std::vector<Elem> subfield(unsigned d) const;

private:
  std::int64_t p_;
  unsigned k_;
  std::uint64_t q_;
  std::vector<std::int64_t> modulus_;
  std::vector<std::uint32_t> log_;
  std::vector<Elem> exp_;
  std::vector<std::int64_t> zech_; // log of 1 + g^d, or -1 when it vanishes
};

/// Polynomial arithmetic over F_p used to pick the modulus.
bool is_irreducible_mod_p(const std::vector<std::int64_t> &monic, std::int64_t p);
/// Least monic irreducible of degree k, comparing coefficients from degree k-1 down.
std::vector<std::int64_t> least_irreducible(std::int64_t p, unsigned k);

struct Term {
  std::int64_t coeff = 0;
  std::vector<unsigned> exponents;
};

using Polynomial = std::vector<Term>;

enum class Ambient { Affine, Projective };

/// Zero locus of polynomials with coefficients in F_p, counted over F_{p^{k r}}.
struct VarietySpec {
  Ambient ambient = Ambient::Affine;
  std::size_t dim = 1;          // m: A^m or P^m
  std::int64_t p = 2;
  unsigned k = 1;               // base field F_q, q = p^k
  std::vector<Polynomial> equations;

  std::size_t variables() const { return ambient == Ambient::Affine ? dim : dim + 1; }
  std::uint64_t q() const;
  /// Throws domain_error for a bad prime, wrong arity, or non-homogeneous projective equations.
  void validate() const;
};

constexpr std::uint64_t default_budget = 100000000;

std::uint64_t count_points(const VarietySpec &v, unsigned r, Exec exec = Exec::Parallel,
                           std::uint64_t budget = default_budget);
std::vector<std::uint64_t> count_series(const VarietySpec &v, unsigned max_r, Exec exec = Exec::Parallel,
                                        std::uint64_t budget = default_budget);

/// Coefficients z_0..z_R of exp(sum N_r T^r / r).
std::vector<Rational> zeta_series(const std::vector<Integer> &counts, std::size_t precision);
/// Inverse of zeta_series by logarithmic differentiation.
std::vector<Integer> counts_from_series(const std::vector<Rational> &series);

struct RationalZeta {
  std::vector<Integer> p, q; // P(T), Q(T), lowest degree first, P(0) = Q(0) = 1
};

/// Least-degree (P, Q) with Z Q = P modulo T^{R+1}, R + 1 = series.size(); throws
/// recovery_error when none exists within the bounds or R + 1 < deg P + deg Q + 1.
RationalZeta rational_recovery(const std::vector<Rational> &series, std::size_t deg_p, std::size_t deg_q);

/// Power sums s_1..s_n of the reciprocal roots of 1 + c_1 T + ... (Newton).
std::vector<Integer> reciprocal_power_sums(const std::vector<Integer> &poly, std::size_t n);

/// N_r = s_r(Q) - s_r(P) for every supplied r.
bool lefschetz_consistency(const RationalZeta &z, const std::vector<Integer> &counts);

/// P(T) = q^g T^{2g} P(1/(qT)) with 2g = deg P.
bool functional_equation_holds(const std::vector<Integer> &p, const Integer &q);

} // namespace shimura::zeta
