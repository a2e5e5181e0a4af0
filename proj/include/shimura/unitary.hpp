#pragma once

#include "shimura/core/errors.hpp"

#include <cstdint>
#include <vector>

namespace shimura::unitary {

/// Xi as a bitmask: bit j-1 set iff coordinate j is in Xi (c_Xi has sign -1 there).
struct SignVector {
  std::size_t p = 0, q = 0;
  std::uint32_t xi = 0;

  SignVector() = default;
  SignVector(std::size_t p, std::size_t q, std::uint32_t xi);
  /// From 1-based coordinates.
  static SignVector from_set(std::size_t p, std::size_t q, const std::vector<std::size_t> &coords);

  std::size_t p_xi() const;
  std::size_t q_xi() const;
  bool contains(std::size_t coord) const { return (xi >> (coord - 1)) & 1u; }
  std::vector<std::size_t> coordinates() const;

  auto operator<=>(const SignVector &) const = default;
  bool operator==(const SignVector &) const = default;
};

/// Twist by the transposition (1, p+1): flips both signs when they agree.
SignVector sigma_action(const SignVector &v);

/// n^{-1} c_Xi conj(n) computed with exact realified matrices, n the
/// monomial matrix with i at (1, p+1) and (p+1, 1).
SignVector sigma_oracle(const SignVector &v);

struct Orbit {
  std::vector<SignVector> members; // increasing
};

constexpr std::size_t max_coordinates = 20;

/// Orbits of S_p x S_q and sigma on all 2^{p+q} sign vectors, ordered by minimal member.
std::vector<Orbit> orbit_decomposition(std::size_t p, std::size_t q, std::size_t budget = max_coordinates);

/// Orbit of c_empty.
std::vector<SignVector> kernel_to_G(std::size_t p, std::size_t q);

/// c_empty, c^1_r = c_{1..r} (r = 1..p), c^2_s = c_{p+1..p+s} (s = 1..q).
std::vector<SignVector> canonical_representatives(std::size_t p, std::size_t q);

enum class PlaceKind { Real, FiniteNonsplit, FiniteSplit };

struct LocalInnerFormDatum {
  PlaceKind kind = PlaceKind::Real;
  std::size_t p = 0, q = 0;  // Real
  std::size_t m = 1;         // FiniteSplit: G_v = GL_m(D), m | n
  bool quasi_split = true;   // FiniteNonsplit
};

/// Throws domain_error when the datum does not fit n.
void check_datum(const LocalInnerFormDatum &datum, std::size_t n);

/// (-1)^{n/2 - p} (real), (-1)^m (split), +-1 by the quasi-split flag; n even.
int epsilon(const LocalInnerFormDatum &datum, std::size_t n);

/// n odd, or the product of local epsilons over the listed places is 1.
bool global_exists(const std::vector<LocalInnerFormDatum> &data, std::size_t n);

/// gcd of the m_v is 1: a sufficient (not necessary) test for B to be a division algebra.
bool division_algebra_sufficient(const std::vector<std::size_t> &split_ms, std::size_t n);

} // namespace shimura::unitary
