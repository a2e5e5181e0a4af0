#pragma once

#include "shimura/core/errors.hpp"
#include "shimura/core/matrix.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace shimura::finsymp {

/// Element of GSp_2d(Z/n) with its multiplier.
struct GSpModN {
  std::size_t d = 1;
  std::int64_t n = 1;
  IntMatrix g; // entries in [0, n)
  std::int64_t c = 1;

  friend bool operator==(const GSpModN &, const GSpModN &) = default;
};

/// Reduces g mod n and computes c with g^T M g = c M; throws domain_error
/// when no unit c exists.
GSpModN validate(const IntMatrix &g, std::int64_t n);

/// [[0, alpha I], [-I, 0]]: a section of the multiplier, c = alpha.
IntMatrix adjusted_section(std::size_t d, std::int64_t alpha);

/// q^{d^2} prod (q^{2i} - 1) per prime, times p^{(k-1) d (2d+1)}, multiplied over p^k || n.
Integer sp_order(std::size_t d, std::int64_t n);

constexpr std::size_t default_budget = 1000000;

/// All g mod n with g^T M g = c M, in lexicographic column order. Throws
/// resource_error when the expected count exceeds the budget.
class Enumeration {
public:
  std::size_t d = 1;
  std::int64_t n = 1;
  std::int64_t c = 1;
  std::vector<std::int64_t> data; // column-major 2d x 2d blocks, one per element

  std::size_t size() const { return data.size() / (4 * d * d); }
  IntMatrix element(std::size_t k) const;
  std::int64_t entry(std::size_t k, std::size_t i, std::size_t j) const {
    return data[k * 4 * d * d + j * 2 * d + i];
  }
};

Enumeration enumerate_fiber(std::size_t d, std::int64_t n, std::int64_t c, Exec exec = Exec::Parallel,
                            std::size_t budget = default_budget);
inline Enumeration enumerate_sp(std::size_t d, std::int64_t n, Exec exec = Exec::Parallel,
                                std::size_t budget = default_budget) {
  return enumerate_fiber(d, n, 1, exec, budget);
}

/// Integral symplectic matrix reducing to g; g must have c = 1.
IntMatrix lift_to_integral(const GSpModN &g);

inline std::int64_t component_class(const GSpModN &g) { return g.c; }

/// Units of Z/n in increasing order.
std::vector<std::int64_t> units_mod(std::int64_t n);

/// Class of K g K for K = GSp_2d(Z_p): multiplier exponent m and the d
/// smallest elementary divisor exponents a_1 <= ... <= a_d (the others are m - a_i).
struct DoubleCosetKey {
  std::size_t d = 1;
  int m = 0;
  std::vector<int> a;

  auto operator<=>(const DoubleCosetKey &) const = default;
  bool operator==(const DoubleCosetKey &) const = default;
};

/// diag(p^{a_1..a_d}, p^{m-a_1..m-a_d}).
IntMatrix diagonal_representative(const DoubleCosetKey &key, std::int64_t p);
/// Key of an integral similitude whose multiplier is a power of p.
DoubleCosetKey classify(const IntMatrix &g, std::int64_t p);

struct Coset {
  IntMatrix lattice;        // column HNF of g Z^2d
  IntMatrix representative; // similitude with that lattice, multiplier c(g)
};

struct CosetList {
  std::size_t d = 1;
  std::int64_t p = 2;
  IntMatrix g;
  std::vector<Coset> cosets; // ordered lexicographically by HNF entries
};

/// Left cosets of K g K / K from sublattices with the elementary divisors of g
/// on which psi / c(g) is integral and unimodular.
CosetList double_coset_decompose(std::size_t d, std::int64_t p, const IntMatrix &g);

/// Independent oracle for the lattice-containing-pZ^2d case: the orbit of
/// (g Z^2d) / p Z^2d under an enumerated Sp_2d(F_p).
std::size_t orbit_count_mod_p(std::size_t d, std::int64_t p, const IntMatrix &g, Exec exec = Exec::Parallel);

/// Element of the Hecke algebra of (GSp_2d(Q_p), GSp_2d(Z_p)) at a level n prime to p.
struct HeckeElement {
  std::size_t d = 1;
  std::int64_t p = 2;
  std::int64_t n = 1;
  std::map<DoubleCosetKey, Integer> terms;

  static HeckeElement unit(std::size_t d, std::int64_t p, std::int64_t n);
  static HeckeElement basis(std::size_t d, std::int64_t p, std::int64_t n, const DoubleCosetKey &key);

  friend bool operator==(const HeckeElement &, const HeckeElement &) = default;
};

/// vol(K) = 1 convolution.
HeckeElement hecke_convolve(const HeckeElement &f1, const HeckeElement &f2);

/// Symplectic basis of an integral unimodular alternating Gram matrix: P with P^T G P = M.
IntMatrix symplectic_basis(const IntMatrix &gram);

} // namespace shimura::finsymp
