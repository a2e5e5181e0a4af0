#pragma once

#include "shimura/core/errors.hpp"
#include "shimura/core/scalar.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shimura::trace {

/// Finite group by multiplication table (identity at index 0) with a designated subgroup Gamma.
class FiniteGroupTable {
public:
  /// Verifies the group axioms and that gamma is a subgroup; throws domain_error otherwise.
  FiniteGroupTable(std::vector<std::vector<std::uint32_t>> table, std::vector<std::uint32_t> gamma,
                   std::vector<std::string> labels = {});

  std::size_t order() const { return table_.size(); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return table_[a][b]; }
  std::uint32_t inv(std::uint32_t a) const { return inverse_[a]; }
  std::uint32_t identity() const { return 0; }
  std::uint32_t conj(std::uint32_t x, std::uint32_t g) const { return mul(mul(inv(x), g), x); } // x^-1 g x
  const std::vector<std::uint32_t> &gamma() const { return gamma_; }
  const std::vector<std::string> &labels() const { return labels_; }
  const std::vector<std::vector<std::uint32_t>> &table() const { return table_; }
  bool is_abelian() const;
  std::uint32_t element_order(std::uint32_t a) const;

  /// Right cosets Gamma x, each as its sorted member list; ordered by least member.
  std::vector<std::vector<std::uint32_t>> right_cosets() const;

  FiniteGroupTable with_gamma(std::vector<std::uint32_t> gamma) const;

private:
  std::vector<std::vector<std::uint32_t>> table_;
  std::vector<std::uint32_t> gamma_;
  std::vector<std::string> labels_;
  std::vector<std::uint32_t> inverse_;
};

using TestFunction = std::vector<Rational>;

/// Closure of the given elements.
std::vector<std::uint32_t> generated_subgroup(const FiniteGroupTable &g, const std::vector<std::uint32_t> &gens);

/// Trace of R(f) on functions on Gamma\G; each point has measure `measure`.
Rational direct_trace(const FiniteGroupTable &g, const TestFunction &f, Exec exec = Exec::Parallel,
                      const Rational &measure = 1);
/// Sum over Gamma-classes of vol * orbital sum.
Rational geometric_side(const FiniteGroupTable &g, const TestFunction &f, Exec exec = Exec::Parallel,
                        const Rational &measure = 1);
/// Sum over characters trivial on Gamma of the Fourier coefficient of f; G abelian.
Rational spectral_side_abelian(const FiniteGroupTable &g, const TestFunction &f, const Rational &measure = 1);

/// Invariant factors d_1 | ... | d_r (> 1) and coordinates of every element in Z/d_1 x ... x Z/d_r.
struct CyclicDecomposition {
  std::vector<Integer> factors;
  std::vector<std::vector<Integer>> coords;
};
CyclicDecomposition cyclic_decomposition(const FiniteGroupTable &g);

/// Elements of Q(zeta_n) as coefficient vectors of length phi(n) modulo Phi_n.
class Cyclotomic {
public:
  explicit Cyclotomic(std::size_t n);
  std::size_t n() const { return n_; }
  /// Cyclotomic polynomial coefficients, lowest degree first.
  const std::vector<Integer> &phi() const { return phi_; }
  /// Reduces sum c_k zeta^k (k < n) to the power basis.
  std::vector<Rational> reduce(const std::vector<Rational> &powers) const;

private:
  std::size_t n_;
  std::vector<Integer> phi_;
};

struct TraceReport {
  Rational direct, geometric;
  std::optional<Rational> spectral;
  bool agree = false;
};
TraceReport trace_check(const FiniteGroupTable &g, const TestFunction &f);

// Packaged groups.

FiniteGroupTable cyclic(std::size_t n);
FiniteGroupTable direct_product(const FiniteGroupTable &a, const FiniteGroupTable &b);
/// Closure of permutations of {0..n-1}; product (a b)(i) = a(b(i)).
FiniteGroupTable permutation_group(const std::vector<std::vector<std::uint32_t>> &gens);
FiniteGroupTable dihedral(std::size_t n);
FiniteGroupTable symmetric(std::size_t n);
FiniteGroupTable alternating(std::size_t n);
/// Subgroup of GL_2(F_p) generated by 2x2 matrices (row-major).
FiniteGroupTable matrix_group(std::int64_t p, const std::vector<std::array<std::int64_t, 4>> &gens);

struct CatalogEntry {
  std::string name;
  FiniteGroupTable group;
};
/// Named groups with designated subgroups, orders up to 200.
std::vector<CatalogEntry> catalog();
FiniteGroupTable catalog_group(const std::string &name);

} // namespace shimura::trace
