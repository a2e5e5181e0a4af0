#pragma once

#include "shimura/hodge.hpp"

#include <cstdint>
#include <vector>

namespace shimura::abvar {

/// Lattice model of a polarized complex torus: V = R^2d with complex
/// structure J, ambient form form_scale * psi, and a lattice spanned by the
/// columns of scale * basis.
class PolarizedTorusData {
public:
  PolarizedTorusData(QMatrix lattice, QMatrix j, Rational form_scale);

  std::size_t d() const { return j_.rows() / 2; }
  /// Canonical generators: the column HNF of the integral matrix den * L.
  const IntMatrix &basis() const { return basis_; }
  const Rational &scale() const { return scale_; }
  QMatrix lattice() const;
  const QMatrix &j() const { return j_; }
  const Rational &form_scale() const { return form_scale_; }

  /// Gram matrix of psi on the lattice basis; integral and alternating.
  IntMatrix pairing() const;
  bool is_principal() const;
  /// Gram matrix of Re H = psi(v, J w) in ambient coordinates.
  QMatrix hermitian_real_gram() const;
  /// Y with J = J(Y), recovered from the blocks of J.
  siegel::SiegelPoint period_point() const;

  friend bool operator==(const PolarizedTorusData &, const PolarizedTorusData &) = default;

private:
  IntMatrix basis_;
  Rational scale_;
  QMatrix j_;
  Rational form_scale_;
};

/// eta : (Z/n)^2d in lattice coordinates -> (Z/n)^2d standard, and the root
/// of unity exponent u (phi(1) = zeta_n^u, zeta_n = exp(-2 pi i / n)).
struct LevelStructure {
  std::int64_t n = 1;
  IntMatrix eta; // entries in [0, n)
  std::int64_t u = 1;

  LevelStructure() = default;
  LevelStructure(std::int64_t n, const IntMatrix &eta, std::int64_t u);

  friend bool operator==(const LevelStructure &, const LevelStructure &) = default;
};

/// g integral with g^T M g = c M, c > 0, every prime of c dividing n.
class IntegralHeckeElement {
public:
  IntegralHeckeElement(IntMatrix g, std::int64_t n);

  const IntMatrix &matrix() const { return g_; }
  const Integer &multiplier() const { return c_; }
  std::int64_t n() const { return n_; }

private:
  IntMatrix g_;
  Integer c_;
  std::int64_t n_;
};

struct LevelledTorus {
  PolarizedTorusData torus;
  LevelStructure level;
};

LevelledTorus torus_from_point(const siegel::SiegelPoint &y, std::int64_t n);

/// Exponent k with e_n(a, b) = zeta_n^k for the n-torsion points L a / n, L b / n.
std::int64_t weil_pairing_exp(const PolarizedTorusData &t, std::int64_t n, const std::vector<Integer> &a,
                              const std::vector<Integer> &b);

/// u * eta^T M eta == pairing (mod n).
bool is_level_structure(const PolarizedTorusData &t, const LevelStructure &s);

/// Quotient by eta^{-1}(ker(g mod n)).
LevelledTorus hecke_Tg(const LevelledTorus &x, const IntegralHeckeElement &g);

/// Lattice coordinates of eta^{-1}(ker(g mod n)) lifted to Z^2d: a lattice
/// containing n Z^2d.
IntMatrix hecke_kernel_lattice(const LevelStructure &s, const IntMatrix &g);

/// Transport along h in Sp_2d(Q): lattice h L, complex structure h J h^-1.
LevelledTorus transport(const LevelledTorus &x, const siegel::SymplecticSimilitude &h);

struct Reduction {
  siegel::SiegelPoint tau;
  siegel::SymplecticSimilitude gamma;
};

/// Reduction into the standard fundamental domain of SL_2(Z).
Reduction reduce_sl2z(const siegel::SiegelPoint &tau);

/// d = 1 only: z(w2)/z(w1) for the lattice basis, oriented into h^+ and reduced.
siegel::SiegelPoint normalized_period(const PolarizedTorusData &t);

} // namespace shimura::abvar
