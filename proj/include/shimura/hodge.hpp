#pragma once

#include "shimura/siegel.hpp"

#include <functional>
#include <optional>

namespace shimura::hodge {

/// J with J^2 = -1, J^T M J = M, and (v, w) -> psi(v, J w) positive definite.
class ComplexStructure {
public:
  explicit ComplexStructure(QMatrix j);

  std::size_t d() const { return j_.rows() / 2; }
  const QMatrix &matrix() const { return j_; }
  /// Gram matrix M J of the symmetric form psi(v, J w).
  QMatrix positivity_gram() const;

private:
  QMatrix j_;
};

/// Column basis of a Lagrangian subspace E of C^2d satisfying (a') and (b').
class LagrangianFrame {
public:
  explicit LagrangianFrame(CMatrix b);

  std::size_t d() const { return b_.cols(); }
  const CMatrix &matrix() const { return b_; }

private:
  CMatrix b_;
};

/// B^T M B; zero iff the column span is isotropic.
CMatrix isotropy_matrix(const CMatrix &b);
/// -i B^T M conj(B), the Gram matrix of v -> -i psi(v, conj v) on the span.
CMatrix positivity_matrix(const CMatrix &b);
/// Stacked (Y; I_d) for any square Y.
CMatrix frame_of(const CMatrix &y);

ComplexStructure jmatrix_from_point(const siegel::SiegelPoint &y);
LagrangianFrame lagrangian_from_point(const siegel::SiegelPoint &y);
siegel::SiegelPoint point_from_lagrangian(const LagrangianFrame &b);

/// span(g B(Y)) == span(B(g.Y)); requires c(g) > 0.
bool equivariance_check(const siegel::SymplecticSimilitude &g, const siegel::SiegelPoint &y);

enum class GroupKind { GSp, GU };

struct GroupTag {
  GroupKind kind = GroupKind::GSp;
  std::size_t d = 1; // GSp(d)
  std::size_t p = 0; // GU(p, q)
  std::size_t q = 0;

  static GroupTag gsp(std::size_t d) { return {GroupKind::GSp, d, 0, 0}; }
  static GroupTag gu(std::size_t p, std::size_t q) { return {GroupKind::GU, 0, p, q}; }
  /// Size of the defining complex or real representation.
  std::size_t size() const { return kind == GroupKind::GSp ? 2 * d : p + q; }
};

/// z0 = (3+4i)/5, the non-torsion circle point used for the Hodge-type test.
GaussianRational circle_point();
/// 1, i, z0, 2, -1, i*z0: closed enough under products to test multiplicativity.
std::vector<GaussianRational> sample_points();

struct Sample {
  GaussianRational z;
  CMatrix h;
};

/// A group together with h evaluated on the sample points.
class ShimuraDatumSpec {
public:
  /// Validates that every h(z) lies in G and that h is multiplicative on the samples.
  ShimuraDatumSpec(GroupTag group, std::vector<Sample> samples);

  static ShimuraDatumSpec from_function(GroupTag group, const std::function<CMatrix(const GaussianRational &)> &h);
  /// h(a+ib) = [[aI, -bI], [bI, aI]].
  static ShimuraDatumSpec standard_gsp(std::size_t d);
  /// h(z) = diag(z I_p, conj(z) I_q).
  static ShimuraDatumSpec standard_gu(std::size_t p, std::size_t q);

  const GroupTag &group() const { return group_; }
  const std::vector<Sample> &samples() const { return samples_; }
  const CMatrix &at(const GaussianRational &z) const;

private:
  GroupTag group_;
  std::vector<Sample> samples_;
};

struct DatumReport {
  bool weight_central = false;
  bool hodge_types = false;
  bool cartan = false;
  std::size_t lie_dimension = 0;
  // dimensions of the z0/conj(z0), 1 and conj(z0)/z0 eigenspaces of Ad h(z0)
  std::size_t dim_minus_one_one = 0;
  std::size_t dim_zero_zero = 0;
  std::size_t dim_one_minus_one = 0;
};

DatumReport check_shimura_conditions(const ShimuraDatumSpec &spec);

/// Real Lie algebra of G inside M_N(R) (N = 2d for GSp, 2(p+q) for GU after
/// realification), as a matrix whose columns are vectorized basis elements.
QMatrix lie_algebra_basis(const GroupTag &group);

} // namespace shimura::hodge
