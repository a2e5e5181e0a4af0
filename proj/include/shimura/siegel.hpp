#pragma once

#include "shimura/core/matrix.hpp"

#include <complex>

namespace shimura::siegel {

/// Which half of h_d = h_d^+ u (-h_d^+) a point lies on.
enum class Component { Upper, Lower };

/// Symmetric complex d x d matrix with definite imaginary part.
class SiegelPoint {
public:
  /// Infers the component from the sign of Im(Y); throws domain_error when Y
  /// is not symmetric or Im(Y) is not definite.
  explicit SiegelPoint(CMatrix y);

  std::size_t d() const { return y_.rows(); }
  const CMatrix &matrix() const { return y_; }
  Component component() const { return component_; }

  friend bool operator==(const SiegelPoint &, const SiegelPoint &) = default;

private:
  CMatrix y_;
  Component component_ = Component::Upper;
};

/// g with g^T M g = c M, M the standard symplectic Gram matrix.
class SymplecticSimilitude {
public:
  /// Computes the multiplier; throws domain_error if g is not a similitude.
  explicit SymplecticSimilitude(QMatrix g);

  std::size_t d() const { return g_.rows() / 2; }
  const QMatrix &matrix() const { return g_; }
  const Rational &multiplier() const { return c_; }

  QMatrix a() const { return g_.block(0, 0, d(), d()); }
  QMatrix b() const { return g_.block(0, d(), d(), d()); }
  QMatrix c() const { return g_.block(d(), 0, d(), d()); }
  QMatrix dblock() const { return g_.block(d(), d(), d(), d()); }

  friend SymplecticSimilitude operator*(const SymplecticSimilitude &x, const SymplecticSimilitude &y) {
    return SymplecticSimilitude(x.g_ * y.g_);
  }
  friend bool operator==(const SymplecticSimilitude &, const SymplecticSimilitude &) = default;

private:
  QMatrix g_;
  Rational c_;
};

/// Point of the bounded domain D_d: A symmetric with I - A^* A positive definite.
class BoundedPoint {
public:
  explicit BoundedPoint(CMatrix a);

  std::size_t d() const { return a_.rows(); }
  const CMatrix &matrix() const { return a_; }

  friend bool operator==(const BoundedPoint &, const BoundedPoint &) = default;

private:
  CMatrix a_;
};

/// (AY + B)(CY + D)^{-1}. The component flips exactly when c(g) < 0.
/// Throws degeneracy_error if CY + D is singular.
SiegelPoint mobius_act(const SymplecticSimilitude &g, const SiegelPoint &y);

/// Bounded realization Y -> (iI - Y)(iI + Y)^{-1}; requires Y in h_d^+.
BoundedPoint cayley(const SiegelPoint &y);
/// A -> i(I - A)(I + A)^{-1}.
SiegelPoint cayley_inv(const BoundedPoint &a);

enum class MetricVariant {
  Paper,    // Tr(Im(Y)^-2 dY Im(Y)^-1 conj(dY))
  Classical // Tr(Im(Y)^-1 dY Im(Y)^-1 conj(dY))
};

/// Exact value of the trace in Q(i); the metric is its real part.
GaussianRational metric_trace(const SiegelPoint &y, const CMatrix &dy, MetricVariant v);
double metric_form(const SiegelPoint &y, const CMatrix &dy, MetricVariant v);

/// Differential of the action: dY -> (A - Y'C) dY (CY + D)^{-1}, Y' = g.Y.
CMatrix pushforward(const SymplecticSimilitude &g, const SiegelPoint &y, const CMatrix &dy);

/// |ds^2(g.Y, g_* dY) - ds^2(Y, dY)|, evaluated exactly then converted.
double invariance_residual(const SymplecticSimilitude &g, const SiegelPoint &y, const CMatrix &dy,
                           MetricVariant v);

/// g^T g = I and c(g) = 1.
bool in_Kinfty(const SymplecticSimilitude &g);

/// X + iY unitary -> [[X, Y], [-Y, X]]; throws domain_error otherwise.
SymplecticSimilitude embed_ud(const QMatrix &x, const QMatrix &y);

// Elementary generators of Sp_2d(Q) / GSp_2d(Q).

/// [[I, S], [0, I]] with S symmetric.
SymplecticSimilitude translation(const QMatrix &s);
/// [[I, 0], [S, I]] with S symmetric.
SymplecticSimilitude lower_translation(const QMatrix &s);
/// [[A, 0], [0, A^{-T}]] with A invertible.
SymplecticSimilitude levi(const QMatrix &a);
/// [[0, I], [-I, 0]].
SymplecticSimilitude involution(std::size_t d);
/// [[I, 0], [0, cI]], multiplier c.
SymplecticSimilitude scaling(std::size_t d, const Rational &c);

} // namespace shimura::siegel
