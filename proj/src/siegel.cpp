#include "shimura/siegel.hpp"

namespace shimura::siegel {

namespace {

QMatrix negate(QMatrix m) { return -m; }

CMatrix identity_c(std::size_t d) { return CMatrix::identity(d); }

CMatrix times_i(const CMatrix &m) { return m * GaussianRational::i(); }

GaussianRational trace(const CMatrix &m) {
  GaussianRational t;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

} // namespace

SiegelPoint::SiegelPoint(CMatrix y) : y_(std::move(y)) {
  if (!y_.square() || y_.rows() == 0) throw shape_error("Siegel point must be a non-empty square matrix");
  if (!y_.is_symmetric()) throw domain_error("Siegel point must be symmetric");
  QMatrix im = imag_part(y_);
  if (is_positive_definite(im))
    component_ = Component::Upper;
  else if (is_positive_definite(negate(im)))
    component_ = Component::Lower;
  else
    throw domain_error("imaginary part is not definite");
}

SymplecticSimilitude::SymplecticSimilitude(QMatrix g) : g_(std::move(g)) {
  if (!g_.square() || g_.rows() == 0 || g_.rows() % 2 != 0)
    throw shape_error("similitude must be 2d x 2d");
  auto m = symplectic_gram(d());
  QMatrix gram = g_.transpose() * m * g_;
  c_ = gram(0, d());
  if (sgn(c_) == 0 || !(gram == m * c_)) throw domain_error("matrix is not a symplectic similitude");
}

BoundedPoint::BoundedPoint(CMatrix a) : a_(std::move(a)) {
  if (!a_.square() || a_.rows() == 0) throw shape_error("bounded point must be square");
  if (!a_.is_symmetric()) throw domain_error("bounded point must be symmetric");
  if (!is_positive_definite(identity_c(d()) - adjoint(a_) * a_))
    throw domain_error("I - A^*A is not positive definite");
}

SiegelPoint mobius_act(const SymplecticSimilitude &g, const SiegelPoint &y) {
  if (g.d() != y.d()) throw shape_error("dimension mismatch in mobius_act");
  const CMatrix &Y = y.matrix();
  CMatrix num = to_gaussian(g.a()) * Y + to_gaussian(g.b());
  CMatrix den = to_gaussian(g.c()) * Y + to_gaussian(g.dblock());
  if (determinant(den).is_zero()) throw degeneracy_error("CY + D is singular");
  SiegelPoint out(num * inverse(den));
  bool flips = sgn(g.multiplier()) < 0;
  bool flipped = out.component() != y.component();
  if (flips != flipped) throw internal_error("component bookkeeping violated in mobius_act");
  return out;
}

BoundedPoint cayley(const SiegelPoint &y) {
  if (y.component() != Component::Upper) throw domain_error("cayley needs a point of h_d^+");
  CMatrix iI = times_i(identity_c(y.d()));
  CMatrix den = iI + y.matrix();
  if (determinant(den).is_zero()) throw degeneracy_error("iI + Y is singular");
  return BoundedPoint((iI - y.matrix()) * inverse(den));
}

SiegelPoint cayley_inv(const BoundedPoint &a) {
  CMatrix id = identity_c(a.d());
  CMatrix den = id + a.matrix();
  if (determinant(den).is_zero()) throw degeneracy_error("I + A is singular");
  return SiegelPoint(times_i((id - a.matrix()) * inverse(den)));
}

GaussianRational metric_trace(const SiegelPoint &y, const CMatrix &dy, MetricVariant v) {
  if (dy.rows() != y.d() || !dy.is_symmetric()) throw shape_error("dY must be symmetric of the size of Y");
  CMatrix tinv = to_gaussian(inverse(imag_part(y.matrix())));
  CMatrix left = v == MetricVariant::Paper ? tinv * tinv : tinv;
  return trace(left * dy * tinv * conj(dy));
}

double metric_form(const SiegelPoint &y, const CMatrix &dy, MetricVariant v) {
  return metric_trace(y, dy, v).re.get_d();
}

CMatrix pushforward(const SymplecticSimilitude &g, const SiegelPoint &y, const CMatrix &dy) {
  SiegelPoint moved = mobius_act(g, y);
  CMatrix left = to_gaussian(g.a()) - moved.matrix() * to_gaussian(g.c());
  CMatrix den = to_gaussian(g.c()) * y.matrix() + to_gaussian(g.dblock());
  return left * dy * inverse(den);
}

double invariance_residual(const SymplecticSimilitude &g, const SiegelPoint &y, const CMatrix &dy,
                           MetricVariant v) {
  GaussianRational before = metric_trace(y, dy, v);
  GaussianRational after = metric_trace(mobius_act(g, y), pushforward(g, y, dy), v);
  GaussianRational diff = after - before;
  return std::sqrt(diff.norm().get_d());
}

bool in_Kinfty(const SymplecticSimilitude &g) {
  return g.multiplier() == 1 && g.matrix().transpose() * g.matrix() == QMatrix::identity(2 * g.d());
}

SymplecticSimilitude embed_ud(const QMatrix &x, const QMatrix &y) {
  if (!x.square() || x.rows() != y.rows() || x.cols() != y.cols()) throw shape_error("embed_ud shapes");
  CMatrix u = make_complex(x, y);
  if (!(adjoint(u) * u == CMatrix::identity(x.rows()))) throw domain_error("X + iY is not unitary");
  const std::size_t d = x.rows();
  QMatrix g(2 * d, 2 * d);
  g.set_block(0, 0, x);
  g.set_block(0, d, y);
  g.set_block(d, 0, -y);
  g.set_block(d, d, x);
  return SymplecticSimilitude(g);
}

SymplecticSimilitude translation(const QMatrix &s) {
  if (!s.is_symmetric()) throw domain_error("translation needs a symmetric matrix");
  const std::size_t d = s.rows();
  QMatrix g = QMatrix::identity(2 * d);
  g.set_block(0, d, s);
  return SymplecticSimilitude(g);
}

SymplecticSimilitude lower_translation(const QMatrix &s) {
  if (!s.is_symmetric()) throw domain_error("lower translation needs a symmetric matrix");
  const std::size_t d = s.rows();
  QMatrix g = QMatrix::identity(2 * d);
  g.set_block(d, 0, s);
  return SymplecticSimilitude(g);
}

SymplecticSimilitude levi(const QMatrix &a) {
  const std::size_t d = a.rows();
  QMatrix g(2 * d, 2 * d);
  g.set_block(0, 0, a);
  g.set_block(d, d, inverse(a).transpose());
  return SymplecticSimilitude(g);
}

SymplecticSimilitude involution(std::size_t d) { return SymplecticSimilitude(symplectic_gram(d)); }

SymplecticSimilitude scaling(std::size_t d, const Rational &c) {
  QMatrix g = QMatrix::identity(2 * d);
  for (std::size_t i = d; i < 2 * d; ++i) g(i, i) = c;
  return SymplecticSimilitude(g);
}

} // namespace shimura::siegel
