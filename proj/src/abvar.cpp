#include "shimura/abvar.hpp"

#include "shimura/core/normal_form.hpp"

namespace shimura::abvar {

using siegel::SiegelPoint;
using siegel::SymplecticSimilitude;

namespace {

Integer content(const IntMatrix &m) {
  Integer g = 0;
  for (const auto &x : m.entries()) g = gcd(g, x);
  return g;
}

IntMatrix reduce_mod(const IntMatrix &m, std::int64_t n) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = mod(m(i, j), n);
  return r;
}

bool zero_mod(const IntMatrix &m, std::int64_t n) {
  for (const auto &x : m.entries())
    if (mod(x, n) != 0) return false;
  return true;
}

IntMatrix integral(const QMatrix &m, const char *what) {
  for (const auto &x : m.entries())
    if (!is_integer(x)) throw internal_error(std::string(what) + " is not integral");
  return to_integer(m);
}

/// eta expressed in the canonical basis of `t`, given the basis it was written against.
LevelStructure rebase(const LevelStructure &s, const QMatrix &old_lattice, const PolarizedTorusData &t) {
  IntMatrix change = integral(inverse(old_lattice) * t.lattice(), "basis change");
  return LevelStructure(s.n, s.eta * change, s.u);
}

} // namespace

PolarizedTorusData::PolarizedTorusData(QMatrix lattice, QMatrix j, Rational form_scale)
    : j_(std::move(j)), form_scale_(std::move(form_scale)) {
  hodge::ComplexStructure checked(j_);
  if (!lattice.square() || lattice.rows() != j_.rows()) throw shape_error("lattice must be 2d x 2d");
  if (determinant(lattice) == 0) throw degeneracy_error("lattice basis is singular");
  if (sgn(form_scale_) <= 0) throw domain_error("form scale must be positive");
  Integer den = common_denominator(lattice);
  basis_ = column_lattice_hnf(to_integer(lattice * Rational(den)));
  Integer g = content(basis_);
  for (std::size_t i = 0; i < basis_.rows(); ++i)
    for (std::size_t k = 0; k < basis_.cols(); ++k) basis_(i, k) /= g;
  scale_ = make_rational(g, den);
  QMatrix p = this->lattice().transpose() * symplectic_gram(d()) * this->lattice() * form_scale_;
  for (const auto &x : p.entries())
    if (!is_integer(x)) throw domain_error("psi is not integral on the lattice");
}

QMatrix PolarizedTorusData::lattice() const { return to_rational(basis_) * scale_; }

IntMatrix PolarizedTorusData::pairing() const {
  return to_integer(lattice().transpose() * symplectic_gram(d()) * lattice() * form_scale_);
}

bool PolarizedTorusData::is_principal() const { return abs(determinant(pairing())) == 1; }

QMatrix PolarizedTorusData::hermitian_real_gram() const { return symplectic_gram(d()) * j_ * form_scale_; }

SiegelPoint PolarizedTorusData::period_point() const {
  const std::size_t n = d();
  QMatrix t = inverse(j_.block(n, 0, n, n));
  QMatrix x = -(t * j_.block(n, n, n, n));
  return SiegelPoint(make_complex(x, t));
}

LevelStructure::LevelStructure(std::int64_t n_, const IntMatrix &eta_, std::int64_t u_) : n(n_), u(0) {
  if (n < 1) throw domain_error("level must be >= 1");
  if (!eta_.square() || eta_.rows() % 2 != 0) throw shape_error("eta must be 2d x 2d");
  eta = reduce_mod(eta_, n);
  u = mod(u_, n);
  if (gcd64(mod(determinant(eta), n), n) != 1) throw domain_error("eta is not invertible mod n");
  if (gcd64(u, n) != 1) throw domain_error("zeta exponent is not a unit mod n");
}

IntegralHeckeElement::IntegralHeckeElement(IntMatrix g, std::int64_t n) : g_(std::move(g)), n_(n) {
  if (!g_.square() || g_.rows() == 0 || g_.rows() % 2 != 0) throw shape_error("g must be 2d x 2d");
  if (n < 1) throw domain_error("level must be >= 1");
  const std::size_t d = g_.rows() / 2;
  IntMatrix m = to_integer(symplectic_gram(d));
  IntMatrix gram = g_.transpose() * m * g_;
  c_ = gram(0, d);
  if (c_ <= 0 || !(gram == m * c_)) throw domain_error("g is not a similitude with positive multiplier");
  Integer rest = c_;
  for (Integer f = gcd(rest, Integer(n)); f > 1; f = gcd(rest, Integer(n))) rest /= f;
  if (rest != 1) throw domain_error("multiplier has a prime not dividing n");
}

LevelledTorus torus_from_point(const SiegelPoint &y, std::int64_t n) {
  const std::size_t d = y.d();
  PolarizedTorusData t(QMatrix::identity(2 * d), hodge::jmatrix_from_point(y).matrix(), Rational(1));
  return {t, LevelStructure(n, IntMatrix::identity(2 * d), 1)};
}

std::int64_t weil_pairing_exp(const PolarizedTorusData &t, std::int64_t n, const std::vector<Integer> &a,
                              const std::vector<Integer> &b) {
  if (n < 1) throw domain_error("level must be >= 1");
  if (!t.is_principal()) throw domain_error("Weil pairing needs a principal polarization");
  const std::size_t dim = 2 * t.d();
  if (a.size() != dim || b.size() != dim) throw shape_error("torsion vectors have the wrong length");
  QMatrix va(dim, 1), vb(dim, 1);
  for (std::size_t i = 0; i < dim; ++i) {
    va(i, 0) = Rational(a[i]);
    vb(i, 0) = Rational(b[i]);
  }
  QMatrix v = t.lattice() * va * make_rational(1, n);
  QMatrix w = t.lattice() * vb * make_rational(1, n);
  Rational im_h = (v.transpose() * symplectic_gram(t.d()) * w)(0, 0) * t.form_scale();
  // e^{-2 i pi n Im H} = zeta_n^k with k = n * (n Im H)
  Rational k = im_h * Rational(n) * Rational(n);
  if (!is_integer(k)) throw internal_error("Weil exponent is not integral");
  return mod(k.get_num(), n);
}

bool is_level_structure(const PolarizedTorusData &t, const LevelStructure &s) {
  if (s.eta.rows() != 2 * t.d()) throw shape_error("level structure has the wrong size");
  IntMatrix m = to_integer(symplectic_gram(t.d()));
  IntMatrix lhs = s.eta.transpose() * m * s.eta * Integer(s.u);
  return zero_mod(lhs - t.pairing(), s.n);
}

IntMatrix hecke_kernel_lattice(const LevelStructure &s, const IntMatrix &g) {
  auto snf = smith_normal_form(g * s.eta);
  const std::size_t dim = g.rows();
  IntMatrix scale(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) scale(i, i) = Integer(s.n) / gcd(snf.d(i, i), Integer(s.n));
  return column_lattice_hnf(snf.v * scale);
}

LevelledTorus hecke_Tg(const LevelledTorus &x, const IntegralHeckeElement &g) {
  const auto &t = x.torus;
  const auto &s = x.level;
  if (g.n() != s.n) throw shape_error("Hecke element and level structure have different n");
  if (g.matrix().rows() != 2 * t.d()) throw shape_error("Hecke element has the wrong size");
  if (!is_level_structure(t, s)) throw domain_error("input level structure is not valid");

  IntMatrix kernel = hecke_kernel_lattice(s, g.matrix());
  QMatrix enlarged = t.lattice() * to_rational(kernel) * make_rational(1, s.n);
  PolarizedTorusData out(enlarged, t.j(), t.form_scale() * Rational(g.multiplier()));

  QMatrix moved = to_rational(g.matrix() * s.eta) * inverse(t.lattice()) * out.lattice();
  IntMatrix eta = integral(moved, "g eta on the quotient lattice");
  if (gcd64(mod(determinant(eta), s.n), s.n) != 1)
    throw domain_error("g does not induce a level structure on the quotient");
  LevelStructure level(s.n, eta, s.u);
  if (!is_level_structure(out, level))
    throw domain_error("level structure does not descend to the quotient for this lift of eta");
  return {out, level};
}

LevelledTorus transport(const LevelledTorus &x, const SymplecticSimilitude &h) {
  if (h.multiplier() != 1) throw domain_error("transport needs a symplectic matrix");
  const QMatrix &hm = h.matrix();
  QMatrix lattice = hm * x.torus.lattice();
  PolarizedTorusData t(lattice, hm * x.torus.j() * inverse(hm), x.torus.form_scale());
  return {t, rebase(x.level, lattice, t)};
}

Reduction reduce_sl2z(const SiegelPoint &tau) {
  if (tau.d() != 1) throw shape_error("reduce_sl2z needs d = 1");
  if (tau.component() != siegel::Component::Upper) throw domain_error("reduce_sl2z needs Im(tau) > 0");
  SiegelPoint cur = tau;
  QMatrix gamma = QMatrix::identity(2);
  const Rational half = make_rational(1, 2);
  for (;;) {
    const auto &z = cur.matrix()(0, 0);
    Integer shift = floor(z.re + half);
    if (shift != 0) {
      SymplecticSimilitude t(QMatrix{{1, Rational(-shift)}, {0, 1}});
      cur = siegel::mobius_act(t, cur);
      gamma = t.matrix() * gamma;
      continue;
    }
    Rational norm = z.norm();
    if (norm < 1 || (norm == 1 && sgn(z.re) > 0)) {
      SymplecticSimilitude s(QMatrix{{0, -1}, {1, 0}});
      cur = siegel::mobius_act(s, cur);
      gamma = s.matrix() * gamma;
      continue;
    }
    break;
  }
  return {cur, SymplecticSimilitude(gamma)};
}

SiegelPoint normalized_period(const PolarizedTorusData &t) {
  if (t.d() != 1) throw shape_error("normalized_period needs d = 1");
  // the explicit period map (a, b) -> a + Y b of C / (Z + Y Z)
  GaussianRational y = t.period_point().matrix()(0, 0);
  QMatrix l = t.lattice();
  GaussianRational z1 = GaussianRational(l(0, 0)) + y * GaussianRational(l(1, 0));
  GaussianRational z2 = GaussianRational(l(0, 1)) + y * GaussianRational(l(1, 1));
  GaussianRational tau = z2 / z1;
  if (sgn(tau.im) < 0) tau = z1 / z2;
  return reduce_sl2z(SiegelPoint(CMatrix{{tau}})).tau;
}

} // namespace shimura::abvar
