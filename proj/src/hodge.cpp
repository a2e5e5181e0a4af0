#include "shimura/hodge.hpp"

#include <algorithm>

namespace shimura::hodge {

using siegel::SiegelPoint;
using siegel::SymplecticSimilitude;

ComplexStructure::ComplexStructure(QMatrix j) : j_(std::move(j)) {
  if (!j_.square() || j_.rows() == 0 || j_.rows() % 2 != 0) throw shape_error("J must be 2d x 2d");
  const std::size_t n = j_.rows();
  if (!(j_ * j_ == -QMatrix::identity(n))) throw domain_error("J^2 != -1");
  auto m = symplectic_gram(d());
  if (!(j_.transpose() * m * j_ == m)) throw domain_error("J does not preserve psi");
  if (!is_positive_definite(positivity_gram())) throw domain_error("psi(v, Jw) is not positive definite");
}

QMatrix ComplexStructure::positivity_gram() const { return symplectic_gram(d()) * j_; }

CMatrix frame_of(const CMatrix &y) {
  if (!y.square()) throw shape_error("frame needs a square matrix");
  return vcat(y, CMatrix::identity(y.rows()));
}

CMatrix isotropy_matrix(const CMatrix &b) {
  return b.transpose() * symplectic_gram<GaussianRational>(b.rows() / 2) * b;
}

CMatrix positivity_matrix(const CMatrix &b) {
  return b.transpose() * symplectic_gram<GaussianRational>(b.rows() / 2) * conj(b) * -GaussianRational::i();
}

LagrangianFrame::LagrangianFrame(CMatrix b) : b_(std::move(b)) {
  if (b_.rows() != 2 * b_.cols() || b_.cols() == 0) throw shape_error("frame must be 2d x d");
  if (rank(b_) != b_.cols()) throw rank_error("frame columns are dependent");
  if (!isotropy_matrix(b_).is_zero()) throw domain_error("frame is not isotropic");
  if (!is_positive_definite(positivity_matrix(b_))) throw domain_error("frame violates the positivity condition");
}

ComplexStructure jmatrix_from_point(const SiegelPoint &y) {
  if (y.component() != siegel::Component::Upper) throw domain_error("jmatrix needs a point of h_d^+");
  // J B = i B with B = R + iI splits into J R = -I and J I = R.
  CMatrix b = frame_of(y.matrix());
  QMatrix re = real_part(b), im = imag_part(b);
  QMatrix basis = hcat(re, im);
  QMatrix image = hcat(-im, re);
  return ComplexStructure(image * inverse(basis));
}

LagrangianFrame lagrangian_from_point(const SiegelPoint &y) {
  if (y.component() != siegel::Component::Upper) throw domain_error("lagrangian needs a point of h_d^+");
  return LagrangianFrame(frame_of(y.matrix()));
}

SiegelPoint point_from_lagrangian(const LagrangianFrame &b) {
  const std::size_t d = b.d();
  CMatrix top = b.matrix().block(0, 0, d, d);
  CMatrix bottom = b.matrix().block(d, 0, d, d);
  if (determinant(bottom).is_zero()) throw degeneracy_error("frame cannot be normalized");
  return SiegelPoint(top * inverse(bottom));
}

bool equivariance_check(const SymplecticSimilitude &g, const SiegelPoint &y) {
  if (sgn(g.multiplier()) <= 0) throw domain_error("equivariance needs c(g) > 0");
  CMatrix moved = to_gaussian(g.matrix()) * frame_of(y.matrix());
  CMatrix target = frame_of(siegel::mobius_act(g, y).matrix());
  return rank(hcat(moved, target)) == y.d();
}

GaussianRational circle_point() { return {make_rational(3, 5), make_rational(4, 5)}; }

std::vector<GaussianRational> sample_points() {
  auto z0 = circle_point();
  return {GaussianRational(1), GaussianRational::i(), z0, GaussianRational(2), GaussianRational(-1),
          GaussianRational::i() * z0};
}

namespace {

QMatrix form_matrix(const GroupTag &g) {
  if (g.kind == GroupKind::GSp) return symplectic_gram(g.d);
  CMatrix h(g.size(), g.size());
  for (std::size_t k = 0; k < g.size(); ++k) h(k, k) = GaussianRational(k < g.p ? 1 : -1);
  return realify(h);
}

void check_tag(const GroupTag &g) {
  if (g.kind == GroupKind::GSp && g.d == 0) throw domain_error("GSp(d) needs d >= 1");
  if (g.kind == GroupKind::GU && g.p + g.q == 0) throw domain_error("GU(p,q) needs p + q >= 1");
}

/// The group element in the real representation used for Lie algebra work.
QMatrix real_rep(const GroupTag &g, const CMatrix &h) {
  if (h.rows() != g.size() || h.cols() != g.size()) throw shape_error("h(z) has the wrong size");
  if (g.kind == GroupKind::GSp) {
    if (!imag_part(h).is_zero()) throw domain_error("GSp values of h must be real");
    return real_part(h);
  }
  return realify(h);
}

bool in_group(const GroupTag &g, const QMatrix &x) {
  QMatrix f = form_matrix(g);
  QMatrix gram = x.transpose() * f * x;
  // the multiplier is read off a nonzero entry of f
  std::size_t r = 0, c = 0;
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = 0; j < f.cols(); ++j)
      if (sgn(f(i, j)) != 0) r = i, c = j;
  Rational mult = gram(r, c) / f(r, c);
  return sgn(mult) != 0 && gram == f * mult;
}

bool is_scalar(const CMatrix &m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j ? !m(i, j).is_zero() : !(m(i, i) == m(0, 0))) return false;
  return true;
}

QMatrix vec(const QMatrix &x) {
  QMatrix v(x.rows() * x.cols(), 1);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) v(i * x.cols() + j, 0) = x(i, j);
  return v;
}

QMatrix unvec(const QMatrix &v, std::size_t n) {
  QMatrix x(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) = v(i * n + j, 0);
  return x;
}

/// Coordinates of the columns of `vectors` in the column basis `basis`.
QMatrix coordinates(const QMatrix &basis, const QMatrix &vectors) {
  auto c = solve(basis, vectors);
  if (!c) throw internal_error("vector outside the Lie algebra");
  return *c;
}

/// Matrix of X -> g X g^{-1} on the span of `basis`.
QMatrix adjoint_action(const QMatrix &basis, const QMatrix &g, std::size_t n) {
  QMatrix gi = inverse(g);
  QMatrix images(basis.rows(), basis.cols());
  for (std::size_t k = 0; k < basis.cols(); ++k)
    images.set_block(0, k, vec(g * unvec(basis.column(k), n) * gi));
  return coordinates(basis, images);
}

/// Column basis of the span of the given columns.
QMatrix column_space(const QMatrix &cols) {
  if (cols.cols() == 0) return QMatrix(cols.rows(), 0);
  auto e = rref(cols.transpose());
  QMatrix out(cols.rows(), e.pivots.size());
  for (std::size_t k = 0; k < e.pivots.size(); ++k)
    for (std::size_t i = 0; i < cols.rows(); ++i) out(i, k) = e.reduced(k, i);
  return out;
}

std::size_t eigenspace_dim(const QMatrix &t, const GaussianRational &lambda) {
  CMatrix shifted = to_gaussian(t) - CMatrix::identity(t.rows()) * lambda;
  return t.rows() - rank(shifted);
}

bool cartan_condition(const QMatrix &lie, const QMatrix &h_i, std::size_t n) {
  // derived algebra: span of all brackets
  std::vector<QMatrix> elems;
  for (std::size_t k = 0; k < lie.cols(); ++k) elems.push_back(unvec(lie.column(k), n));
  QMatrix brackets(n * n, elems.size() * (elems.size() - 1) / 2);
  std::size_t c = 0;
  for (std::size_t a = 0; a < elems.size(); ++a)
    for (std::size_t b = a + 1; b < elems.size(); ++b)
      brackets.set_block(0, c++, vec(elems[a] * elems[b] - elems[b] * elems[a]));
  QMatrix der = column_space(brackets);
  const std::size_t k = der.cols();
  if (k == 0) return true;

  QMatrix theta = adjoint_action(der, h_i, n);
  QMatrix plus = nullspace(theta - QMatrix::identity(k));
  QMatrix minus = nullspace(theta + QMatrix::identity(k));
  if (plus.cols() + minus.cols() != k) return false;

  // Killing form tr(ad X ad Y) on the derived algebra
  std::vector<QMatrix> ad;
  for (std::size_t a = 0; a < k; ++a) {
    QMatrix x = unvec(der.column(a), n);
    QMatrix images(n * n, k);
    for (std::size_t b = 0; b < k; ++b) {
      QMatrix y = unvec(der.column(b), n);
      images.set_block(0, b, vec(x * y - y * x));
    }
    ad.push_back(coordinates(der, images));
  }
  QMatrix killing(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) {
      Rational tr = 0;
      QMatrix prod = ad[a] * ad[b];
      for (std::size_t i = 0; i < k; ++i) tr += prod(i, i);
      killing(a, b) = killing(b, a) = tr;
    }
  // On the real form k + i p the Killing form is B|k (+) -B|p.
  auto negdef = [](const QMatrix &g) { return g.rows() == 0 || is_positive_definite(-g); };
  return negdef(plus.transpose() * killing * plus) && negdef(-(minus.transpose() * killing * minus));
}

} // namespace

QMatrix lie_algebra_basis(const GroupTag &group) {
  check_tag(group);
  QMatrix f = form_matrix(group);
  const std::size_t n = f.rows();
  const std::size_t unknowns = n * n + 1;
  std::vector<QMatrix> rows;
  // X^T F + F X - lambda F = 0
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      QMatrix r(1, unknowns);
      for (std::size_t k = 0; k < n; ++k) {
        r(0, k * n + i) += f(k, j);
        r(0, k * n + j) += f(i, k);
      }
      r(0, n * n) = -f(i, j);
      rows.push_back(r);
    }
  if (group.kind == GroupKind::GU) {
    // complex linearity: X commutes with multiplication by i
    QMatrix ji = realify(CMatrix::identity(group.size()) * GaussianRational::i());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        QMatrix r(1, unknowns);
        for (std::size_t k = 0; k < n; ++k) {
          r(0, i * n + k) += ji(k, j);
          r(0, k * n + j) -= ji(i, k);
        }
        rows.push_back(r);
      }
  }
  QMatrix system(rows.size(), unknowns);
  for (std::size_t r = 0; r < rows.size(); ++r) system.set_block(r, 0, rows[r]);
  QMatrix kernel = nullspace(system);
  return kernel.block(0, 0, n * n, kernel.cols());
}

ShimuraDatumSpec::ShimuraDatumSpec(GroupTag group, std::vector<Sample> samples)
    : group_(group), samples_(std::move(samples)) {
  check_tag(group_);
  for (const auto &s : samples_) {
    if (!in_group(group_, real_rep(group_, s.h)))
      throw domain_error("h(" + to_string(s.z) + ") is not in the group");
  }
  for (const auto &a : samples_)
    for (const auto &b : samples_) {
      auto prod = a.z * b.z;
      auto it = std::find_if(samples_.begin(), samples_.end(), [&](const Sample &s) { return s.z == prod; });
      if (it != samples_.end() && !(a.h * b.h == it->h))
        throw domain_error("h is not multiplicative at " + to_string(a.z) + " * " + to_string(b.z));
    }
  at(GaussianRational::i());
  at(circle_point());
}

const CMatrix &ShimuraDatumSpec::at(const GaussianRational &z) const {
  for (const auto &s : samples_)
    if (s.z == z) return s.h;
  throw domain_error("no sample of h at " + to_string(z));
}

ShimuraDatumSpec ShimuraDatumSpec::from_function(GroupTag group,
                                                 const std::function<CMatrix(const GaussianRational &)> &h) {
  std::vector<Sample> samples;
  for (const auto &z : sample_points()) samples.push_back({z, h(z)});
  return ShimuraDatumSpec(group, std::move(samples));
}

ShimuraDatumSpec ShimuraDatumSpec::standard_gsp(std::size_t d) {
  return from_function(GroupTag::gsp(d), [d](const GaussianRational &z) {
    QMatrix m(2 * d, 2 * d);
    for (std::size_t k = 0; k < d; ++k) {
      m(k, k) = m(d + k, d + k) = z.re;
      m(k, d + k) = -z.im;
      m(d + k, k) = z.im;
    }
    return to_gaussian(m);
  });
}

ShimuraDatumSpec ShimuraDatumSpec::standard_gu(std::size_t p, std::size_t q) {
  return from_function(GroupTag::gu(p, q), [p, q](const GaussianRational &z) {
    CMatrix m(p + q, p + q);
    for (std::size_t k = 0; k < p + q; ++k) m(k, k) = k < p ? z : z.conj();
    return m;
  });
}

DatumReport check_shimura_conditions(const ShimuraDatumSpec &spec) {
  DatumReport r;
  const auto &g = spec.group();

  r.weight_central = true;
  for (const auto &s : spec.samples())
    if (s.z.is_real() && !is_scalar(s.h)) r.weight_central = false;

  QMatrix lie = lie_algebra_basis(g);
  const std::size_t n = form_matrix(g).rows();
  r.lie_dimension = lie.cols();

  auto z0 = circle_point();
  QMatrix t = adjoint_action(lie, real_rep(g, spec.at(z0)), n);
  auto ratio = z0 / z0.conj();
  r.dim_minus_one_one = eigenspace_dim(t, ratio);
  r.dim_zero_zero = eigenspace_dim(t, GaussianRational(1));
  r.dim_one_minus_one = eigenspace_dim(t, ratio.conj());
  r.hodge_types = r.dim_minus_one_one + r.dim_zero_zero + r.dim_one_minus_one == r.lie_dimension;

  r.cartan = cartan_condition(lie, real_rep(g, spec.at(GaussianRational::i())), n);
  return r;
}

} // namespace shimura::hodge
