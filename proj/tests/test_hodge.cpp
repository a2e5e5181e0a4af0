#include <doctest.h>

#include "shimura/hodge.hpp"
#include "support/symplectic.hpp"

using namespace shimura;
using namespace shimura::hodge;
using siegel::SiegelPoint;
using shimura::testing::Rng;

namespace {

SiegelPoint iI(std::size_t d) { return SiegelPoint(CMatrix::identity(d) * GaussianRational::i()); }

// Closed form for J(Y), Y = X + iT: [[X T^-1, -T - X T^-1 X], [T^-1, -T^-1 X]].
QMatrix closed_form_j(const CMatrix &y) {
  QMatrix x = real_part(y), t = imag_part(y), ti = inverse(t);
  const std::size_t d = y.rows();
  QMatrix j(2 * d, 2 * d);
  j.set_block(0, 0, x * ti);
  j.set_block(0, d, -t - x * ti * x);
  j.set_block(d, 0, ti);
  j.set_block(d, d, -(ti * x));
  return j;
}

} // namespace

TEST_CASE("jmatrix examples") {
  for (std::size_t d = 1; d <= 3; ++d) {
    QMatrix expect(2 * d, 2 * d);
    expect.set_block(0, d, -QMatrix::identity(d));
    expect.set_block(d, 0, QMatrix::identity(d));
    CHECK(jmatrix_from_point(iI(d)).matrix() == expect);
  }
  SiegelPoint two(CMatrix{{GaussianRational(0, 2)}});
  CHECK(jmatrix_from_point(two).matrix() == QMatrix{{0, -2}, {make_rational(1, 2), 0}});
  // the other sign convention fails at Y = iI
  QMatrix j = jmatrix_from_point(iI(1)).matrix();
  CHECK_FALSE(is_positive_definite(QMatrix(j.transpose() * symplectic_gram(1))));
}

TEST_CASE("J invariants on random points") {
  Rng rng(201);
  for (int t = 0; t < 50; ++t) {
    std::size_t d = static_cast<std::size_t>(rng.uniform(1, 3));
    SiegelPoint y(rng.siegel_point(d));
    auto j = jmatrix_from_point(y);
    CHECK(j.matrix() == closed_form_j(y.matrix()));
    CHECK(j.matrix() * j.matrix() == -QMatrix::identity(2 * d));
    CHECK(j.matrix().transpose() * symplectic_gram(d) * j.matrix() == symplectic_gram(d));
    CHECK(is_positive_definite(j.positivity_gram()));
  }
  CHECK_THROWS_AS(ComplexStructure(QMatrix{{0, 1}, {-1, 0}}), Error); // psi(v, Jv) negative
}

TEST_CASE("lagrangian frames") {
  auto b = lagrangian_from_point(iI(2));
  CHECK(positivity_matrix(b.matrix()) == CMatrix::identity(2) * GaussianRational(2));
  CMatrix nonsym{{GaussianRational::i(), GaussianRational(1)}, {GaussianRational(0), GaussianRational::i()}};
  CHECK_FALSE(isotropy_matrix(frame_of(nonsym)).is_zero());
  CHECK_THROWS_AS(LagrangianFrame(frame_of(nonsym)), Error);

  Rng rng(202);
  for (int t = 0; t < 40; ++t) {
    std::size_t d = static_cast<std::size_t>(rng.uniform(1, 3));
    SiegelPoint y(rng.siegel_point(d));
    CHECK(point_from_lagrangian(lagrangian_from_point(y)) == y);
    // isotropy <-> symmetry, both directions
    CMatrix a = make_complex(rng.rational_matrix(d, d), rng.rational_matrix(d, d));
    CHECK(isotropy_matrix(frame_of(a)).is_zero() == a.is_symmetric());
    CHECK(isotropy_matrix(frame_of(a)) == a.transpose() - a);
  }
  // a rescaled frame normalizes back
  SiegelPoint y(CMatrix{{GaussianRational(1, 2)}});
  auto f = lagrangian_from_point(y).matrix() * GaussianRational(3, -1);
  CHECK(point_from_lagrangian(LagrangianFrame(f)) == y);
}

TEST_CASE("equivariance of the Lagrangian bijection") {
  CHECK(equivariance_check(siegel::SymplecticSimilitude(QMatrix::identity(2)), iI(1)));
  CHECK(equivariance_check(siegel::involution(1), SiegelPoint(CMatrix{{GaussianRational(0, 2)}})));
  Rng rng(203);
  for (int t = 0; t < 40; ++t) {
    std::size_t d = static_cast<std::size_t>(rng.uniform(1, 2));
    CHECK(equivariance_check(testing::random_sp(rng, d), SiegelPoint(rng.siegel_point(d))));
  }
  CHECK_THROWS_AS(equivariance_check(siegel::scaling(1, -1), iI(1)), Error);
}

TEST_CASE("Lie algebra dimensions") {
  CHECK(lie_algebra_basis(GroupTag::gsp(1)).cols() == 4);  // gl_2
  CHECK(lie_algebra_basis(GroupTag::gsp(2)).cols() == 11); // sp_4 + scalars
  CHECK(lie_algebra_basis(GroupTag::gu(1, 1)).cols() == 5);
  CHECK(lie_algebra_basis(GroupTag::gu(2, 1)).cols() == 10);
}

TEST_CASE("Shimura datum conditions") {
  for (std::size_t d = 1; d <= 3; ++d) {
    auto r = check_shimura_conditions(ShimuraDatumSpec::standard_gsp(d));
    CHECK(r.weight_central);
    CHECK(r.hodge_types);
    CHECK(r.cartan);
    CHECK(r.dim_minus_one_one == d * (d + 1) / 2);
    CHECK(r.dim_one_minus_one == d * (d + 1) / 2);
  }
  for (auto [p, q] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 1}, {2, 0}}) {
    auto r = check_shimura_conditions(ShimuraDatumSpec::standard_gu(p, q));
    CHECK(r.weight_central);
    CHECK(r.hodge_types);
    CHECK(r.cartan);
    CHECK(r.dim_minus_one_one == p * q);
  }
  // central weight violated: z -> diag(z conj(z), 1)
  auto bad = ShimuraDatumSpec::from_function(GroupTag::gsp(1), [](const GaussianRational &z) {
    return CMatrix{{GaussianRational(z.norm()), GaussianRational(0)}, {GaussianRational(0), GaussianRational(1)}};
  });
  CHECK_FALSE(check_shimura_conditions(bad).weight_central);
  // not multiplicative
  CHECK_THROWS_AS(ShimuraDatumSpec::from_function(GroupTag::gsp(1),
                                                  [](const GaussianRational &) { return CMatrix{{GaussianRational(2), GaussianRational(0)}, {GaussianRational(0), GaussianRational(1)}}; }),
                  Error);
}
