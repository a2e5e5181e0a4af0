#include <doctest.h>

#include "shimura/siegel.hpp"
#include "support/symplectic.hpp"

using namespace shimura;
using namespace shimura::siegel;
using shimura::testing::Rng;

namespace {

GaussianRational gi(long re, long im) { return {Rational(re), Rational(im)}; }

SiegelPoint scalar_point(const GaussianRational &z) { return SiegelPoint(CMatrix{{z}}); }

} // namespace

TEST_CASE("siegel point validation") {
  CHECK(scalar_point(gi(0, 1)).component() == Component::Upper);
  CHECK(scalar_point(gi(3, -2)).component() == Component::Lower);
  CHECK_THROWS_AS(scalar_point(gi(1, 0)), Error);
  CHECK_THROWS_AS(SiegelPoint(CMatrix{{gi(0, 1), gi(1, 0)}, {gi(0, 0), gi(0, 1)}}), Error);
  CHECK_THROWS_AS(SymplecticSimilitude(QMatrix{{1, 1}, {1, 1}}), Error);
  CHECK(SymplecticSimilitude(QMatrix{{2, 0}, {0, 3}}).multiplier() == 6);
}

TEST_CASE("mobius_act examples") {
  SiegelPoint i = scalar_point(gi(0, 1));
  CHECK(mobius_act(SymplecticSimilitude(QMatrix::identity(2)), i) == i);
  CHECK(mobius_act(SymplecticSimilitude(QMatrix{{0, 1}, {-1, 0}}), i) == i);
  CHECK(mobius_act(SymplecticSimilitude(QMatrix{{1, 5}, {0, 1}}), i) == scalar_point(gi(5, 1)));
  auto flipped = mobius_act(scaling(1, -1), i);
  CHECK(flipped.component() == Component::Lower);
  CHECK(flipped == scalar_point(gi(0, -1)));
}

TEST_CASE("cocycle law and membership on random triples") {
  Rng rng(101);
  for (int t = 0; t < 60; ++t) {
    std::size_t d = static_cast<std::size_t>(rng.uniform(1, 3));
    auto g = testing::random_sp(rng, d);
    auto h = testing::random_sp(rng, d);
    SiegelPoint y(rng.siegel_point(d));
    auto hy = mobius_act(h, y);
    CHECK(hy.component() == Component::Upper);
    CHECK(mobius_act(g * h, y) == mobius_act(g, hy));
  }
}

TEST_CASE("cayley examples and round trip") {
  CHECK(cayley(SiegelPoint(CMatrix::identity(2) * GaussianRational::i())).matrix().is_zero());
  CHECK(cayley(scalar_point(gi(0, 2))).matrix() == CMatrix{{GaussianRational(make_rational(-1, 3))}});
  CHECK_THROWS_AS(cayley(scalar_point(gi(0, -1))), Error);
  CHECK_THROWS_AS(BoundedPoint(CMatrix{{gi(1, 0)}}), Error);
  Rng rng(102);
  for (int t = 0; t < 50; ++t) {
    std::size_t d = static_cast<std::size_t>(rng.uniform(1, 3));
    SiegelPoint y(rng.siegel_point(d));
    CHECK(cayley_inv(cayley(y)) == y);
  }
}

TEST_CASE("metric examples") {
  SiegelPoint i = scalar_point(gi(0, 1));
  CHECK(metric_form(SiegelPoint(CMatrix::identity(2) * GaussianRational::i()), CMatrix(2, 2),
                    MetricVariant::Classical) == 0);
  CHECK(metric_form(i, CMatrix{{gi(1, 0)}}, MetricVariant::Classical) == 1);
  CHECK(metric_form(scalar_point(gi(0, 2)), CMatrix{{gi(1, 0)}}, MetricVariant::Paper) == 0.125);
  CHECK_THROWS_AS(metric_form(i, CMatrix(2, 2), MetricVariant::Paper), Error);

  // At Y = i the inversion has Im Y = 1 on both sides, so neither variant is separated.
  auto s = involution(1);
  CMatrix one{{gi(1, 0)}};
  CHECK(invariance_residual(s, i, one, MetricVariant::Classical) == 0);
  CHECK(invariance_residual(s, i, one, MetricVariant::Paper) == 0);
  // At Y = 2i the Im(Y)^-2 variant gives 1/8 before and 1/2 after.
  SiegelPoint two = scalar_point(gi(0, 2));
  CHECK(invariance_residual(s, two, one, MetricVariant::Classical) == 0);
  CHECK(invariance_residual(s, two, one, MetricVariant::Paper) == doctest::Approx(0.375));
}

TEST_CASE("pushforward matches (CY+D)^-T dY (CY+D)^-1 on Sp") {
  Rng rng(103);
  for (int t = 0; t < 30; ++t) {
    std::size_t d = static_cast<std::size_t>(rng.uniform(1, 2));
    auto g = testing::random_sp(rng, d);
    SiegelPoint y(rng.siegel_point(d));
    CMatrix dy = rng.symmetric_complex(d);
    CMatrix j = to_gaussian(g.c()) * y.matrix() + to_gaussian(g.dblock());
    CMatrix ji = inverse(j);
    CHECK(pushforward(g, y, dy) == ji.transpose() * dy * ji);
  }
}

TEST_CASE("K_infinity and the unitary embedding") {
  CHECK(embed_ud(QMatrix::identity(2), QMatrix(2, 2)).matrix() == QMatrix::identity(4));
  auto s = embed_ud(QMatrix{{0}}, QMatrix{{1}});
  CHECK(s.matrix() == QMatrix{{0, 1}, {-1, 0}});
  CHECK(in_Kinfty(s));
  auto r = embed_ud(QMatrix{{make_rational(3, 5)}}, QMatrix{{make_rational(4, 5)}});
  CHECK(in_Kinfty(r));
  CHECK(mobius_act(r, scalar_point(gi(0, 1))) == scalar_point(gi(0, 1)));
  CHECK_THROWS_AS(embed_ud(QMatrix{{1}}, QMatrix{{1}}), Error);
  CHECK_FALSE(in_Kinfty(translation(QMatrix{{1}})));
  CHECK_FALSE(in_Kinfty(scaling(1, -1)));
}
