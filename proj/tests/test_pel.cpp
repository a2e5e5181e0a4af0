#include "doctest.h"

#include "shimura/pel.hpp"
#include "support/random.hpp"

using namespace shimura;
using namespace shimura::pel;

namespace {

bool verdict_of(const ValidationReport &r, const std::string &axiom) {
  for (const auto &v : r.verdicts)
    if (v.axiom == axiom) return v.pass;
  FAIL("missing axiom " << axiom);
  return false;
}

// Projector onto the i-eigenspace of h(i): (I - i h(i)) / 2.
CMatrix projector(const PELDatum &d) {
  std::size_t n = d.lattice_rank();
  CMatrix hi = to_gaussian(d.hi);
  return (CMatrix::identity(n) - hi * GaussianRational::i()) * GaussianRational(make_rational(1, 2));
}

CMatrix action_at(const PELDatum &d, const std::vector<GaussianRational> &x) {
  std::size_t n = d.lattice_rank();
  CMatrix a(n, n);
  for (std::size_t j = 0; j < x.size(); ++j) a = a + to_gaussian(to_rational(d.actions[j])) * x[j];
  return a;
}

GaussianRational trace(const CMatrix &m) {
  GaussianRational t;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

Polynomial linear(std::size_t t, std::size_t j, GaussianRational c) {
  std::vector<unsigned> e(t, 0);
  e[j] = 1;
  return Polynomial{{e, c}};
}

Polynomial times(const Polynomial &a, const Polynomial &b) {
  Polynomial out;
  for (auto &[ea, ca] : a)
    for (auto &[eb, cb] : b) {
      auto e = ea;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      out[e] += ca * cb;
      if (out[e].is_zero()) out.erase(e);
    }
  return out;
}

Polynomial plus(Polynomial a, const Polynomial &b) {
  for (auto &[e, c] : b) {
    a[e] += c;
    if (a[e].is_zero()) a.erase(e);
  }
  return a;
}

Polynomial power(const Polynomial &f, std::size_t k, std::size_t t) {
  Polynomial out{{std::vector<unsigned>(t, 0), GaussianRational(1)}};
  for (std::size_t i = 0; i < k; ++i) out = times(out, f);
  return out;
}

IntMatrix random_unimodular(testing::Rng &rng, std::size_t t) {
  IntMatrix u = IntMatrix::identity(t);
  if (t == 1) return rng.uniform(0, 1) ? u : IntMatrix(u * Integer(-1));
  for (int step = 0; step < 6; ++step) {
    std::size_t i = rng.uniform(0, t - 1), j = rng.uniform(0, t - 2);
    if (j >= i) ++j;
    IntMatrix e = IntMatrix::identity(t);
    e(i, j) = rng.uniform(-2, 2);
    u = u * e;
  }
  return u;
}

std::vector<PELDatum> packaged() {
  return {siegel_datum(1), siegel_datum(2), siegel_datum(3), unitary_datum(1, 1),
          unitary_datum(2, 1), unitary_datum(2, 2), unitary_datum(3, 0), quaternion_datum(1)};
}

} // namespace

TEST_CASE("packaged data validate") {
  for (const auto &d : packaged()) {
    auto r = validate_pel(d);
    for (const auto &v : r.verdicts) CHECK_MESSAGE(v.pass, v.axiom << ": " << v.detail);
    CHECK(r.all_pass());
    CHECK(r.verdicts.size() == 9);
  }
}

TEST_CASE("validation flags broken data") {
  auto s = siegel_datum(2);
  s.pairing = s.pairing * Integer(-1);
  auto r = validate_pel(s);
  CHECK_FALSE(verdict_of(r, "h_positive"));
  CHECK(verdict_of(r, "alternating"));
  CHECK(verdict_of(r, "adjoint"));

  auto u = unitary_datum(1, 1);
  u.algebra.involution = IntMatrix::identity(2);
  r = validate_pel(u);
  CHECK_FALSE(verdict_of(r, "positive_involution"));
  CHECK_FALSE(verdict_of(r, "adjoint"));
  CHECK(verdict_of(r, "involution"));

  auto h = unitary_datum(2, 1);
  h.hi = siegel_datum(3).hi;
  r = validate_pel(h);
  CHECK_FALSE(verdict_of(r, "h_morphism"));

  auto m = unitary_datum(1, 1);
  m.actions[1] = m.actions[1] * Integer(2);
  CHECK_FALSE(verdict_of(validate_pel(m), "module"));

  auto a = siegel_datum(1);
  a.algebra.mult[0][0][0] = 2;
  CHECK_FALSE(verdict_of(validate_pel(a), "order"));

  auto bad_shape = siegel_datum(1);
  bad_shape.actions.push_back(IntMatrix::identity(2));
  CHECK_THROWS_AS(validate_pel(bad_shape), Error);
}

TEST_CASE("discriminants and good primes") {
  CHECK(discriminant(siegel_datum(1).algebra) == 1);
  CHECK(discriminant(unitary_datum(1, 1).algebra) == -4);
  CHECK(discriminant(quaternion_datum(1).algebra) == -256);
  for (Integer p : {2, 3, 5, 7, 11}) CHECK(good_prime(siegel_datum(2), p).good);
  auto g = good_prime(unitary_datum(1, 1), 2);
  CHECK_FALSE(g.good);
  CHECK(g.reasons.size() == 2);
  CHECK(good_prime(unitary_datum(1, 1), 3).good);
  auto q = good_prime(quaternion_datum(1), 2);
  CHECK_FALSE(q.good);
  CHECK(q.reasons.back() == "p = 2 with a factor of type D");
  CHECK(good_prime(quaternion_datum(1), 3).good);
  CHECK_THROWS_AS(good_prime(siegel_datum(1), 4), Error);
  for (const auto &d : packaged()) {
    Integer bound = 2;
    bound = std::max(bound, Integer(abs(discriminant(d.algebra))));
    bound = std::max(bound, Integer(abs(determinant(d.pairing))));
    for (Integer p = bound + 1; p < bound + 40; ++p)
      if (mpz_probab_prime_p(p.get_mpz_t(), 30)) CHECK(good_prime(d, p).good);
  }
}

TEST_CASE("reflex traces agree with the projector oracle") {
  for (const auto &d : packaged()) {
    auto res = reflex_traces(d);
    CMatrix proj = projector(d);
    bool rational = true;
    for (std::size_t j = 0; j < d.algebra.rank; ++j) {
      GaussianRational expect = trace(to_gaussian(to_rational(d.actions[j])) * proj);
      CHECK(res.traces[j] == expect);
      rational = rational && expect.is_real();
    }
    CHECK((res.kind == ReflexKind::Rational) == rational);
  }
  CHECK(reflex_traces(siegel_datum(2)).kind == ReflexKind::Rational);
  auto gu21 = reflex_traces(unitary_datum(2, 1));
  CHECK(gu21.kind == ReflexKind::ImaginaryQuadratic);
  CHECK(gu21.discriminant == -4);
  CHECK(gu21.traces[1] == GaussianRational::i());
  CHECK(gu21.traces[0] == GaussianRational(3));
  CHECK(reflex_traces(unitary_datum(1, 1)).kind == ReflexKind::Rational);
  CHECK(reflex_traces(quaternion_datum(1)).kind == ReflexKind::Rational);
}

TEST_CASE("V^{-1,0} dimension check") {
  auto d = siegel_datum(1);
  d.hi = QMatrix::identity(2);
  CHECK_THROWS_AS(hodge_subspace(d), Error);
}

TEST_CASE("determinant polynomial examples") {
  auto s = determinant_polynomial(siegel_datum(1));
  CHECK(s == Polynomial{{{1}, GaussianRational(1)}});
  CHECK(determinant_polynomial(siegel_datum(3)) == Polynomial{{{3}, GaussianRational(1)}});

  auto one = GaussianRational(1), i = GaussianRational::i();
  auto z = plus(linear(2, 0, one), linear(2, 1, i));
  auto zbar = plus(linear(2, 0, one), linear(2, 1, -i));
  CHECK(determinant_polynomial(unitary_datum(1, 1)) == plus(power(linear(2, 0, one), 2, 2), power(linear(2, 1, one), 2, 2)));
  CHECK(determinant_polynomial(unitary_datum(2, 1)) == times(power(z, 2, 2), zbar));
  CHECK(determinant_polynomial(unitary_datum(3, 0)) == power(z, 3, 2));

  Polynomial norm;
  for (std::size_t j = 0; j < 4; ++j) norm = plus(norm, power(linear(4, j, one), 2, 4));
  CHECK(determinant_polynomial(quaternion_datum(1)) == power(norm, 2, 4));
}

TEST_CASE("determinant polynomial matches the projector determinant") {
  testing::Rng rng(41);
  for (const auto &d : packaged()) {
    auto f = determinant_polynomial(d);
    CMatrix proj = projector(d);
    std::size_t n = d.lattice_rank();
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<GaussianRational> x;
      for (std::size_t j = 0; j < d.algebra.rank; ++j) x.push_back(rng.gaussian(4, 3));
      CMatrix m = action_at(d, x) * proj + (CMatrix::identity(n) - proj);
      CHECK(evaluate(f, x) == determinant(m));
    }
    std::vector<GaussianRational> unit(d.algebra.rank);
    auto e = d.algebra.unit();
    REQUIRE(e.has_value());
    for (std::size_t j = 0; j < unit.size(); ++j) unit[j] = GaussianRational(Rational((*e)[j]));
    CHECK(evaluate(f, unit) == GaussianRational(1));
    CHECK(coefficients_integral_away_from(f, bad_primes(d)));
  }
  Polynomial half{{{1}, GaussianRational(make_rational(1, 2))}};
  CHECK(coefficients_integral_away_from(half, {2}));
  CHECK_FALSE(coefficients_integral_away_from(half, {3}));
}

TEST_CASE("reflex verdict and validation are stable under basis change") {
  testing::Rng rng(5);
  for (const auto &d : packaged()) {
    auto base = reflex_traces(d);
    auto f = determinant_polynomial(d);
    for (int trial = 0; trial < 4; ++trial) {
      IntMatrix u = random_unimodular(rng, d.algebra.rank);
      auto moved = change_basis(d, u);
      CHECK(validate_pel(moved).all_pass());
      auto r = reflex_traces(moved);
      CHECK(r.kind == base.kind);
      CHECK(r.discriminant == base.discriminant);
      CHECK(discriminant(moved.algebra) == discriminant(d.algebra));
      // traces transform linearly
      for (std::size_t j = 0; j < d.algebra.rank; ++j) {
        GaussianRational expect;
        for (std::size_t k = 0; k < d.algebra.rank; ++k) expect += base.traces[k] * GaussianRational(Rational(u(k, j)));
        CHECK(r.traces[j] == expect);
      }
      auto e = moved.algebra.unit();
      REQUIRE(e.has_value());
      std::vector<GaussianRational> unit;
      for (auto &c : *e) unit.push_back(GaussianRational(Rational(c)));
      CHECK(evaluate(determinant_polynomial(moved), unit) == GaussianRational(1));
    }
  }
  CHECK_THROWS_AS(change_basis(unitary_datum(1, 1), IntMatrix{{2, 0}, {0, 1}}), Error);
}
