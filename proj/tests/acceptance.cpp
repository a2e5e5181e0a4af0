// Runs every acceptance criterion and prints one PASS/FAIL line each.

#include "shimura/abvar.hpp"
#include "shimura/finsymp.hpp"
#include "shimura/hodge.hpp"
#include "shimura/pel.hpp"
#include "shimura/siegel.hpp"
#include "shimura/trace.hpp"
#include "shimura/unitary.hpp"
#include "shimura/zeta.hpp"
#include "support/symplectic.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace shimura;
using testing::Rng;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void expect(bool ok, const std::string &what) {
    if (!ok && pass) note << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

// ---- 1-4: Siegel space and complex structures ----------------------------

void cocycle(Outcome &o) {
  Rng rng(1001);
  for (int t = 0; t < 200; ++t) {
    std::size_t d = static_cast<std::size_t>(rng.uniform(1, 3));
    auto g = testing::random_sp(rng, d);
    auto h = testing::random_sp(rng, d);
    siegel::SiegelPoint y(rng.siegel_point(d));
    o.expect(siegel::mobius_act(g * h, y) == siegel::mobius_act(g, siegel::mobius_act(h, y)), "cocycle");
  }
}

void cayley_round_trip(Outcome &o) {
  Rng rng(1002);
  for (int t = 0; t < 100; ++t) {
    std::size_t d = static_cast<std::size_t>(rng.uniform(1, 3));
    siegel::SiegelPoint y(rng.siegel_point(d));
    auto a = siegel::cayley(y);
    CMatrix gap = CMatrix::identity(d) - adjoint(a.matrix()) * a.matrix();
    o.expect(is_positive_definite(gap), "I - A*A positive definite");
    o.expect(siegel::cayley_inv(a) == y, "round trip");
  }
}

void metric_selection(Outcome &o) {
  Rng rng(1003);
  double worst_classical = 0, worst_paper = 0;
  for (int t = 0; t < 100; ++t) {
    std::size_t d = static_cast<std::size_t>(rng.uniform(1, 2));
    auto g = testing::random_sp(rng, d);
    siegel::SiegelPoint y(rng.siegel_point(d));
    CMatrix dy = rng.symmetric_complex(d);
    worst_classical = std::max(worst_classical, siegel::invariance_residual(g, y, dy, siegel::MetricVariant::Classical));
    worst_paper = std::max(worst_paper, siegel::invariance_residual(g, y, dy, siegel::MetricVariant::Paper));
  }
  bool classical = worst_classical < 1e-9, paper = worst_paper < 1e-9;
  o.expect(classical != paper, "exactly one invariant variant");
  o.expect(std::max(worst_classical, worst_paper) > 1e-3, "the other variant exceeds 1e-3");
  std::cout << "selected metric variant: " << (classical ? "classical" : paper ? "paper" : "none")
            << " (max residuals: classical " << worst_classical << ", paper " << worst_paper << ")\n";
}

void complex_structures(Outcome &o) {
  for (std::size_t d = 1; d <= 3; ++d) {
    QMatrix expected(2 * d, 2 * d);
    expected.set_block(0, d, -QMatrix::identity(d));
    expected.set_block(d, 0, QMatrix::identity(d));
    auto j = hodge::jmatrix_from_point(siegel::SiegelPoint(CMatrix::identity(d) * GaussianRational::i()));
    o.expect(j.matrix() == expected, "J(iI)");
  }
  Rng rng(1004);
  for (int t = 0; t < 100; ++t) {
    std::size_t d = static_cast<std::size_t>(rng.uniform(1, 3));
    QMatrix j = hodge::jmatrix_from_point(siegel::SiegelPoint(rng.siegel_point(d))).matrix();
    QMatrix m = symplectic_gram(d);
    o.expect(j * j == -QMatrix::identity(2 * d), "J^2 = -1");
    o.expect(j.transpose() * m * j == m, "J^T M J = M");
    auto cs = hodge::ComplexStructure(j);
    o.expect(is_positive_definite(cs.positivity_gram()), "positivity convention");
  }
}

// ---- 5-8: abelian varieties and finite symplectic groups -----------------

void weil_pairing(Outcome &o) {
  const std::vector<GaussianRational> points{GaussianRational::i(), GaussianRational(make_rational(1, 3), 2),
                                             GaussianRational(make_rational(-2, 5), make_rational(3, 4))};
  for (const auto &z : points)
    for (std::int64_t n = 1; n <= 7; ++n) {
      auto t = abvar::torus_from_point(siegel::SiegelPoint(CMatrix{{z}}), n).torus;
      IntMatrix psi = t.pairing();
      o.expect(t.is_principal(), "principal datum");
      for (std::int64_t a0 = 0; a0 < n; ++a0)
        for (std::int64_t a1 = 0; a1 < n; ++a1)
          for (std::int64_t b0 = 0; b0 < n; ++b0)
            for (std::int64_t b1 = 0; b1 < n; ++b1) {
              std::vector<Integer> a{a0, a1}, b{b0, b1};
              Integer v = psi(0, 0) * a0 * b0 + psi(0, 1) * a0 * b1 + psi(1, 0) * a1 * b0 + psi(1, 1) * a1 * b1;
              o.expect(abvar::weil_pairing_exp(t, n, a, b) == mod(v, n), "exponent = psi mod n");
            }
      // Perfect: the exponent matrix on the basis is invertible mod n.
      std::int64_t e01 = abvar::weil_pairing_exp(t, n, {1, 0}, {0, 1});
      std::int64_t e10 = abvar::weil_pairing_exp(t, n, {0, 1}, {1, 0});
      std::int64_t e00 = abvar::weil_pairing_exp(t, n, {1, 0}, {1, 0});
      std::int64_t e11 = abvar::weil_pairing_exp(t, n, {0, 1}, {0, 1});
      o.expect(gcd64(mod(e00 * e11 - e01 * e10, n), n) == 1 || n == 1, "perfect");
    }
}

// Independent oracle: d-dimensional subspaces of F_p^2d in reduced row echelon
// form, kept when isotropic for M. These are the lattices L with
// p Z^2d < L < Z^2d and psi|L = p * (unimodular), i.e. the cosets of T_p.
using Subspace = std::vector<std::vector<std::int64_t>>;

Subspace rref_mod_p(Subspace rows, std::int64_t p) {
  std::size_t r = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    std::int64_t inv = inv_mod(rows[r][c], p);
    for (auto &x : rows[r]) x = mul_mod(x, inv, p);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i][c] != 0) {
        std::int64_t f = rows[i][c];
        for (std::size_t k = 0; k < cols; ++k) rows[i][k] = mod(rows[i][k] - f * rows[r][k], p);
      }
    ++r;
  }
  rows.resize(r);
  return rows;
}

std::set<Subspace> lagrangian_subspaces(std::size_t d, std::int64_t p) {
  const std::size_t n = 2 * d;
  std::set<Subspace> out;
  // Every d-tuple of vectors; keep the spans of full rank. Small cases only.
  std::int64_t vectors = 1;
  for (std::size_t i = 0; i < n; ++i) vectors *= p;
  std::vector<std::int64_t> idx(d, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == d) {
      Subspace rows;
      for (auto code : idx) {
        std::vector<std::int64_t> v(n);
        for (std::size_t i = 0; i < n; ++i, code /= p) v[i] = code % p;
        rows.push_back(v);
      }
      Subspace r = rref_mod_p(rows, p);
      if (r.size() != d) return;
      for (const auto &u : r)
        for (const auto &w : r) {
          std::int64_t s = 0;
          for (std::size_t i = 0; i < d; ++i) s += u[i] * w[d + i] - u[d + i] * w[i];
          if (mod(s, p) != 0) return;
        }
      out.insert(r);
      return;
    }
    for (std::int64_t c = k == 0 ? 0 : idx[k - 1] + 1; c < vectors; ++c) {
      idx[k] = c;
      rec(k + 1);
    }
  };
  rec(0);
  return out;
}

void hecke_cosets(Outcome &o) {
  auto check = [&](std::size_t d, std::int64_t p, std::size_t expected) {
    // diag(p, 1) for d = 1 and diag(p, p, 1, 1) for d = 2.
    IntMatrix g = IntMatrix::identity(2 * d);
    for (std::size_t i = 0; i < d; ++i) g(i, i) = p;
    auto list = finsymp::double_coset_decompose(d, p, g);
    auto oracle = lagrangian_subspaces(d, p);
    o.expect(list.cosets.size() == expected, "coset count formula");
    o.expect(oracle.size() == expected, "sublattice oracle count");
    std::set<Subspace> found;
    for (const auto &c : list.cosets) {
      Subspace cols;
      for (std::size_t j = 0; j < 2 * d; ++j) {
        std::vector<std::int64_t> v(2 * d);
        for (std::size_t i = 0; i < 2 * d; ++i) v[i] = mod(c.lattice(i, j), p);
        cols.push_back(v);
      }
      found.insert(rref_mod_p(cols, p));
    }
    o.expect(found == oracle, "coset lattices equal the oracle's sublattices");
  };
  for (std::int64_t p : {2, 3, 5}) check(1, p, static_cast<std::size_t>(p + 1));
  for (std::int64_t p : {2, 3}) check(2, p, static_cast<std::size_t>(1 + p + p * p + p * p * p));
}

void finite_orders_and_lifts(Outcome &o) {
  auto sp2 = finsymp::enumerate_sp(1, 2);
  auto sp4 = finsymp::enumerate_sp(2, 2);
  o.expect(sp2.size() == 6 && finsymp::sp_order(1, 2) == 6, "|Sp2(Z/2)| = 6");
  o.expect(sp4.size() == 720 && finsymp::sp_order(2, 2) == 720, "|Sp4(F2)| = 720");
  for (std::int64_t n : {2, 3}) {
    auto e = finsymp::enumerate_sp(1, n);
    o.expect(Integer(static_cast<long>(e.size())) == finsymp::sp_order(1, n), "order formula");
    IntMatrix m = to_integer(symplectic_gram(1));
    for (std::size_t k = 0; k < e.size(); ++k) {
      auto g = finsymp::validate(e.element(k), n);
      IntMatrix lift = finsymp::lift_to_integral(g);
      o.expect(lift.transpose() * m * lift == m, "lift is integral symplectic");
      o.expect(finsymp::validate(lift, n).g == g.g, "lift reduces back");
    }
  }
}

void component_group(Outcome &o) {
  for (std::int64_t n : {3, 4, 5}) {
    // Brute-force multiplier fibers over all 2 x 2 matrices mod n.
    std::map<std::int64_t, long> fibers;
    for (std::int64_t a = 0; a < n; ++a)
      for (std::int64_t b = 0; b < n; ++b)
        for (std::int64_t c = 0; c < n; ++c)
          for (std::int64_t d = 0; d < n; ++d) {
            std::int64_t det = mod(a * d - b * c, n);
            if (gcd64(det, n) == 1) ++fibers[det];
          }
    auto units = finsymp::units_mod(n);
    o.expect(fibers.size() == units.size(), "fibers indexed by units");
    for (auto u : units) {
      o.expect(fibers[u] == fibers[1], "equinumerous fibers");
      o.expect(static_cast<long>(finsymp::enumerate_fiber(1, n, u).size()) == fibers[u], "enumerated fiber");
      IntMatrix s = finsymp::adjusted_section(1, u);
      IntMatrix m = to_integer(symplectic_gram(1));
      o.expect(s.transpose() * m * s == m * Integer(u), "c(s(alpha)) = alpha");
      o.expect(finsymp::validate(s, n).c == u, "section multiplier mod n");
    }
  }
}

// ---- 9-10: Galois cohomology and inner forms ------------------------------

void galois_cohomology(Outcome &o) {
  for (std::size_t total = 1; total <= 10; ++total)
    for (std::size_t p = 0; p <= total; ++p) {
      std::size_t q = total - p;
      o.expect(unitary::orbit_decomposition(p, q).size() == total + 1, "p + q + 1 orbits");
      std::vector<unitary::SignVector> expected;
      for (std::uint32_t xi = 0; xi < (1u << total); ++xi) {
        unitary::SignVector v(p, q, xi);
        if (v.p_xi() == v.q_xi()) expected.push_back(v);
      }
      auto kernel = unitary::kernel_to_G(p, q);
      std::sort(kernel.begin(), kernel.end());
      o.expect(kernel == expected, "kernel = {p_Xi = q_Xi}");
    }
  for (std::size_t p = 1; p < 6; ++p)
    for (std::size_t q = 1; p + q <= 6; ++q)
      for (std::uint32_t xi = 0; xi < (1u << (p + q)); ++xi) {
        unitary::SignVector v(p, q, xi);
        o.expect(unitary::sigma_action(v) == unitary::sigma_oracle(v), "sigma rule = matrix oracle");
      }
}

void inner_forms(Outcome &o) {
  using unitary::LocalInnerFormDatum;
  using unitary::PlaceKind;
  LocalInnerFormDatum real20{PlaceKind::Real, 2, 0, 1, true};
  LocalInnerFormDatum twisted{PlaceKind::FiniteNonsplit, 0, 0, 1, false};
  o.expect(!unitary::global_exists({real20}, 2), "{real (2,0)} rejected");
  o.expect(unitary::global_exists({real20, twisted}, 2), "{real (2,0), non-quasi-split} accepted");
  for (std::size_t n : {1, 3, 5, 7})
    for (std::size_t p = 0; p <= n; ++p) {
      LocalInnerFormDatum real{PlaceKind::Real, p, n - p, 1, true};
      LocalInnerFormDatum split{PlaceKind::FiniteSplit, 0, 0, n, true};
      o.expect(unitary::global_exists({real}, n), "odd n accepted");
      o.expect(unitary::global_exists({real, twisted, split}, n), "odd n accepted");
      o.expect(unitary::global_exists({real, twisted, twisted}, n), "odd n accepted");
    }
}

// ---- 11-13: PEL data, zeta functions, trace formula ------------------------

void pel_data(Outcome &o) {
  for (std::size_t d = 1; d <= 3; ++d) o.expect(pel::validate_pel(pel::siegel_datum(d)).all_pass(), "siegel datum");
  for (auto [p, q] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 1}, {2, 2}})
    o.expect(pel::validate_pel(pel::unitary_datum(p, q)).all_pass(), "unitary datum");
  o.expect(pel::validate_pel(pel::quaternion_datum(1)).all_pass(), "quaternion datum");
  o.expect(pel::reflex_traces(pel::siegel_datum(2)).kind == pel::ReflexKind::Rational, "siegel reflex Q");
  o.expect(pel::reflex_traces(pel::unitary_datum(2, 1)).kind == pel::ReflexKind::ImaginaryQuadratic, "GU(2,1) reflex E");
  o.expect(pel::reflex_traces(pel::unitary_datum(1, 1)).kind == pel::ReflexKind::Rational, "GU(1,1) reflex Q");
}

void zeta_pipeline(Outcome &o) {
  zeta::VarietySpec e;
  e.ambient = zeta::Ambient::Projective;
  e.dim = 2;
  e.p = 5;
  e.equations = {{{1, {0, 2, 1}}, {-1, {3, 0, 0}}, {-1, {1, 0, 2}}}};
  auto raw = zeta::count_series(e, 4);
  std::vector<Integer> counts;
  for (auto c : raw) counts.push_back(Integer(static_cast<long>(c)));
  auto z = zeta::rational_recovery(zeta::zeta_series(counts, 4), 2, 2);
  Integer a = 6 - counts[0];
  o.expect(z.p == std::vector<Integer>{1, -a, 5}, "P = 1 - aT + 5T^2");
  o.expect(z.q == std::vector<Integer>{1, -6, 5}, "Q = (1 - T)(1 - 5T)");
  for (std::size_t r = 1; r <= 4; ++r)
    o.expect(zeta::lefschetz_consistency(z, std::vector<Integer>(counts.begin(), counts.begin() + r)), "Lefschetz");
  o.expect(zeta::functional_equation_holds(z.p, 5), "functional equation");
  std::cout << "E/F_5 counts:";
  for (const auto &c : counts) std::cout << ' ' << c;
  std::cout << ", a = " << a << '\n';
}

void trace_identity(Outcome &o) {
  Rng rng(1013);
  for (const auto &entry : trace::catalog()) {
    const auto &g = entry.group;
    if (g.order() > 200) continue;
    for (int t = 0; t < 50; ++t) {
      trace::TestFunction f(g.order());
      for (auto &x : f) x = rng.rational(6, 5);
      Rational direct = trace::direct_trace(g, f);
      o.expect(direct == trace::geometric_side(g, f), "direct = geometric for " + entry.name);
      if (g.is_abelian() && g.order() <= 64)
        o.expect(direct == trace::spectral_side_abelian(g, f), "direct = spectral for " + entry.name);
    }
  }
}

struct Criterion {
  int id;
  std::string name;
  std::function<void(Outcome &)> body;
  double limit_seconds = 0; // 0: no runtime bound
};

} // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Siegel action cocycle law, 200 triples", cocycle, 10},
      {2, "Cayley round trip, 100 points", cayley_round_trip},
      {3, "metric-invariance selection, 100 tests", metric_selection},
      {4, "J at iI and J invariants, 100 points", complex_structures},
      {5, "Weil pairing exponents and perfectness", weil_pairing},
      {6, "Hecke coset counts vs sublattice enumeration", hecke_cosets, 60},
      {7, "Sp orders and integral lifts", finite_orders_and_lifts},
      {8, "multiplier fibers and adjusted section", component_group},
      {9, "H^1 orbits, kernel sets, sigma rule", galois_cohomology},
      {10, "inner-form gluing", inner_forms},
      {11, "PEL validation and reflex verdicts", pel_data},
      {12, "zeta pipeline for E over F_5", zeta_pipeline, 30},
      {13, "trace identity on the catalog", trace_identity},
  };
  int failures = 0;
  for (const auto &c : criteria) {
    Outcome o;
    auto start = Clock::now();
    try {
      c.body(o);
    } catch (const std::exception &e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.limit_seconds > 0) o.expect(secs < c.limit_seconds, "runtime bound");
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << " (" << secs << " s)";
    if (!o.pass) std::cout << "  " << o.note.str();
    std::cout << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria pass\n";
  return failures == 0 ? 0 : 1;
}
