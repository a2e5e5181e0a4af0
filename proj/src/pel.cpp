#include "shimura/pel.hpp"

#include "shimura/core/scalar.hpp"

#include <algorithm>
#include <functional>

namespace shimura::pel {

namespace {

using Vec = std::vector<Integer>;

Vec basis_vector(std::size_t t, std::size_t i) {
  Vec v(t, 0);
  v[i] = 1;
  return v;
}

IntMatrix combine(const std::vector<IntMatrix> &ms, const Vec &coeffs) {
  IntMatrix out(ms.front().rows(), ms.front().cols());
  for (std::size_t j = 0; j < ms.size(); ++j)
    if (coeffs[j] != 0) out = out + ms[j] * coeffs[j];
  return out;
}

IntMatrix from_blocks(std::size_t n, std::size_t b, const std::function<IntMatrix(std::size_t, std::size_t)> &f) {
  IntMatrix out(n * b, n * b);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out.set_block(r * b, c * b, f(r, c));
  return out;
}

std::vector<Integer> prime_factors(Integer n) {
  std::vector<Integer> out;
  if (n < 0) n = -n;
  if (n == 0) return out;
  for (Integer p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool denominator_supported(Integer den, const std::vector<Integer> &primes) {
  for (const auto &p : primes)
    while (den % p == 0) den /= p;
  return den == 1;
}

void add_to(Polynomial &f, const std::vector<unsigned> &e, const GaussianRational &c) {
  if (c.is_zero()) return;
  auto [it, inserted] = f.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) f.erase(it);
  }
}

Polynomial multiply(const Polynomial &a, const Polynomial &b) {
  Polynomial out;
  for (const auto &[ea, ca] : a)
    for (const auto &[eb, cb] : b) {
      std::vector<unsigned> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      add_to(out, e, ca * cb);
    }
  return out;
}

void verdict(ValidationReport &r, std::string axiom, bool pass, std::string detail = "") {
  r.verdicts.push_back({std::move(axiom), pass, std::move(detail)});
}

} // namespace

Vec FiniteAlgebra::multiply(const Vec &x, const Vec &y) const {
  Vec out(rank, 0);
  for (std::size_t i = 0; i < rank; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < rank; ++j) {
      if (y[j] == 0) continue;
      Integer xy = x[i] * y[j];
      for (std::size_t k = 0; k < rank; ++k) out[k] += xy * mult[i][j][k];
    }
  }
  return out;
}

Vec FiniteAlgebra::star(const Vec &x) const {
  Vec out(rank, 0);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j) out[i] += involution(i, j) * x[j];
  return out;
}

std::optional<Vec> FiniteAlgebra::unit() const {
  // e alpha_j = alpha_j and alpha_j e = alpha_j for all j.
  QMatrix a(2 * rank * rank, rank), b(2 * rank * rank, 1);
  for (std::size_t j = 0; j < rank; ++j)
    for (std::size_t k = 0; k < rank; ++k) {
      std::size_t row = j * rank + k;
      for (std::size_t i = 0; i < rank; ++i) {
        a(row, i) = Rational(mult[i][j][k]);
        a(rank * rank + row, i) = Rational(mult[j][i][k]);
      }
      b(row, 0) = b(rank * rank + row, 0) = Rational(j == k ? 1 : 0);
    }
  auto sol = solve(a, b);
  if (!sol) return std::nullopt;
  Vec e(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    if ((*sol)(i, 0).get_den() != 1) return std::nullopt;
    e[i] = (*sol)(i, 0).get_num();
  }
  return e;
}

IntMatrix FiniteAlgebra::left_multiplication(std::size_t i) const {
  IntMatrix out(rank, rank);
  for (std::size_t j = 0; j < rank; ++j)
    for (std::size_t k = 0; k < rank; ++k) out(k, j) = mult[i][j][k];
  return out;
}

Integer FiniteAlgebra::trace(const Vec &x) const {
  Integer t = 0;
  for (std::size_t i = 0; i < rank; ++i) {
    if (x[i] == 0) continue;
    Integer ti = 0;
    for (std::size_t j = 0; j < rank; ++j) ti += mult[i][j][j];
    t += x[i] * ti;
  }
  return t;
}

void PELDatum::check_shapes() const {
  const std::size_t t = algebra.rank;
  if (t == 0) throw shape_error("algebra rank must be positive");
  if (algebra.mult.size() != t) throw shape_error("multiplication table must be t x t x t");
  for (const auto &row : algebra.mult) {
    if (row.size() != t) throw shape_error("multiplication table must be t x t x t");
    for (const auto &v : row)
      if (v.size() != t) throw shape_error("multiplication table must be t x t x t");
  }
  if (algebra.involution.rows() != t || algebra.involution.cols() != t) throw shape_error("involution must be t x t");
  const std::size_t n = pairing.rows();
  if (n == 0 || n % 2 != 0 || pairing.cols() != n) throw shape_error("pairing must be 2N x 2N");
  if (actions.size() != t) throw shape_error("one action matrix per basis element");
  for (const auto &a : actions)
    if (a.rows() != n || a.cols() != n) throw shape_error("action matrices must be 2N x 2N");
  if (h1.rows() != n || h1.cols() != n || hi.rows() != n || hi.cols() != n)
    throw shape_error("h(1) and h(i) must be 2N x 2N");
}

bool ValidationReport::all_pass() const {
  for (const auto &v : verdicts)
    if (!v.pass) return false;
  return true;
}

ValidationReport validate_pel(const PELDatum &d) {
  d.check_shapes();
  ValidationReport r;
  const auto &alg = d.algebra;
  const std::size_t t = alg.rank;

  bool assoc = true;
  for (std::size_t i = 0; i < t && assoc; ++i)
    for (std::size_t j = 0; j < t && assoc; ++j)
      for (std::size_t k = 0; k < t && assoc; ++k) {
        Vec a = basis_vector(t, i), b = basis_vector(t, j), c = basis_vector(t, k);
        assoc = alg.multiply(alg.multiply(a, b), c) == alg.multiply(a, alg.multiply(b, c));
      }
  auto e = alg.unit();
  verdict(r, "order", assoc && e.has_value(), !assoc ? "not associative" : (!e ? "no integral unit" : ""));

  bool order_two = alg.involution * alg.involution == IntMatrix::identity(t);
  bool anti = true;
  for (std::size_t i = 0; i < t && anti; ++i)
    for (std::size_t j = 0; j < t && anti; ++j) {
      Vec a = basis_vector(t, i), b = basis_vector(t, j);
      anti = alg.star(alg.multiply(a, b)) == alg.multiply(alg.star(b), alg.star(a));
    }
  verdict(r, "involution", order_two && anti, !order_two ? "* does not square to the identity" : (!anti ? "* is not an anti-automorphism" : ""));

  QMatrix gram(t, t);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j)
      gram(i, j) = Rational(alg.trace(alg.multiply(basis_vector(t, i), alg.star(basis_vector(t, j)))));
  bool positive = gram.is_symmetric() && is_positive_definite(gram);
  verdict(r, "positive_involution", positive, positive ? "" : "Tr(x x^*) is not positive definite");

  bool rep = true;
  for (std::size_t i = 0; i < t && rep; ++i)
    for (std::size_t j = 0; j < t && rep; ++j)
      rep = d.actions[i] * d.actions[j] == combine(d.actions, alg.multiply(basis_vector(t, i), basis_vector(t, j)));
  if (rep && e) rep = combine(d.actions, *e) == IntMatrix::identity(d.lattice_rank());
  verdict(r, "module", rep, rep ? "" : "actions do not form a unital representation");

  bool alternating = true;
  for (std::size_t i = 0; i < d.lattice_rank(); ++i)
    for (std::size_t j = 0; j < d.lattice_rank(); ++j)
      if (d.pairing(i, j) != -d.pairing(j, i)) alternating = false;
  verdict(r, "alternating", alternating, alternating ? "" : "pairing is not alternating");

  bool adjoint = true;
  for (std::size_t j = 0; j < t && adjoint; ++j)
    adjoint = d.actions[j].transpose() * d.pairing == d.pairing * combine(d.actions, alg.star(basis_vector(t, j)));
  verdict(r, "adjoint", adjoint, adjoint ? "" : "<bx, y> != <x, b^* y>");

  const std::size_t n = d.lattice_rank();
  bool h_ok = d.h1 == QMatrix::identity(n) && d.hi * d.hi == QMatrix::identity(n) * Rational(-1);
  for (const auto &a : d.actions) h_ok = h_ok && to_rational(a) * d.hi == d.hi * to_rational(a);
  verdict(r, "h_morphism", h_ok, h_ok ? "" : "h(1) != I, h(i)^2 != -I, or h(i) is not O-linear");

  QMatrix p = to_rational(d.pairing);
  bool sym = d.hi.transpose() * p == (p * d.hi) * Rational(-1) && d.h1.transpose() * p == p * d.h1;
  verdict(r, "h_symmetric", sym, sym ? "" : "<h(z)x, y> != <x, h(conj z)y>");

  QMatrix form = p * d.hi;
  bool pd = form.is_symmetric() && is_positive_definite(form);
  verdict(r, "h_positive", pd, pd ? "" : "<x, h(i)y> is not positive definite");
  return r;
}

Integer discriminant(const FiniteAlgebra &a) {
  IntMatrix gram(a.rank, a.rank);
  for (std::size_t i = 0; i < a.rank; ++i)
    for (std::size_t j = 0; j < a.rank; ++j)
      gram(i, j) = a.trace(a.multiply(basis_vector(a.rank, i), basis_vector(a.rank, j)));
  return determinant(gram);
}

PrimeVerdict good_prime(const PELDatum &d, const Integer &p) {
  d.check_shapes();
  if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0) throw domain_error("good_prime needs a prime");
  PrimeVerdict v;
  Integer disc = discriminant(d.algebra);
  if (disc % p == 0) {
    v.good = false;
    v.reasons.push_back("p divides disc(O) = " + disc.get_str());
  }
  Integer index = abs(determinant(d.pairing));
  if (index % p == 0) {
    v.good = false;
    v.reasons.push_back("p divides [Lambda^v : Lambda] = " + index.get_str());
  }
  if (d.type_d && p == 2) {
    v.good = false;
    v.reasons.push_back("p = 2 with a factor of type D");
  }
  return v;
}

std::vector<Integer> bad_primes(const PELDatum &d) {
  std::vector<Integer> out = prime_factors(discriminant(d.algebra));
  for (const auto &p : prime_factors(determinant(d.pairing))) out.push_back(p);
  if (d.type_d) out.push_back(2);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CMatrix hodge_subspace(const PELDatum &d) {
  d.check_shapes();
  const std::size_t n = d.lattice_rank();
  CMatrix shifted = to_gaussian(d.hi) - CMatrix::identity(n) * GaussianRational::i();
  CMatrix w = nullspace(shifted);
  if (w.cols() != n / 2)
    throw degeneracy_error("V^{-1,0} has dimension " + std::to_string(w.cols()) + ", expected " + std::to_string(n / 2));
  return w;
}

namespace {

std::vector<CMatrix> restricted_actions(const PELDatum &d, const CMatrix &w) {
  std::vector<CMatrix> out;
  for (const auto &a : d.actions) {
    auto r = solve(w, to_gaussian(to_rational(a)) * w);
    if (!r) throw degeneracy_error("V^{-1,0} is not stable under the order");
    out.push_back(*r);
  }
  return out;
}

} // namespace

ReflexResult reflex_traces(const PELDatum &d) {
  CMatrix w = hodge_subspace(d);
  ReflexResult out;
  for (const auto &r : restricted_actions(d, w)) {
    GaussianRational tr;
    for (std::size_t k = 0; k < r.rows(); ++k) tr += r(k, k);
    out.traces.push_back(tr);
    // The traces lie in Q(i); one non-real trace generates all of it.
    if (!tr.is_real()) {
      out.kind = ReflexKind::ImaginaryQuadratic;
      out.discriminant = -4;
    }
  }
  return out;
}

Polynomial determinant_polynomial(const PELDatum &d) {
  CMatrix w = hodge_subspace(d);
  auto rs = restricted_actions(d, w);
  const std::size_t t = d.algebra.rank, m = w.cols();
  if (m > 20) throw resource_error("V^{-1,0} too large for the expansion");
  std::vector<std::vector<Polynomial>> entry(m, std::vector<Polynomial>(m));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t j = 0; j < t; ++j) {
        std::vector<unsigned> e(t, 0);
        e[j] = 1;
        add_to(entry[r][c], e, rs[j](r, c));
      }
  // Expansion over columns; dp[mask] sums signed products over the rows in mask.
  std::vector<Polynomial> dp(std::size_t{1} << m);
  dp[0][std::vector<unsigned>(t, 0)] = GaussianRational(1);
  for (std::size_t mask = 0; mask < dp.size(); ++mask) {
    if (dp[mask].empty()) continue;
    std::size_t c = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (c == m) continue;
    for (std::size_t r = 0; r < m; ++r) {
      if (mask >> r & 1u) continue;
      Polynomial term = multiply(dp[mask], entry[r][c]);
      bool odd = __builtin_popcountll(mask >> (r + 1)) % 2;
      for (const auto &[e, coef] : term) add_to(dp[mask | (std::size_t{1} << r)], e, odd ? -coef : coef);
    }
    if (c > 0) dp[mask].clear();
  }
  return dp.back();
}

GaussianRational evaluate(const Polynomial &f, const std::vector<GaussianRational> &x) {
  GaussianRational out;
  for (const auto &[e, c] : f) {
    if (e.size() != x.size()) throw shape_error("evaluation point has the wrong number of variables");
    GaussianRational term = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (unsigned k = 0; k < e[i]; ++k) term *= x[i];
    out += term;
  }
  return out;
}

bool coefficients_integral_away_from(const Polynomial &f, const std::vector<Integer> &primes) {
  for (const auto &[e, c] : f)
    if (!denominator_supported(c.re.get_den(), primes) || !denominator_supported(c.im.get_den(), primes)) return false;
  return true;
}

PELDatum change_basis(const PELDatum &d, const IntMatrix &u) {
  d.check_shapes();
  const std::size_t t = d.algebra.rank;
  if (u.rows() != t || u.cols() != t) throw shape_error("basis change must be t x t");
  Integer det = determinant(u);
  if (det != 1 && det != -1) throw domain_error("basis change is not unimodular");
  IntMatrix uinv = to_integer(inverse(to_rational(u)));
  auto old_coords = [&](std::size_t j) {
    Vec v(t);
    for (std::size_t i = 0; i < t; ++i) v[i] = u(i, j);
    return v;
  };
  auto new_coords = [&](const Vec &v) {
    Vec out(t, 0);
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t k = 0; k < t; ++k) out[i] += uinv(i, k) * v[k];
    return out;
  };
  PELDatum out = d;
  for (std::size_t a = 0; a < t; ++a)
    for (std::size_t b = 0; b < t; ++b) out.algebra.mult[a][b] = new_coords(d.algebra.multiply(old_coords(a), old_coords(b)));
  out.algebra.involution = uinv * d.algebra.involution * u;
  for (std::size_t j = 0; j < t; ++j) out.actions[j] = combine(d.actions, old_coords(j));
  return out;
}

PELDatum siegel_datum(std::size_t d) {
  if (d == 0) throw domain_error("siegel datum needs d >= 1");
  PELDatum out;
  out.algebra.rank = 1;
  out.algebra.mult = {{{Integer(1)}}};
  out.algebra.involution = IntMatrix::identity(1);
  out.actions = {IntMatrix::identity(2 * d)};
  out.pairing = symplectic_gram<Integer>(d);
  out.h1 = QMatrix::identity(2 * d);
  out.hi = symplectic_gram(d) * Rational(-1);
  return out;
}

PELDatum unitary_datum(std::size_t p, std::size_t q) {
  const std::size_t n = p + q;
  if (n == 0) throw domain_error("unitary datum needs p + q >= 1");
  PELDatum out;
  auto &alg = out.algebra;
  alg.rank = 2;
  alg.mult = {{{1, 0}, {0, 1}}, {{0, 1}, {-1, 0}}};
  alg.involution = IntMatrix{{1, 0}, {0, -1}};
  IntMatrix rot{{0, -1}, {1, 0}};
  IntMatrix zero(2, 2);
  out.actions = {IntMatrix::identity(2 * n),
                 from_blocks(n, 2, [&](std::size_t r, std::size_t c) { return r == c ? rot : zero; })};
  // <x, y> = Tr(i h_k x conj(y)) = 2 h_k (a d - b c) on x = a + bi, y = c + di.
  out.pairing = from_blocks(n, 2, [&](std::size_t r, std::size_t c) {
    if (r != c) return zero;
    Integer h = r < p ? 2 : -2;
    return IntMatrix{{0, h}, {-h, 0}};
  });
  out.h1 = QMatrix::identity(2 * n);
  out.hi = to_rational(from_blocks(n, 2, [&](std::size_t r, std::size_t c) {
    if (r != c) return zero;
    return r < p ? rot : IntMatrix(rot * Integer(-1));
  }));
  return out;
}

PELDatum quaternion_datum(std::size_t n) {
  if (n == 0) throw domain_error("quaternion datum needs n >= 1");
  PELDatum out;
  auto &alg = out.algebra;
  alg.rank = 4;
  // basis 1, i, j, k; table[a][b] = (sign, index) of alpha_a alpha_b
  const int table[4][4][2] = {{{1, 0}, {1, 1}, {1, 2}, {1, 3}},
                              {{1, 1}, {-1, 0}, {1, 3}, {-1, 2}},
                              {{1, 2}, {-1, 3}, {-1, 0}, {1, 1}},
                              {{1, 3}, {1, 2}, {-1, 1}, {-1, 0}}};
  alg.mult.assign(4, std::vector<Vec>(4, Vec(4, 0)));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) alg.mult[a][b][table[a][b][1]] = table[a][b][0];
  alg.involution = IntMatrix{{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}};
  const std::size_t comps = 2 * n;
  IntMatrix zero(4, 4);
  for (std::size_t a = 0; a < 4; ++a) {
    IntMatrix l = alg.left_multiplication(a);
    out.actions.push_back(from_blocks(comps, 4, [&](std::size_t r, std::size_t c) { return r == c ? l : zero; }));
  }
  // Tr(u v^*) on basis elements is 4 delta; <x, y> = sum_k Tr(x_k y_{k+n}^* - x_{k+n} y_k^*).
  IntMatrix g = IntMatrix::identity(4) * Integer(4);
  out.pairing = from_blocks(comps, 4, [&](std::size_t r, std::size_t c) {
    if (r < n && c == r + n) return g;
    if (r >= n && c + n == r) return IntMatrix(g * Integer(-1));
    return zero;
  });
  out.h1 = QMatrix::identity(4 * comps);
  out.hi = to_rational(from_blocks(comps, 4, [&](std::size_t r, std::size_t c) {
    if (r < n && c == r + n) return IntMatrix(IntMatrix::identity(4) * Integer(-1));
    if (r >= n && c + n == r) return IntMatrix::identity(4);
    return zero;
  }));
  out.type_d = true;
  return out;
}

} // namespace shimura::pel
