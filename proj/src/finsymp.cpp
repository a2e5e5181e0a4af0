#include "shimura/finsymp.hpp"

#include "shimura/core/normal_form.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace shimura::finsymp {

namespace {

using Vec = std::vector<std::int64_t>;

// psi(u, v) = sum_i u_i v_{d+i} - u_{d+i} v_i
std::int64_t psi(const Vec &u, const Vec &v, std::size_t d, std::int64_t n) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < d; ++i) s += u[i] * v[d + i] - u[d + i] * v[i];
  return mod(s, n);
}

std::int64_t psi_int(const IntMatrix &g, std::size_t a, std::size_t b, std::size_t d, std::int64_t n) {
  Integer s = 0;
  for (std::size_t i = 0; i < d; ++i) s += g(i, a) * g(d + i, b) - g(d + i, a) * g(i, b);
  return mod(s, n);
}

std::int64_t gram_target(std::size_t i, std::size_t j, std::size_t d, std::int64_t c, std::int64_t n) {
  if (i < d && j == i + d) return mod(c, n);
  if (j < d && i == j + d) return mod(-c, n);
  return 0;
}

Integer ipow(std::int64_t p, std::int64_t e) {
  Integer r = 1;
  for (std::int64_t k = 0; k < e; ++k) r *= p;
  return r;
}

std::vector<std::pair<std::int64_t, int>> factor(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    int k = 0;
    while (n % p == 0) n /= p, ++k;
    if (k) out.push_back({p, k});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

/// All vectors of (Z/n)^dim in lexicographic order (first coordinate slowest).
std::vector<Vec> all_vectors(std::size_t dim, std::int64_t n) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= static_cast<std::size_t>(n);
  std::vector<Vec> out(total, Vec(dim));
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = dim; i-- > 0; c /= static_cast<std::size_t>(n))
      out[code][i] = static_cast<std::int64_t>(c % static_cast<std::size_t>(n));
  }
  return out;
}

struct Search {
  std::size_t d;
  std::int64_t n, c;
  const std::vector<Vec> &vectors;

  void extend(std::vector<const Vec *> &prefix, std::vector<std::int64_t> &out) const {
    const std::size_t k = prefix.size();
    if (k == 2 * d) {
      for (const Vec *col : prefix) out.insert(out.end(), col->begin(), col->end());
      return;
    }
    for (const Vec &v : vectors) {
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) ok = psi(*prefix[i], v, d, n) == gram_target(i, k, d, c, n);
      if (!ok) continue;
      prefix.push_back(&v);
      extend(prefix, out);
      prefix.pop_back();
    }
  }
};

// --- transvection lift ---------------------------------------------------

struct Transvection {
  Vec u;
  std::int64_t lambda;
};

void apply(const Transvection &t, std::vector<Vec> &cols, std::size_t d, std::int64_t n) {
  for (auto &x : cols) {
    std::int64_t s = mul_mod(t.lambda, psi(t.u, x, d, n), n);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod(x[i] + mul_mod(s, t.u[i], n), n);
  }
}

Vec unit_vector(std::size_t dim, std::size_t k) {
  Vec e(dim, 0);
  e[k] = 1;
  return e;
}

Vec diff(const Vec &a, const Vec &b, std::int64_t n) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = mod(a[i] - b[i], n);
  return r;
}

bool unit(std::int64_t a, std::int64_t n) { return gcd64(mod(a, n), n) == 1; }

/// Pushes the transvection carrying a to b when psi(a, b) is a unit.
void carry(const Vec &a, const Vec &b, std::vector<Vec> &cols, std::vector<Transvection> &steps, std::size_t d,
           std::int64_t n) {
  if (a == b) return;
  std::int64_t s = psi(a, b, d, n);
  Transvection t{diff(a, b, n), mod(-inv_mod(s, n), n)};
  apply(t, cols, d, n);
  steps.push_back(std::move(t));
}

/// x supported on the complement of the first k hyperbolic pairs with
/// x_{d+k} = 1 and psi(v, x) a unit.
Vec bridge(const Vec &v, std::size_t k, std::size_t d, std::int64_t n) {
  Vec x(2 * d, 0);
  x[d + k] = 1;
  std::vector<std::pair<std::size_t, std::int64_t>> free; // (index of x, coefficient in psi(v, x))
  for (std::size_t i = k + 1; i < d; ++i) free.push_back({d + i, v[i]});
  for (std::size_t i = k; i < d; ++i) free.push_back({i, mod(-v[d + i], n)});
  Integer g = 0;
  std::vector<Integer> coeff(free.size(), 0);
  // Bezout coefficients with sum coeff_j * free_j = g
  for (std::size_t j = 0; j < free.size(); ++j) {
    Integer x1, y1;
    Integer ng = xgcd(g, Integer(free[j].second), x1, y1);
    for (std::size_t t = 0; t < j; ++t) coeff[t] *= x1;
    coeff[j] = y1;
    g = ng;
  }
  const std::int64_t g64 = mod(g, n);
  for (std::int64_t t = 0; t < n; ++t) {
    if (!unit(v[k] + t * g64, n)) continue;
    for (std::size_t j = 0; j < free.size(); ++j) x[free[j].first] = mod(coeff[j] * t, n);
    if (!unit(psi(v, x, d, n), n)) throw internal_error("bridge vector construction failed");
    return x;
  }
  throw internal_error("column is not unimodular mod n");
}

// --- lattices ------------------------------------------------------------

IntMatrix gram_of(const IntMatrix &b) {
  return b.transpose() * to_integer(symplectic_gram(b.rows() / 2)) * b;
}

std::vector<int> smith_exponents(const IntMatrix &g, std::int64_t p) {
  std::vector<int> e;
  for (const auto &x : elementary_divisors(g)) {
    Integer v = x;
    int k = 0;
    while (v % p == 0) v /= p, ++k;
    if (v != 1) throw domain_error("elementary divisor is not a power of p");
    e.push_back(k);
  }
  if (e.size() != g.rows()) throw degeneracy_error("singular matrix in double coset computation");
  std::sort(e.begin(), e.end());
  return e;
}

bool lex_less(const IntMatrix &a, const IntMatrix &b) {
  return std::lexicographical_compare(a.entries().begin(), a.entries().end(), b.entries().begin(),
                                      b.entries().end());
}

/// Column-HNF matrices of size dim with determinant p^total, lexicographic.
void hnf_lattices(std::size_t dim, std::int64_t p, int total, std::vector<IntMatrix> &out) {
  std::vector<int> exps(dim, 0);
  auto fill_offdiag = [&](IntMatrix h) {
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < i; ++j) slots.push_back({i, j});
    std::function<void(std::size_t)> rec = [&](std::size_t s) {
      if (s == slots.size()) {
        out.push_back(h);
        return;
      }
      auto [i, j] = slots[s];
      for (Integer v = 0; v < h(i, i); ++v) {
        h(i, j) = v;
        rec(s + 1);
      }
      h(i, j) = 0;
    };
    rec(0);
  };
  std::function<void(std::size_t, int)> comp = [&](std::size_t i, int left) {
    if (i + 1 == dim) {
      exps[i] = left;
      IntMatrix h(dim, dim);
      for (std::size_t k = 0; k < dim; ++k) h(k, k) = ipow(p, exps[k]);
      fill_offdiag(h);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      exps[i] = e;
      comp(i + 1, left - e);
    }
  };
  comp(0, total);
}

/// Canonical RREF basis (rows) of the column span of m over F_p.
std::vector<Vec> rref_mod_p(std::vector<Vec> rows, std::int64_t p) {
  std::size_t r = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    std::int64_t inv = inv_mod(rows[r][c], p);
    for (auto &x : rows[r]) x = mul_mod(x, inv, p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      std::int64_t f = rows[i][c];
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] = mod(rows[i][j] - mul_mod(f, rows[r][j], p), p);
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

} // namespace

GSpModN validate(const IntMatrix &g, std::int64_t n) {
  if (n < 1) throw domain_error("modulus must be positive");
  if (!g.square() || g.rows() == 0 || g.rows() % 2 != 0) throw shape_error("g must be 2d x 2d");
  const std::size_t d = g.rows() / 2;
  GSpModN out{d, n, IntMatrix(2 * d, 2 * d), 0};
  for (std::size_t i = 0; i < 2 * d; ++i)
    for (std::size_t j = 0; j < 2 * d; ++j) out.g(i, j) = mod(g(i, j), n);
  out.c = psi_int(out.g, 0, d, d, n);
  if (!unit(out.c, n)) throw domain_error("not a similitude mod n: multiplier is not a unit");
  for (std::size_t i = 0; i < 2 * d; ++i)
    for (std::size_t j = 0; j < 2 * d; ++j)
      if (psi_int(out.g, i, j, d, n) != gram_target(i, j, d, out.c, n))
        throw domain_error("not a similitude mod n");
  return out;
}

IntMatrix adjusted_section(std::size_t d, std::int64_t alpha) {
  IntMatrix s(2 * d, 2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    s(i, d + i) = alpha;
    s(d + i, i) = -1;
  }
  return s;
}

Integer sp_order(std::size_t d, std::int64_t n) {
  if (n < 1) throw domain_error("modulus must be positive");
  Integer total = 1;
  for (auto [p, k] : factor(n)) {
    Integer f = ipow(p, static_cast<std::int64_t>(d * d));
    for (std::size_t i = 1; i <= d; ++i) f *= ipow(p, static_cast<std::int64_t>(2 * i)) - 1;
    total *= f * ipow(p, static_cast<std::int64_t>((k - 1) * d * (2 * d + 1)));
  }
  return total;
}

IntMatrix Enumeration::element(std::size_t k) const {
  IntMatrix g(2 * d, 2 * d);
  for (std::size_t i = 0; i < 2 * d; ++i)
    for (std::size_t j = 0; j < 2 * d; ++j) g(i, j) = entry(k, i, j);
  return g;
}

Enumeration enumerate_fiber(std::size_t d, std::int64_t n, std::int64_t c, Exec exec, std::size_t budget) {
  if (d == 0) throw domain_error("d must be positive");
  if (n < 1) throw domain_error("modulus must be positive");
  c = mod(c, n);
  if (!unit(c, n)) throw domain_error("multiplier must be a unit mod n");
  Integer expected = sp_order(d, n);
  if (expected > Integer(static_cast<unsigned long>(budget)))
    throw resource_error("enumeration of " + expected.get_str() + " elements exceeds the budget of " +
                         std::to_string(budget));
  Enumeration out;
  out.d = d;
  out.n = n;
  out.c = c;
  const auto vectors = all_vectors(2 * d, n);
  Search search{d, n, c, vectors};
  std::vector<std::vector<std::int64_t>> parts(vectors.size());
  const long count = static_cast<long>(vectors.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
      std::vector<const Vec *> prefix{&vectors[static_cast<std::size_t>(i)]};
      search.extend(prefix, parts[static_cast<std::size_t>(i)]);
    }
  } else {
    for (long i = 0; i < count; ++i) {
      std::vector<const Vec *> prefix{&vectors[static_cast<std::size_t>(i)]};
      search.extend(prefix, parts[static_cast<std::size_t>(i)]);
    }
  }
  for (auto &p : parts) out.data.insert(out.data.end(), p.begin(), p.end());
  if (Integer(static_cast<unsigned long>(out.size())) != expected)
    throw internal_error("enumeration count disagrees with the order formula");
  return out;
}

IntMatrix lift_to_integral(const GSpModN &g) {
  if (mod(g.c, g.n) != mod(1, g.n)) throw domain_error("lift_to_integral needs c(g) = 1");
  const std::size_t d = g.d, dim = 2 * d;
  const std::int64_t n = g.n;
  IntMatrix result = IntMatrix::identity(dim);
  if (n == 1) return result;

  std::vector<Vec> cols(dim, Vec(dim));
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < dim; ++i) cols[j][i] = mod(g.g(i, j), n);

  std::vector<Transvection> steps;
  for (std::size_t k = 0; k < d; ++k) {
    const Vec ek = unit_vector(dim, k), fk = unit_vector(dim, d + k);
    Vec v = cols[k];
    if (v != ek) {
      if (unit(psi(v, ek, d, n), n)) {
        carry(v, ek, cols, steps, d, n);
      } else {
        Vec x = bridge(v, k, d, n);
        carry(v, x, cols, steps, d, n);
        carry(cols[k], ek, cols, steps, d, n);
      }
    }
    Vec w = cols[d + k];
    if (w == fk) continue;
    std::int64_t lambda = mod(1 - psi(w, fk, d, n), n);
    if (!unit(psi(w, fk, d, n), n)) {
      Transvection t{ek, lambda};
      apply(t, cols, d, n);
      steps.push_back(std::move(t));
    }
    carry(cols[d + k], fk, cols, steps, d, n);
  }
  for (std::size_t j = 0; j < dim; ++j)
    if (cols[j] != unit_vector(dim, j)) throw internal_error("transvection reduction did not reach the identity");

  // g = t_1^{-1} ... t_r^{-1} mod n, each inverse lifted as I - lambda u u^T M
  IntMatrix m = to_integer(symplectic_gram(d));
  for (const auto &t : steps) {
    IntMatrix u(dim, 1);
    for (std::size_t i = 0; i < dim; ++i) u(i, 0) = t.u[i];
    IntMatrix inv = IntMatrix::identity(dim) - u * u.transpose() * m * Integer(t.lambda);
    result = result * inv;
  }
  if (!(result.transpose() * m * result == m)) throw internal_error("lift is not symplectic");
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (mod(result(i, j), n) != g.g(i, j)) throw internal_error("lift does not reduce to g");
  return result;
}

std::vector<std::int64_t> units_mod(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t a = 0; a < n; ++a)
    if (unit(a, n)) out.push_back(a);
  return out;
}

IntMatrix diagonal_representative(const DoubleCosetKey &key, std::int64_t p) {
  IntMatrix g(2 * key.d, 2 * key.d);
  for (std::size_t i = 0; i < key.d; ++i) {
    g(i, i) = ipow(p, key.a[i]);
    g(key.d + i, key.d + i) = ipow(p, key.m - key.a[i]);
  }
  return g;
}

DoubleCosetKey classify(const IntMatrix &g, std::int64_t p) {
  if (!g.square() || g.rows() % 2 != 0) throw shape_error("g must be 2d x 2d");
  const std::size_t d = g.rows() / 2;
  IntMatrix gram = gram_of(g);
  Integer c = gram(0, d);
  if (c <= 0 || !(gram == to_integer(symplectic_gram(d)) * c)) throw domain_error("not a similitude");
  int m = 0;
  while (c % p == 0) c /= p, ++m;
  if (c != 1) throw domain_error("multiplier is not a power of p");
  auto e = smith_exponents(g, p);
  DoubleCosetKey key{d, m, std::vector<int>(e.begin(), e.begin() + static_cast<long>(d))};
  for (std::size_t i = 0; i < d; ++i)
    if (e[2 * d - 1 - i] != m - e[i]) throw internal_error("elementary divisors do not pair up");
  return key;
}

IntMatrix symplectic_basis(const IntMatrix &gram) {
  const std::size_t dim = gram.rows();
  if (!gram.square() || dim % 2 != 0) throw shape_error("Gram matrix must be 2d x 2d");
  const std::size_t d = dim / 2;
  auto form = [&](const IntMatrix &x, const IntMatrix &y) { return (x.transpose() * gram * y)(0, 0); };
  IntMatrix span = IntMatrix::identity(dim); // columns span the current complement
  std::vector<IntMatrix> es, fs;
  for (std::size_t k = 0; k < d; ++k) {
    IntMatrix e = span.column(0);
    // f with form(e, f) = 1 by Bezout over the spanning columns
    Integer g = 0;
    IntMatrix f(dim, 1);
    for (std::size_t j = 0; j < span.cols(); ++j) {
      Integer x, y;
      Integer ng = xgcd(g, form(e, span.column(j)), x, y);
      f = f * x + span.column(j) * y;
      g = ng;
    }
    if (g != 1) throw domain_error("form is not unimodular");
    es.push_back(e);
    fs.push_back(f);
    if (k + 1 == d) break;
    IntMatrix projected(dim, span.cols());
    for (std::size_t j = 0; j < span.cols(); ++j) {
      IntMatrix x = span.column(j);
      projected.set_block(0, j, x - e * form(x, f) + f * form(x, e));
    }
    span = column_lattice_hnf(projected);
  }
  IntMatrix p(dim, dim);
  for (std::size_t k = 0; k < d; ++k) {
    p.set_block(0, k, es[k]);
    p.set_block(0, d + k, fs[k]);
  }
  if (!(p.transpose() * gram * p == to_integer(symplectic_gram(d)))) throw internal_error("symplectic basis failed");
  return p;
}

CosetList double_coset_decompose(std::size_t d, std::int64_t p, const IntMatrix &g) {
  if (!is_prime(p)) throw domain_error("p must be prime");
  if (g.rows() != 2 * d) throw shape_error("g must be 2d x 2d");
  DoubleCosetKey key = classify(g, p);
  auto target = smith_exponents(g, p);
  Integer c = ipow(p, key.m);
  int total = 0;
  for (int e : target) total += e;

  std::vector<IntMatrix> candidates;
  hnf_lattices(2 * d, p, total, candidates);
  CosetList out{d, p, g, {}};
  for (const auto &h : candidates) {
    IntMatrix gram = gram_of(h);
    bool integral = true;
    for (const auto &x : gram.entries())
      if (x % c != 0) integral = false;
    if (!integral || smith_exponents(h, p) != target) continue;
    IntMatrix scaled(gram.rows(), gram.cols());
    for (std::size_t i = 0; i < gram.rows(); ++i)
      for (std::size_t j = 0; j < gram.cols(); ++j) scaled(i, j) = gram(i, j) / c;
    out.cosets.push_back({h, h * symplectic_basis(scaled)});
  }
  std::sort(out.cosets.begin(), out.cosets.end(),
            [](const Coset &a, const Coset &b) { return lex_less(a.lattice, b.lattice); });
  return out;
}

std::size_t orbit_count_mod_p(std::size_t d, std::int64_t p, const IntMatrix &g, Exec exec) {
  if (!is_prime(p)) throw domain_error("p must be prime");
  for (int e : smith_exponents(g, p))
    if (e > 1) throw domain_error("orbit oracle needs p Z^2d inside g Z^2d");
  const std::size_t dim = 2 * d;
  std::vector<Vec> base;
  for (std::size_t j = 0; j < dim; ++j) {
    Vec col(dim);
    for (std::size_t i = 0; i < dim; ++i) col[i] = mod(g(i, j), p);
    base.push_back(col);
  }
  auto sp = enumerate_sp(d, p, exec);
  const long count = static_cast<long>(sp.size());
  auto image = [&](long k) {
    std::vector<Vec> rows;
    for (const auto &v : base) {
      Vec w(dim, 0);
      for (std::size_t i = 0; i < dim; ++i) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < dim; ++j) s += sp.entry(static_cast<std::size_t>(k), i, j) * v[j];
        w[i] = mod(s, p);
      }
      rows.push_back(w);
    }
    return rref_mod_p(rows, p);
  };
  std::set<std::vector<Vec>> orbit;
  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      std::set<std::vector<Vec>> local;
#pragma omp for schedule(static)
      for (long k = 0; k < count; ++k) local.insert(image(k));
#pragma omp critical
      orbit.insert(local.begin(), local.end());
    }
  } else {
    for (long k = 0; k < count; ++k) orbit.insert(image(k));
  }
  return orbit.size();
}

HeckeElement HeckeElement::unit(std::size_t d, std::int64_t p, std::int64_t n) {
  return basis(d, p, n, DoubleCosetKey{d, 0, std::vector<int>(d, 0)});
}

HeckeElement HeckeElement::basis(std::size_t d, std::int64_t p, std::int64_t n, const DoubleCosetKey &key) {
  if (!is_prime(p)) throw domain_error("p must be prime");
  if (n < 1 || n % p == 0) throw domain_error("level must be prime to p");
  if (key.d != d || key.a.size() != d) throw shape_error("key has the wrong size");
  HeckeElement h{d, p, n, {}};
  h.terms[key] = 1;
  return h;
}

HeckeElement hecke_convolve(const HeckeElement &f1, const HeckeElement &f2) {
  if (f1.d != f2.d || f1.p != f2.p || f1.n != f2.n) throw shape_error("Hecke elements at different levels");
  const std::size_t d = f1.d;
  const std::int64_t p = f1.p;
  std::map<DoubleCosetKey, CosetList> cache;
  auto cosets = [&](const DoubleCosetKey &k) -> const CosetList & {
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, double_coset_decompose(d, p, diagonal_representative(k, p))).first;
    return it->second;
  };
  std::map<DoubleCosetKey, IntMatrix> target_lattice;
  HeckeElement out{d, p, f1.n, {}};
  for (const auto &[k1, c1] : f1.terms)
    for (const auto &[k2, c2] : f2.terms) {
      const auto &left = cosets(k1);
      const auto &right = cosets(k2);
      std::map<DoubleCosetKey, Integer> hits;
      for (const auto &a : left.cosets)
        for (const auto &b : right.cosets) {
          IntMatrix prod = a.representative * b.representative;
          DoubleCosetKey k = classify(prod, p);
          auto t = target_lattice.find(k);
          if (t == target_lattice.end())
            t = target_lattice.emplace(k, column_lattice_hnf(diagonal_representative(k, p))).first;
          hits[k] += 0;
          if (column_lattice_hnf(prod) == t->second) hits[k] += 1;
        }
      for (const auto &[k, m] : hits) out.terms[k] += c1 * c2 * m;
    }
  for (auto it = out.terms.begin(); it != out.terms.end();)
    it = it->second == 0 ? out.terms.erase(it) : std::next(it);
  return out;
}

} // namespace shimura::finsymp
