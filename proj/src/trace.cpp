#include "shimura/trace.hpp"

#include "shimura/core/normal_form.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace shimura::trace {

using Elem = std::uint32_t;

FiniteGroupTable::FiniteGroupTable(std::vector<std::vector<Elem>> table, std::vector<Elem> gamma,
                                   std::vector<std::string> labels)
    : table_(std::move(table)), gamma_(std::move(gamma)), labels_(std::move(labels)) {
  const std::size_t m = table_.size();
  if (m == 0) throw domain_error("group table is empty");
  for (const auto &row : table_) {
    if (row.size() != m) throw domain_error("group table must be square");
    std::vector<bool> seen(m, false);
    for (auto x : row) {
      if (x >= m || seen[x]) throw domain_error("group table rows must be permutations");
      seen[x] = true;
    }
  }
  for (std::size_t b = 0; b < m; ++b) {
    std::vector<bool> seen(m, false);
    for (std::size_t a = 0; a < m; ++a) {
      if (seen[table_[a][b]]) throw domain_error("group table columns must be permutations");
      seen[table_[a][b]] = true;
    }
  }
  for (std::size_t a = 0; a < m; ++a)
    if (table_[0][a] != a || table_[a][0] != a) throw domain_error("index 0 must be the identity");
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      Elem ab = table_[a][b];
      for (std::size_t c = 0; c < m; ++c)
        if (table_[ab][c] != table_[a][table_[b][c]]) throw domain_error("group table is not associative");
    }
  inverse_.assign(m, 0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (table_[a][b] == 0) inverse_[a] = static_cast<Elem>(b);

  std::sort(gamma_.begin(), gamma_.end());
  if (gamma_.empty() || gamma_.front() != 0) throw domain_error("subgroup must contain the identity");
  if (std::adjacent_find(gamma_.begin(), gamma_.end()) != gamma_.end()) throw domain_error("subgroup has repeated elements");
  if (gamma_.back() >= m) throw domain_error("subgroup index out of range");
  for (auto a : gamma_)
    for (auto b : gamma_)
      if (!std::binary_search(gamma_.begin(), gamma_.end(), table_[a][b])) throw domain_error("subgroup is not closed");
  if (labels_.empty())
    for (std::size_t a = 0; a < m; ++a) labels_.push_back(std::to_string(a));
  if (labels_.size() != m) throw domain_error("one label per element");
}

bool FiniteGroupTable::is_abelian() const {
  for (std::size_t a = 0; a < order(); ++a)
    for (std::size_t b = a + 1; b < order(); ++b)
      if (table_[a][b] != table_[b][a]) return false;
  return true;
}

Elem FiniteGroupTable::element_order(Elem a) const {
  Elem k = 1;
  for (Elem x = a; x != 0; x = mul(x, a)) ++k;
  return k;
}

std::vector<std::vector<Elem>> FiniteGroupTable::right_cosets() const {
  std::vector<bool> used(order(), false);
  std::vector<std::vector<Elem>> out;
  for (Elem x = 0; x < order(); ++x) {
    if (used[x]) continue;
    std::vector<Elem> coset;
    for (auto g : gamma_) coset.push_back(mul(g, x));
    std::sort(coset.begin(), coset.end());
    for (auto y : coset) used[y] = true;
    out.push_back(std::move(coset));
  }
  return out;
}

FiniteGroupTable FiniteGroupTable::with_gamma(std::vector<Elem> gamma) const {
  return FiniteGroupTable(table_, std::move(gamma), labels_);
}

std::vector<Elem> generated_subgroup(const FiniteGroupTable &g, const std::vector<Elem> &gens) {
  std::vector<bool> in(g.order(), false);
  std::vector<Elem> out{0}, todo{0};
  in[0] = true;
  while (!todo.empty()) {
    Elem x = todo.back();
    todo.pop_back();
    for (auto s : gens) {
      if (s >= g.order()) throw domain_error("generator index out of range");
      Elem y = g.mul(x, s);
      if (!in[y]) {
        in[y] = true;
        out.push_back(y);
        todo.push_back(y);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void check_function(const FiniteGroupTable &g, const TestFunction &f) {
  if (f.size() != g.order()) throw shape_error("test function must have one value per group element");
}

} // namespace

Rational direct_trace(const FiniteGroupTable &g, const TestFunction &f, Exec exec, const Rational &measure) {
  check_function(g, f);
  auto cosets = g.right_cosets();
  const std::int64_t n = static_cast<std::int64_t>(cosets.size());
  // Kernel K(i, j) = sum_gamma f(x_i^-1 gamma x_j) on coset representatives.
  std::vector<std::vector<Rational>> kernel(n, std::vector<Rational>(n));
  auto row = [&](std::int64_t i) {
    Elem xi_inv = g.inv(cosets[i].front());
    for (std::int64_t j = 0; j < n; ++j) {
      Rational s = 0;
      for (auto gam : g.gamma()) s += f[g.mul(g.mul(xi_inv, gam), cosets[j].front())];
      kernel[i][j] = s * measure;
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) row(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) row(i);
  }
  Rational tr = 0;
  for (std::int64_t i = 0; i < n; ++i) tr += kernel[i][i];
  return tr;
}

Rational geometric_side(const FiniteGroupTable &g, const TestFunction &f, Exec exec, const Rational &measure) {
  check_function(g, f);
  // Gamma-conjugacy class representatives.
  std::vector<Elem> reps;
  std::vector<bool> seen(g.order(), false);
  for (auto gam : g.gamma()) {
    if (seen[gam]) continue;
    reps.push_back(gam);
    for (auto d : g.gamma()) seen[g.conj(d, gam)] = true;
  }
  const std::int64_t n = static_cast<std::int64_t>(reps.size());
  std::vector<Rational> terms(n);
  auto term = [&](std::int64_t k) {
    Elem gam = reps[k];
    std::size_t cg = 0, cgamma = 0;
    std::vector<bool> central(g.order(), false);
    for (Elem x = 0; x < g.order(); ++x)
      if (g.mul(x, gam) == g.mul(gam, x)) {
        central[x] = true;
        ++cg;
      }
    for (auto d : g.gamma())
      if (central[d]) ++cgamma;
    // Representatives of G_gamma \ G: x and x' agree iff x' x^-1 centralizes gamma,
    // i.e. iff x^-1 gamma x = x'^-1 gamma x'.
    std::vector<bool> hit(g.order(), false);
    Rational orbital = 0;
    for (Elem x = 0; x < g.order(); ++x) {
      Elem c = g.conj(x, gam);
      if (hit[c]) continue;
      hit[c] = true;
      orbital += f[c];
    }
    terms[k] = make_rational(static_cast<long>(cg), static_cast<long>(cgamma)) * orbital * measure;
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t k = 0; k < n; ++k) term(k);
  } else {
    for (std::int64_t k = 0; k < n; ++k) term(k);
  }
  Rational s = 0;
  for (const auto &t : terms) s += t;
  return s;
}

CyclicDecomposition cyclic_decomposition(const FiniteGroupTable &g) {
  if (!g.is_abelian()) throw domain_error("cyclic decomposition needs an abelian group");
  const std::size_t m = g.order();
  std::vector<Elem> gens;
  std::vector<Elem> span{0};
  while (span.size() < m) {
    std::vector<bool> in(m, false);
    for (auto x : span) in[x] = true;
    Elem best = 0;
    Elem best_order = 0;
    for (Elem x = 0; x < m; ++x)
      if (!in[x] && g.element_order(x) > best_order) {
        best = x;
        best_order = g.element_order(x);
      }
    gens.push_back(best);
    span = generated_subgroup(g, gens);
  }
  const std::size_t k = gens.size();
  CyclicDecomposition out;
  if (k == 0) {
    out.coords.assign(m, {});
    return out;
  }
  // Word coordinates by breadth-first search.
  std::vector<std::vector<Integer>> word(m);
  std::vector<bool> found(m, false);
  word[0] = std::vector<Integer>(k, 0);
  found[0] = true;
  std::vector<Elem> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Elem x = queue[head];
    for (std::size_t j = 0; j < k; ++j) {
      Elem y = g.mul(x, gens[j]);
      if (found[y]) continue;
      found[y] = true;
      word[y] = word[x];
      word[y][j] += 1;
      queue.push_back(y);
    }
  }
  std::vector<std::vector<Integer>> rels;
  for (Elem x = 0; x < m; ++x)
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<Integer> r = word[x];
      r[j] += 1;
      const auto &target = word[g.mul(x, gens[j])];
      bool zero = true;
      for (std::size_t i = 0; i < k; ++i) {
        r[i] -= target[i];
        if (r[i] != 0) zero = false;
      }
      if (!zero) rels.push_back(r);
    }
  IntMatrix rel(rels.size(), k);
  for (std::size_t a = 0; a < rels.size(); ++a)
    for (std::size_t b = 0; b < k; ++b) rel(a, b) = rels[a][b];
  IntMatrix h = row_lattice_hnf(rel);
  if (h.rows() != k) throw internal_error("relation lattice does not have full rank");
  auto snf = smith_normal_form(h);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < k; ++i)
    if (snf.d(i, i) > 1) {
      keep.push_back(i);
      out.factors.push_back(snf.d(i, i));
    }
  out.coords.resize(m);
  for (Elem x = 0; x < m; ++x)
    for (auto i : keep) {
      Integer c = 0;
      for (std::size_t j = 0; j < k; ++j) c += word[x][j] * snf.v(j, i);
      out.coords[x].push_back(Integer(mod(c, snf.d(i, i).get_si())));
    }
  return out;
}

Cyclotomic::Cyclotomic(std::size_t n) : n_(n) {
  if (n == 0) throw domain_error("cyclotomic order must be positive");
  // x^n - 1 divided by Phi_d for every proper divisor d.
  std::vector<Integer> f(n + 1, 0);
  f[0] = -1;
  f[n] = 1;
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    const std::vector<Integer> div = Cyclotomic(d).phi();
    const std::size_t top = f.size() - 1, dd = div.size() - 1;
    std::vector<Integer> quot(top - dd + 1, 0);
    for (std::size_t i = top + 1; i-- > dd;) {
      Integer c = f[i]; // divisors are monic
      quot[i - dd] = c;
      for (std::size_t j = 0; j <= dd; ++j) f[i - dd + j] -= c * div[j];
    }
    f = quot;
  }
  phi_ = f;
}

std::vector<Rational> Cyclotomic::reduce(const std::vector<Rational> &powers) const {
  std::vector<Rational> r(powers);
  const std::size_t deg = phi_.size() - 1;
  for (std::size_t i = r.size(); i-- > deg;) {
    Rational c = r[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) r[i - deg + j] -= c * Rational(phi_[j]);
  }
  r.resize(deg, 0);
  return r;
}

Rational spectral_side_abelian(const FiniteGroupTable &g, const TestFunction &f, const Rational &measure) {
  check_function(g, f);
  auto dec = cyclic_decomposition(g);
  Integer e = 1;
  for (const auto &d : dec.factors) e = lcm(e, d);
  const std::size_t exp = e.get_ui();
  const std::size_t r = dec.factors.size();
  // phi_a(x) = sum a_i c_i(x) e / d_i mod e.
  std::vector<Rational> powers(exp, 0);
  std::vector<Integer> a(r, 0);
  auto phase = [&](Elem x) {
    Integer s = 0;
    for (std::size_t i = 0; i < r; ++i) s += a[i] * dec.coords[x][i] * (e / dec.factors[i]);
    return static_cast<std::size_t>(mod(s, e.get_si()));
  };
  while (true) {
    bool trivial = true;
    for (auto gam : g.gamma())
      if (phase(gam) != 0) {
        trivial = false;
        break;
      }
    if (trivial)
      for (Elem x = 0; x < g.order(); ++x) powers[phase(x)] += f[x];
    std::size_t i = 0;
    for (; i < r; ++i) {
      a[i] += 1;
      if (a[i] < dec.factors[i]) break;
      a[i] = 0;
    }
    if (i == r) break;
  }
  auto value = Cyclotomic(exp).reduce(powers);
  for (std::size_t i = 1; i < value.size(); ++i)
    if (value[i] != 0) throw internal_error("spectral side is not rational");
  return value[0] * measure;
}

TraceReport trace_check(const FiniteGroupTable &g, const TestFunction &f) {
  TraceReport rep;
  rep.direct = direct_trace(g, f);
  rep.geometric = geometric_side(g, f);
  rep.agree = rep.direct == rep.geometric;
  if (g.is_abelian()) {
    rep.spectral = spectral_side_abelian(g, f);
    rep.agree = rep.agree && *rep.spectral == rep.direct;
  }
  return rep;
}

namespace {

template <class E, class Mul, class Label>
FiniteGroupTable closure_group(const std::vector<E> &gens, const std::vector<E> &gamma_gens, const E &identity,
                               Mul mul, Label label) {
  std::map<E, Elem> index;
  std::vector<E> elems{identity}, todo{identity};
  index[identity] = 0;
  while (!todo.empty()) {
    E x = todo.back();
    todo.pop_back();
    for (const auto &s : gens) {
      E y = mul(x, s);
      if (index.emplace(y, 0).second) {
        elems.push_back(y);
        todo.push_back(y);
      }
    }
  }
  std::sort(elems.begin() + 1, elems.end());
  for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = static_cast<Elem>(i);
  const std::size_t m = elems.size();
  std::vector<std::vector<Elem>> table(m, std::vector<Elem>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) table[a][b] = index.at(mul(elems[a], elems[b]));
  std::vector<std::string> labels;
  for (const auto &x : elems) labels.push_back(label(x));
  FiniteGroupTable g(table, {0}, labels);
  std::vector<Elem> gg;
  for (const auto &x : gamma_gens) {
    auto it = index.find(x);
    if (it == index.end()) throw domain_error("subgroup generator is not in the group");
    gg.push_back(it->second);
  }
  return g.with_gamma(generated_subgroup(g, gg));
}

using Perm = std::vector<Elem>;

std::string cycle_label(const Perm &p) {
  std::ostringstream out;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == i) continue;
    out << '(';
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      out << (first ? "" : " ") << j;
      first = false;
      j = p[j];
    }
    out << ')';
  }
  std::string s = out.str();
  return s.empty() ? "()" : s;
}

FiniteGroupTable perm_group(const std::vector<Perm> &gens, const std::vector<Perm> &gamma_gens) {
  if (gens.empty()) throw domain_error("need at least one generator");
  const std::size_t n = gens.front().size();
  Perm id(n);
  std::iota(id.begin(), id.end(), 0u);
  for (const auto &g : gens) {
    if (g.size() != n) throw domain_error("generators act on different sets");
    Perm s = g;
    std::sort(s.begin(), s.end());
    if (s != id) throw domain_error("generator is not a permutation");
  }
  auto mul = [](const Perm &a, const Perm &b) {
    Perm c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
    return c;
  };
  return closure_group(gens, gamma_gens, id, mul, cycle_label);
}

Perm cycle(std::size_t n, const std::vector<Elem> &c) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0u);
  for (std::size_t i = 0; i < c.size(); ++i) p[c[i]] = c[(i + 1) % c.size()];
  return p;
}

Perm product(const Perm &a, const Perm &b) {
  Perm c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
  return c;
}

Perm rotation(std::size_t n, std::size_t k) {
  Perm p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<Elem>((i + k) % n);
  return p;
}

Perm reflection(std::size_t n) {
  Perm p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<Elem>((n - i) % n);
  return p;
}

using Mat2 = std::array<std::int64_t, 4>;

FiniteGroupTable mat_group(std::int64_t p, const std::vector<Mat2> &gens, const std::vector<Mat2> &gamma_gens) {
  auto norm = [p](Mat2 a) {
    for (auto &x : a) x = mod(x, p);
    return a;
  };
  std::vector<Mat2> g, gg;
  for (const auto &a : gens) {
    Mat2 b = norm(a);
    if (mod(b[0] * b[3] - b[1] * b[2], p) == 0) throw domain_error("matrix generator is singular");
    g.push_back(b);
  }
  for (const auto &a : gamma_gens) gg.push_back(norm(a));
  auto mul = [p](const Mat2 &a, const Mat2 &b) {
    return Mat2{mod(a[0] * b[0] + a[1] * b[2], p), mod(a[0] * b[1] + a[1] * b[3], p),
                mod(a[2] * b[0] + a[3] * b[2], p), mod(a[2] * b[1] + a[3] * b[3], p)};
  };
  auto label = [](const Mat2 &a) {
    return "[[" + std::to_string(a[0]) + "," + std::to_string(a[1]) + "],[" + std::to_string(a[2]) + "," +
           std::to_string(a[3]) + "]]";
  };
  return closure_group(g, gg, Mat2{1, 0, 0, 1}, mul, label);
}

} // namespace

FiniteGroupTable cyclic(std::size_t n) {
  if (n == 0) throw domain_error("cyclic group order must be positive");
  std::vector<std::vector<Elem>> t(n, std::vector<Elem>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = static_cast<Elem>((a + b) % n);
  return FiniteGroupTable(t, {0});
}

FiniteGroupTable direct_product(const FiniteGroupTable &a, const FiniteGroupTable &b) {
  const std::size_t na = a.order(), nb = b.order(), m = na * nb;
  std::vector<std::vector<Elem>> t(m, std::vector<Elem>(m));
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y)
      t[x][y] = static_cast<Elem>(a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb));
  std::vector<Elem> gamma;
  for (auto g : a.gamma())
    for (auto h : b.gamma()) gamma.push_back(static_cast<Elem>(g * nb + h));
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < m; ++x) labels.push_back("(" + a.labels()[x / nb] + "," + b.labels()[x % nb] + ")");
  return FiniteGroupTable(t, gamma, labels);
}

FiniteGroupTable permutation_group(const std::vector<std::vector<Elem>> &gens) { return perm_group(gens, {}); }

FiniteGroupTable dihedral(std::size_t n) {
  if (n < 3) throw domain_error("dihedral group needs n >= 3");
  return perm_group({rotation(n, 1), reflection(n)}, {});
}

FiniteGroupTable symmetric(std::size_t n) {
  if (n < 2) throw domain_error("symmetric group needs n >= 2");
  Perm full(n);
  for (std::size_t i = 0; i < n; ++i) full[i] = static_cast<Elem>((i + 1) % n);
  return perm_group({cycle(n, {0, 1}), full}, {});
}

FiniteGroupTable alternating(std::size_t n) {
  if (n < 3) throw domain_error("alternating group needs n >= 3");
  std::vector<Perm> gens;
  for (Elem i = 2; i < n; ++i) gens.push_back(cycle(n, {0, 1, i}));
  return perm_group(gens, {});
}

FiniteGroupTable matrix_group(std::int64_t p, const std::vector<std::array<std::int64_t, 4>> &gens) {
  return mat_group(p, gens, {});
}

std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> out;
  auto with = [](FiniteGroupTable g, std::vector<Elem> gens) {
    auto sub = generated_subgroup(g, gens);
    return g.with_gamma(sub);
  };
  out.push_back({"C4", with(cyclic(4), {2})});
  out.push_back({"C6", with(cyclic(6), {3})});
  out.push_back({"C12", with(cyclic(12), {4})});
  out.push_back({"C2xC2", with(direct_product(cyclic(2), cyclic(2)), {2})});
  out.push_back({"C2xC4", with(direct_product(cyclic(2), cyclic(4)), {2})});
  out.push_back({"C3xC3", with(direct_product(cyclic(3), cyclic(3)), {4})});
  out.push_back({"C4xC4", with(direct_product(cyclic(4), cyclic(4)), {8, 2})});
  out.push_back({"C8xC8", with(direct_product(cyclic(8), cyclic(8)), {10})});
  {
    FiniteGroupTable g = cyclic(2);
    for (int i = 0; i < 5; ++i) g = direct_product(g, cyclic(2));
    out.push_back({"C2^6", with(g, {32, 16})});
  }
  out.push_back({"C2xC4xC8", with(direct_product(direct_product(cyclic(2), cyclic(4)), cyclic(8)), {41})});
  out.push_back({"S3", perm_group({cycle(3, {0, 1}), cycle(3, {0, 1, 2})}, {cycle(3, {0, 1, 2})})});
  out.push_back({"D4", perm_group({rotation(4, 1), reflection(4)}, {rotation(4, 2)})});
  out.push_back({"D5", perm_group({rotation(5, 1), reflection(5)}, {reflection(5)})});
  out.push_back({"D6", perm_group({rotation(6, 1), reflection(6)}, {rotation(6, 3), reflection(6)})});
  out.push_back({"Q8", mat_group(3, {{0, 2, 1, 0}, {1, 1, 1, 2}}, {{2, 0, 0, 2}})});
  out.push_back({"A4", perm_group({cycle(4, {0, 1, 2}), cycle(4, {0, 1, 3})},
                                  {product(cycle(4, {0, 1}), cycle(4, {2, 3})), product(cycle(4, {0, 2}), cycle(4, {1, 3}))})});
  out.push_back({"SL2(F3)", mat_group(3, {{1, 1, 0, 1}, {1, 0, 1, 1}}, {{2, 0, 0, 2}})});
  out.push_back({"S4", perm_group({cycle(4, {0, 1}), cycle(4, {0, 1, 2, 3})}, {cycle(4, {0, 1})})});
  {
    auto s3 = perm_group({cycle(3, {0, 1}), cycle(3, {0, 1, 2})}, {cycle(3, {0, 1})});
    out.push_back({"C5xS3", direct_product(with(cyclic(5), {1}), s3)});
  }
  out.push_back({"GL2(F3)", mat_group(3, {{1, 1, 0, 1}, {1, 0, 1, 1}, {2, 0, 0, 1}}, {{1, 1, 0, 1}})});
  out.push_back({"A5", perm_group({cycle(5, {0, 1, 2}), cycle(5, {0, 1, 2, 3, 4})}, {cycle(5, {0, 1, 2, 3, 4})})});
  out.push_back({"S5", perm_group({cycle(5, {0, 1}), cycle(5, {0, 1, 2, 3, 4})}, {cycle(5, {0, 1, 2}), cycle(5, {0, 1})})});
  out.push_back({"D100", perm_group({rotation(100, 1), reflection(100)}, {rotation(100, 10), reflection(100)})});
  return out;
}

FiniteGroupTable catalog_group(const std::string &name) {
  for (auto &e : catalog())
    if (e.name == name) return e.group;
  throw domain_error("unknown catalog group " + name);
}

} // namespace shimura::trace
