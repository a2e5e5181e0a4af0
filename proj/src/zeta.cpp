#include "shimura/zeta.hpp"

#include "shimura/core/matrix.hpp"

#include <algorithm>

namespace shimura::zeta {

namespace {

using Poly = std::vector<std::int64_t>; // lowest degree first

void trim(Poly &f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_rem(Poly a, const Poly &b, std::int64_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  std::int64_t lead_inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    std::int64_t f = mul_mod(a.back(), lead_inv, p);
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] = mod(a[shift + i] - mul_mod(f, b[i], p), p);
    trim(a);
  }
  return a;
}

std::vector<std::int64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::int64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(static_cast<std::int64_t>(d));
      while (n % d == 0) n /= d;
    }
  if (n > 1) out.push_back(static_cast<std::int64_t>(n));
  return out;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t e, std::uint64_t cap) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (base != 0 && out > cap / base) return cap + 1;
    out *= base;
  }
  return out;
}

} // namespace

bool is_irreducible_mod_p(const std::vector<std::int64_t> &monic, std::int64_t p) {
  const std::size_t deg = monic.size() - 1;
  if (monic.empty() || monic.back() != 1) throw domain_error("expected a monic polynomial");
  if (deg <= 1) return deg == 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = checked_pow(static_cast<std::uint64_t>(p), d, ~std::uint64_t{0} >> 1);
    for (std::uint64_t n = 0; n < count; ++n) {
      Poly g(d + 1);
      std::uint64_t x = n;
      for (std::size_t i = 0; i < d; ++i, x /= static_cast<std::uint64_t>(p)) g[i] = static_cast<std::int64_t>(x % p);
      g[d] = 1;
      if (poly_rem(monic, g, p).empty()) return false;
    }
  }
  return true;
}

std::vector<std::int64_t> least_irreducible(std::int64_t p, unsigned k) {
  if (!is_prime(p)) throw domain_error("field characteristic must be prime");
  if (k == 0) throw domain_error("extension degree must be positive");
  std::uint64_t count = checked_pow(static_cast<std::uint64_t>(p), k, FiniteField::max_size);
  if (count > FiniteField::max_size) throw resource_error("field too large");
  for (std::uint64_t n = 0; n < count; ++n) {
    Poly f(k + 1);
    std::uint64_t x = n;
    for (unsigned i = 0; i < k; ++i, x /= static_cast<std::uint64_t>(p)) f[i] = static_cast<std::int64_t>(x % p);
    f[k] = 1;
    if (is_irreducible_mod_p(f, p)) return f;
  }
  throw internal_error("no irreducible polynomial found");
}

FiniteField::FiniteField(std::int64_t p, unsigned k) : p_(p), k_(k) {
  if (!is_prime(p)) throw domain_error("field characteristic must be prime");
  if (k == 0) throw domain_error("extension degree must be positive");
  q_ = checked_pow(static_cast<std::uint64_t>(p), k, max_size);
  if (q_ > max_size) throw resource_error("F_" + std::to_string(p) + "^" + std::to_string(k) + " exceeds the table limit");
  modulus_ = least_irreducible(p, k);

  auto unpack = [&](std::uint64_t x) {
    Poly d(k);
    for (unsigned i = 0; i < k; ++i, x /= static_cast<std::uint64_t>(p)) d[i] = static_cast<std::int64_t>(x % p);
    return d;
  };
  auto pack = [&](const Poly &d) {
    std::uint64_t x = 0;
    for (unsigned i = k; i-- > 0;) x = x * static_cast<std::uint64_t>(p) + static_cast<std::uint64_t>(d[i]);
    return static_cast<Elem>(x);
  };
  auto polymul = [&](Elem a, Elem b) {
    Poly x = unpack(a), y = unpack(b), prod(2 * k - 1, 0);
    for (unsigned i = 0; i < k; ++i)
      for (unsigned j = 0; j < k; ++j) prod[i + j] = mod(prod[i + j] + mul_mod(x[i], y[j], p), p);
    Poly r = poly_rem(prod, modulus_, p);
    r.resize(k, 0);
    return pack(r);
  };
  auto polypow = [&](Elem a, std::uint64_t e) {
    Elem out = 1;
    while (e) {
      if (e & 1) out = polymul(out, a);
      a = polymul(a, a);
      e >>= 1;
    }
    return out;
  };

  const std::uint64_t order = q_ - 1;
  auto divisors = prime_divisors(order);
  Elem g = 0;
  for (std::uint64_t cand = 1; cand < q_ && g == 0; ++cand) {
    bool primitive = true;
    for (auto l : divisors)
      if (polypow(static_cast<Elem>(cand), order / static_cast<std::uint64_t>(l)) == 1) {
        primitive = false;
        break;
      }
    if (primitive) g = static_cast<Elem>(cand);
  }
  if (g == 0) throw internal_error("no primitive element");

  exp_.resize(order);
  log_.assign(q_, 0);
  Elem x = 1;
  for (std::uint64_t e = 0; e < order; ++e) {
    exp_[e] = x;
    log_[x] = static_cast<std::uint32_t>(e);
    x = polymul(x, g);
  }
  if (x != 1) throw internal_error("generator order mismatch");

  zech_.resize(order);
  for (std::uint64_t d = 0; d < order; ++d) {
    Poly a = unpack(exp_[d]);
    a[0] = mod(a[0] + 1, p);
    Elem s = pack(a);
    zech_[d] = s == 0 ? -1 : static_cast<std::int64_t>(log_[s]);
  }
}

FiniteField::Elem FiniteField::from_int(std::int64_t a) const { return static_cast<Elem>(mod(a, p_)); }

FiniteField::Elem FiniteField::add(Elem a, Elem b) const {
  if (a == 0) return b;
  if (b == 0) return a;
  const std::uint64_t order = q_ - 1;
  std::uint64_t la = log_[a], lb = log_[b];
  std::uint64_t d = lb >= la ? lb - la : lb + order - la;
  std::int64_t z = zech_[d];
  if (z < 0) return 0;
  std::uint64_t e = la + static_cast<std::uint64_t>(z);
  if (e >= order) e -= order;
  return exp_[e];
}

FiniteField::Elem FiniteField::neg(Elem a) const {
  if (a == 0 || p_ == 2) return a;
  const std::uint64_t order = q_ - 1;
  std::uint64_t e = log_[a] + order / 2;
  if (e >= order) e -= order;
  return exp_[e];
}

FiniteField::Elem FiniteField::inv(Elem a) const {
  if (a == 0) throw domain_error("zero has no inverse");
  const std::uint64_t order = q_ - 1;
  return exp_[(order - log_[a]) % order];
}

FiniteField::Elem FiniteField::pow(Elem a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  const std::uint64_t order = q_ - 1;
  unsigned __int128 x = static_cast<unsigned __int128>(log_[a]) * (e % order);
  return exp_[static_cast<std::uint64_t>(x % order)];
}

std::vector<FiniteField::Elem> FiniteField::subfield(unsigned d) const {
  std::uint64_t frob = checked_pow(static_cast<std::uint64_t>(p_), d, ~std::uint64_t{0} >> 2);
  std::vector<Elem> out;
  for (std::uint64_t x = 0; x < q_; ++x)
    if (pow(static_cast<Elem>(x), frob) == x) out.push_back(static_cast<Elem>(x));
  return out;
}

std::uint64_t VarietySpec::q() const { return checked_pow(static_cast<std::uint64_t>(p), k, ~std::uint64_t{0} >> 2); }

void VarietySpec::validate() const {
  if (!is_prime(p)) throw domain_error("p must be prime");
  if (k == 0) throw domain_error("k must be positive");
  const std::size_t n = variables();
  for (const auto &eq : equations) {
    long degree = -1;
    for (const auto &t : eq) {
      if (t.exponents.size() != n) throw domain_error("term has " + std::to_string(t.exponents.size()) + " exponents, expected " + std::to_string(n));
      if (mod(t.coeff, p) == 0) continue;
      long deg = 0;
      for (auto e : t.exponents) deg += e;
      if (ambient == Ambient::Projective) {
        if (degree >= 0 && deg != degree) throw domain_error("projective equations must be homogeneous");
        degree = deg;
      }
    }
  }
}

namespace {

struct CompiledTerm {
  FiniteField::Elem coeff;
  std::vector<std::pair<std::size_t, unsigned>> powers;
};

std::vector<std::vector<CompiledTerm>> compile(const VarietySpec &v, const FiniteField &f) {
  std::vector<std::vector<CompiledTerm>> out;
  for (const auto &eq : v.equations) {
    std::vector<CompiledTerm> terms;
    for (const auto &t : eq) {
      auto c = f.from_int(t.coeff);
      if (c == 0) continue;
      CompiledTerm ct{c, {}};
      for (std::size_t i = 0; i < t.exponents.size(); ++i)
        if (t.exponents[i] > 0) ct.powers.emplace_back(i, t.exponents[i]);
      terms.push_back(std::move(ct));
    }
    out.push_back(std::move(terms));
  }
  return out;
}

bool on_variety(const FiniteField &f, const std::vector<std::vector<CompiledTerm>> &eqs,
                const std::vector<FiniteField::Elem> &x) {
  for (const auto &eq : eqs) {
    FiniteField::Elem s = 0;
    for (const auto &t : eq) {
      FiniteField::Elem v = t.coeff;
      for (const auto &[i, e] : t.powers) {
        v = f.mul(v, f.pow(x[i], e));
        if (v == 0) break;
      }
      s = f.add(s, v);
    }
    if (s != 0) return false;
  }
  return true;
}

// Points with x = (fixed..., lead, free...) where the free odometer runs over F^rest.
std::uint64_t count_block(const FiniteField &f, const std::vector<std::vector<CompiledTerm>> &eqs,
                          std::vector<FiniteField::Elem> x, std::size_t lead, FiniteField::Elem lead_value) {
  x[lead] = lead_value;
  const std::size_t n = x.size();
  for (std::size_t i = lead + 1; i < n; ++i) x[i] = 0;
  std::uint64_t count = 0;
  const auto q = static_cast<FiniteField::Elem>(f.size());
  while (true) {
    if (on_variety(f, eqs, x)) ++count;
    std::size_t i = n;
    while (true) {
      if (i == lead + 1) return count;
      --i;
      if (++x[i] < q) break;
      x[i] = 0;
    }
  }
}

// Sum over lead values of count_block; the prefix is fixed.
std::uint64_t count_slab(const FiniteField &f, const std::vector<std::vector<CompiledTerm>> &eqs,
                         const std::vector<FiniteField::Elem> &prefix, std::size_t lead, Exec exec) {
  const std::int64_t q = static_cast<std::int64_t>(f.size());
  std::uint64_t total = 0;
  if (exec == Exec::Parallel) {
#pragma omp parallel for reduction(+ : total) schedule(dynamic, 1)
    for (std::int64_t a = 0; a < q; ++a) total += count_block(f, eqs, prefix, lead, static_cast<FiniteField::Elem>(a));
  } else {
    for (std::int64_t a = 0; a < q; ++a) total += count_block(f, eqs, prefix, lead, static_cast<FiniteField::Elem>(a));
  }
  return total;
}

} // namespace

std::uint64_t count_points(const VarietySpec &v, unsigned r, Exec exec, std::uint64_t budget) {
  v.validate();
  if (r == 0) throw domain_error("r must be positive");
  const std::size_t n = v.variables();
  const std::uint64_t big_q = checked_pow(v.q(), r, FiniteField::max_size);
  if (big_q > FiniteField::max_size) throw resource_error("F_{q^r} exceeds the field table limit");
  const std::size_t m = v.dim;
  if (checked_pow(big_q, m, budget) > budget)
    throw resource_error("q^(r m) = " + std::to_string(big_q) + "^" + std::to_string(m) + " exceeds the budget");
  FiniteField f(v.p, v.k * r);
  auto eqs = compile(v, f);
  std::vector<FiniteField::Elem> x(n, 0);
  if (n == 0) return on_variety(f, eqs, x) ? 1 : 0;
  if (v.ambient == Ambient::Affine) return count_slab(f, eqs, x, 0, exec);
  // Normalized representatives: first nonzero coordinate equal to 1.
  std::uint64_t total = 0;
  for (std::size_t lead = 0; lead < n; ++lead) {
    std::vector<FiniteField::Elem> prefix(n, 0);
    prefix[lead] = 1;
    if (lead + 1 == n) {
      total += on_variety(f, eqs, prefix) ? 1 : 0;
      continue;
    }
    total += count_slab(f, eqs, prefix, lead + 1, exec);
  }
  return total;
}

std::vector<std::uint64_t> count_series(const VarietySpec &v, unsigned max_r, Exec exec, std::uint64_t budget) {
  std::vector<std::uint64_t> out;
  for (unsigned r = 1; r <= max_r; ++r) out.push_back(count_points(v, r, exec, budget));
  return out;
}

std::vector<Rational> zeta_series(const std::vector<Integer> &counts, std::size_t precision) {
  if (counts.size() < precision) throw domain_error("not enough counts for the requested precision");
  std::vector<Rational> z(precision + 1);
  z[0] = 1;
  for (std::size_t n = 1; n <= precision; ++n) {
    Rational s = 0;
    for (std::size_t r = 1; r <= n; ++r) s += Rational(counts[r - 1]) * z[n - r];
    z[n] = s / Rational(static_cast<long>(n));
  }
  return z;
}

std::vector<Integer> counts_from_series(const std::vector<Rational> &z) {
  if (z.empty() || z[0] != 1) throw domain_error("series must start with 1");
  std::vector<Integer> counts;
  for (std::size_t n = 1; n < z.size(); ++n) {
    Rational s = Rational(static_cast<long>(n)) * z[n];
    for (std::size_t r = 1; r < n; ++r) s -= Rational(counts[r - 1]) * z[n - r];
    if (s.get_den() != 1) throw domain_error("series is not a zeta series of integer counts");
    counts.push_back(s.get_num());
  }
  return counts;
}

RationalZeta rational_recovery(const std::vector<Rational> &z, std::size_t deg_p, std::size_t deg_q) {
  if (z.empty() || z[0] != 1) throw domain_error("series must start with 1");
  const std::size_t precision = z.size() - 1;
  if (z.size() < deg_p + deg_q + 1)
    throw recovery_error(std::to_string(z.size()) + " coefficients are fewer than deg P + deg Q + 1");
  for (std::size_t total = 0; total <= deg_p + deg_q; ++total)
    for (std::size_t dq = 0; dq <= std::min(total, deg_q); ++dq) {
      std::size_t dp = total - dq;
      if (dp > deg_p) continue;
      // z_n + sum_{j=1}^{dq} q_j z_{n-j} = 0 for dp < n <= precision
      const std::size_t eqs = precision - dp;
      std::vector<Rational> qcoef(dq + 1, 0);
      qcoef[0] = 1;
      if (dq > 0) {
        QMatrix a(eqs, dq), b(eqs, 1);
        for (std::size_t row = 0; row < eqs; ++row) {
          std::size_t n = dp + 1 + row;
          for (std::size_t j = 1; j <= dq; ++j) a(row, j - 1) = n >= j ? z[n - j] : Rational(0);
          b(row, 0) = -z[n];
        }
        auto sol = solve(a, b);
        if (!sol) continue;
        for (std::size_t j = 1; j <= dq; ++j) qcoef[j] = (*sol)(j - 1, 0);
      }
      std::vector<Rational> prod(precision + 1, 0);
      for (std::size_t n = 0; n <= precision; ++n)
        for (std::size_t j = 0; j <= std::min(n, dq); ++j) prod[n] += qcoef[j] * z[n - j];
      bool ok = true;
      for (std::size_t n = dp + 1; n <= precision && ok; ++n) ok = prod[n] == 0;
      if (!ok) continue;
      RationalZeta out;
      for (std::size_t j = 0; j <= dp; ++j) {
        if (prod[j].get_den() != 1) throw recovery_error("recovered P has non-integral coefficients");
        out.p.push_back(prod[j].get_num());
      }
      for (const auto &c : qcoef) {
        if (c.get_den() != 1) throw recovery_error("recovered Q has non-integral coefficients");
        out.q.push_back(c.get_num());
      }
      while (out.p.size() > 1 && out.p.back() == 0) out.p.pop_back();
      while (out.q.size() > 1 && out.q.back() == 0) out.q.pop_back();
      return out;
    }
  throw recovery_error("no rational function within the degree bounds");
}

std::vector<Integer> reciprocal_power_sums(const std::vector<Integer> &c, std::size_t n) {
  if (c.empty() || c[0] != 1) throw domain_error("polynomial must have constant term 1");
  std::vector<Integer> s(n + 1, 0);
  for (std::size_t r = 1; r <= n; ++r) {
    Integer v = r < c.size() ? Integer(c[r] * static_cast<long>(r)) : Integer(0);
    for (std::size_t j = 1; j < r && j < c.size(); ++j) v += c[j] * s[r - j];
    s[r] = -v;
  }
  s.erase(s.begin());
  return s;
}

bool lefschetz_consistency(const RationalZeta &z, const std::vector<Integer> &counts) {
  auto sq = reciprocal_power_sums(z.q, counts.size());
  auto sp = reciprocal_power_sums(z.p, counts.size());
  for (std::size_t r = 0; r < counts.size(); ++r)
    if (sq[r] - sp[r] != counts[r]) return false;
  return true;
}

bool functional_equation_holds(const std::vector<Integer> &p, const Integer &q) {
  if (p.empty()) return false;
  const std::size_t deg = p.size() - 1;
  if (deg % 2 != 0) return false;
  const std::size_t g = deg / 2;
  auto qpow = [&](std::size_t e) {
    Integer out = 1;
    for (std::size_t i = 0; i < e; ++i) out *= q;
    return out;
  };
  for (std::size_t m = 0; m <= deg; ++m) {
    if (m >= g) {
      if (p[m] != p[deg - m] * qpow(m - g)) return false;
    } else if (p[m] * qpow(g - m) != p[deg - m]) {
      return false;
    }
  }
  return true;
}

} // namespace shimura::zeta
