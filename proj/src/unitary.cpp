#include "shimura/unitary.hpp"

#include "shimura/core/matrix.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace shimura::unitary {

SignVector::SignVector(std::size_t p_, std::size_t q_, std::uint32_t xi_) : p(p_), q(q_), xi(xi_) {
  if (p + q == 0) throw domain_error("need p + q >= 1");
  if (p + q > 31) throw domain_error("too many coordinates");
  if (xi >> (p + q)) throw domain_error("Xi contains a coordinate beyond p + q");
}

SignVector SignVector::from_set(std::size_t p, std::size_t q, const std::vector<std::size_t> &coords) {
  std::uint32_t mask = 0;
  for (auto c : coords) {
    if (c < 1 || c > p + q) throw domain_error("coordinate out of range");
    mask |= 1u << (c - 1);
  }
  return SignVector(p, q, mask);
}

std::size_t SignVector::p_xi() const {
  return static_cast<std::size_t>(__builtin_popcount(xi & ((1u << p) - 1)));
}

std::size_t SignVector::q_xi() const { return static_cast<std::size_t>(__builtin_popcount(xi >> p)); }

std::vector<std::size_t> SignVector::coordinates() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 1; j <= p + q; ++j)
    if (contains(j)) out.push_back(j);
  return out;
}

SignVector sigma_action(const SignVector &v) {
  if (v.p == 0 || v.q == 0) throw domain_error("sigma needs p >= 1 and q >= 1");
  const std::uint32_t a = 1u, b = 1u << v.p;
  bool in_a = v.xi & a, in_b = v.xi & b;
  if (in_a != in_b) return v;
  return SignVector(v.p, v.q, v.xi ^ a ^ b);
}

SignVector sigma_oracle(const SignVector &v) {
  if (v.p == 0 || v.q == 0) throw domain_error("sigma needs p >= 1 and q >= 1");
  const std::size_t n = v.p + v.q;
  CMatrix c(n, n), w(n, n);
  for (std::size_t j = 0; j < n; ++j) c(j, j) = GaussianRational(v.contains(j + 1) ? -1 : 1);
  for (std::size_t j = 0; j < n; ++j)
    if (j != 0 && j != v.p) w(j, j) = GaussianRational(1);
  w(0, v.p) = w(v.p, 0) = GaussianRational::i();
  QMatrix r = inverse(realify(w)) * realify(c) * realify(conj(w));
  std::uint32_t mask = 0;
  for (std::size_t j = 0; j < n; ++j) {
    QMatrix block = r.block(2 * j, 2 * j, 2, 2);
    if (block == QMatrix::identity(2) * Rational(-1))
      mask |= 1u << j;
    else if (!(block == QMatrix::identity(2)))
      throw internal_error("twisted conjugate is not a sign matrix");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && !r.block(2 * i, 2 * j, 2, 2).is_zero()) throw internal_error("twisted conjugate is not diagonal");
  return SignVector(v.p, v.q, mask);
}

namespace {

std::size_t find(std::vector<std::uint32_t> &parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

void unite(std::vector<std::uint32_t> &parent, std::size_t a, std::size_t b) {
  a = find(parent, a);
  b = find(parent, b);
  if (a != b) parent[std::max(a, b)] = static_cast<std::uint32_t>(std::min(a, b));
}

std::uint32_t swap_bits(std::uint32_t x, std::size_t i, std::size_t j) {
  std::uint32_t bi = (x >> i) & 1u, bj = (x >> j) & 1u;
  if (bi == bj) return x;
  return x ^ (1u << i) ^ (1u << j);
}

} // namespace

std::vector<Orbit> orbit_decomposition(std::size_t p, std::size_t q, std::size_t budget) {
  const std::size_t n = p + q;
  if (n == 0) throw domain_error("need p + q >= 1");
  if (n > budget) throw resource_error("2^" + std::to_string(n) + " sign vectors exceed the budget");
  const std::size_t total = std::size_t{1} << n;
  std::vector<std::uint32_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0u);
  for (std::uint32_t x = 0; x < total; ++x) {
    for (std::size_t i = 0; i + 1 < p; ++i) unite(parent, x, swap_bits(x, i, i + 1));
    for (std::size_t i = p; i + 1 < n; ++i) unite(parent, x, swap_bits(x, i, i + 1));
    if (p > 0 && q > 0) unite(parent, x, sigma_action(SignVector(p, q, x)).xi);
  }
  std::map<std::size_t, Orbit> by_root;
  for (std::uint32_t x = 0; x < total; ++x) by_root[find(parent, x)].members.push_back(SignVector(p, q, x));
  std::vector<Orbit> out;
  for (auto &[root, orbit] : by_root) out.push_back(std::move(orbit));
  return out;
}

std::vector<SignVector> kernel_to_G(std::size_t p, std::size_t q) {
  for (const auto &o : orbit_decomposition(p, q))
    if (o.members.front().xi == 0) return o.members;
  throw internal_error("orbit of c_empty missing");
}

std::vector<SignVector> canonical_representatives(std::size_t p, std::size_t q) {
  std::vector<SignVector> out{SignVector(p, q, 0)};
  for (std::size_t r = 1; r <= p; ++r) out.push_back(SignVector(p, q, (1u << r) - 1));
  for (std::size_t s = 1; s <= q; ++s) out.push_back(SignVector(p, q, ((1u << s) - 1) << p));
  return out;
}

void check_datum(const LocalInnerFormDatum &datum, std::size_t n) {
  if (n == 0) throw domain_error("n must be positive");
  switch (datum.kind) {
  case PlaceKind::Real:
    if (datum.p + datum.q != n) throw domain_error("real signature must satisfy p + q = n");
    break;
  case PlaceKind::FiniteSplit:
    if (datum.m == 0 || n % datum.m != 0) throw domain_error("split place needs m dividing n");
    break;
  case PlaceKind::FiniteNonsplit:
    break;
  }
}

int epsilon(const LocalInnerFormDatum &datum, std::size_t n) {
  check_datum(datum, n);
  if (n % 2 != 0) throw domain_error("epsilon is only defined for even n");
  auto sign = [](long e) { return e % 2 == 0 ? 1 : -1; };
  switch (datum.kind) {
  case PlaceKind::Real:
    return sign(static_cast<long>(n / 2) - static_cast<long>(datum.p));
  case PlaceKind::FiniteSplit:
    return sign(static_cast<long>(datum.m));
  case PlaceKind::FiniteNonsplit:
    return datum.quasi_split ? 1 : -1;
  }
  throw internal_error("unknown place kind");
}

bool global_exists(const std::vector<LocalInnerFormDatum> &data, std::size_t n) {
  for (const auto &d : data) check_datum(d, n);
  if (n % 2 != 0) return true;
  int product = 1;
  for (const auto &d : data) product *= epsilon(d, n);
  return product == 1;
}

bool division_algebra_sufficient(const std::vector<std::size_t> &split_ms, std::size_t n) {
  if (split_ms.empty()) return false;
  std::size_t g = 0;
  for (auto m : split_ms) {
    if (m == 0 || n % m != 0) throw domain_error("each m_v must divide n");
    g = std::gcd(g, m);
  }
  return g == 1;
}

} // namespace shimura::unitary
