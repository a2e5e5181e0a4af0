#include "shimura/core/scalar.hpp"

#include "shimura/core/errors.hpp"

#include <cctype>
#include <numeric>

namespace shimura {

Rational make_rational(const Integer &num, const Integer &den) {
  if (den == 0) throw domain_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational &q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool valid_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  if (!valid_integer_literal(s))
    throw input_error("malformed integer literal '" + std::string(s) + "'");
  if (s[0] == '+') s.remove_prefix(1);
  return Integer(std::string(s));
}

} // namespace

Rational parse_rational(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s));
  return make_rational(parse_integer(s.substr(0, slash)),
                       parse_integer(s.substr(slash + 1)));
}

bool is_integer(const Rational &q) { return q.get_den() == 1; }

Integer floor(const Rational &q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

GaussianRational &GaussianRational::operator/=(const GaussianRational &o) {
  Rational n = o.norm();
  if (sgn(n) == 0) throw domain_error("division by zero in Q(i)");
  *this *= o.conj();
  re /= n;
  im /= n;
  return *this;
}

std::string to_string(const GaussianRational &z) {
  std::string out = to_string(z.re);
  if (sgn(z.im) < 0)
    out += "-" + to_string(Rational(-z.im));
  else
    out += "+" + to_string(z.im);
  return out + "*i";
}

GaussianRational parse_gaussian(std::string_view s) {
  if (s.empty()) throw input_error("empty Gaussian rational literal");
  if (s.back() != 'i') return GaussianRational(parse_rational(s));
  std::string_view body = s.substr(0, s.size() - 1);
  if (!body.empty() && body.back() == '*') body.remove_suffix(1);
  // split at the last sign that is not the leading one
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if (body[k] == '+' || body[k] == '-') {
      split = k;
      break;
    }
  }
  Rational re(0);
  std::string_view imtext = body;
  if (split != std::string_view::npos) {
    re = parse_rational(body.substr(0, split));
    imtext = body.substr(split);
  }
  Rational im;
  if (imtext.empty() || imtext == "+")
    im = 1;
  else if (imtext == "-")
    im = -1;
  else
    im = parse_rational(imtext);
  return {re, im};
}

std::ostream &operator<<(std::ostream &os, const GaussianRational &z) {
  return os << to_string(z);
}

std::int64_t mod(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

std::int64_t mod(const Integer &a, std::int64_t n) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(n));
  return r.get_si();
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t n) {
  return static_cast<std::int64_t>(
      mod(static_cast<std::int64_t>((static_cast<__int128>(a) * b) % n), n));
}

std::int64_t inv_mod(std::int64_t a, std::int64_t n) {
  if (n == 1) return 0;
  std::int64_t r0 = n, r1 = mod(a, n), s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1)
    throw domain_error(std::to_string(a) + " is not a unit mod " + std::to_string(n));
  return mod(s0, n);
}

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t k = 2; k * k <= p; ++k)
    if (p % k == 0) return false;
  return true;
}

ModN::ModN(std::int64_t v, std::int64_t n) : value(0), modulus(n) {
  if (n < 1) throw domain_error("modulus must be positive");
  value = mod(v, n);
}

bool ModN::is_unit() const { return gcd64(value, modulus) == 1; }

ModN ModN::inverse() const { return {inv_mod(value, modulus), modulus}; }

ModN ModN::operator+(const ModN &o) const {
  if (o.modulus != modulus) throw shape_error("modulus mismatch");
  return {value + o.value, modulus};
}
ModN ModN::operator-(const ModN &o) const {
  if (o.modulus != modulus) throw shape_error("modulus mismatch");
  return {value - o.value, modulus};
}
ModN ModN::operator*(const ModN &o) const {
  if (o.modulus != modulus) throw shape_error("modulus mismatch");
  return {mul_mod(value, o.value, modulus), modulus};
}

} // namespace shimura
