#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace shimura {

using Integer = mpz_class;
/// Arbitrary precision rational; GMP keeps every arithmetic result in lowest
/// terms with a positive denominator.
using Rational = mpq_class;

/// Canonicalized num/den. Throws on zero denominator.
Rational make_rational(const Integer &num, const Integer &den = 1);

/// "a" for integers, "a/b" otherwise.
std::string to_string(const Rational &q);
Rational parse_rational(std::string_view s);

bool is_integer(const Rational &q);
Integer floor(const Rational &q);

/// Element re + im*i of Q(i).
struct GaussianRational {
  Rational re{0};
  Rational im{0};

  GaussianRational() = default;
  GaussianRational(int r) : re(r), im(0) {}
  GaussianRational(Rational r) : re(std::move(r)), im(0) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  GaussianRational conj() const { return {re, -im}; }
  /// re^2 + im^2
  Rational norm() const { return re * re + im * im; }
  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }

  GaussianRational &operator+=(const GaussianRational &o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational &operator-=(const GaussianRational &o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational &operator*=(const GaussianRational &o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  GaussianRational &operator/=(const GaussianRational &o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational &b) {
    return a += b;
  }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational &b) {
    return a -= b;
  }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational &b) {
    return a *= b;
  }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational &b) {
    return a /= b;
  }
  friend GaussianRational operator-(const GaussianRational &a) { return {-a.re, -a.im}; }
  friend bool operator==(const GaussianRational &a, const GaussianRational &b) {
    return a.re == b.re && a.im == b.im;
  }
};

std::string to_string(const GaussianRational &z);
/// Accepts "a/b+c/d*i", "a-c*i", "c*i", "i", "-i" and plain rationals.
GaussianRational parse_gaussian(std::string_view s);
std::ostream &operator<<(std::ostream &os, const GaussianRational &z);

/// Residue class modulo n >= 1, stored in [0, n).
struct ModN {
  std::int64_t value = 0;
  std::int64_t modulus = 1;

  ModN() = default;
  ModN(std::int64_t v, std::int64_t n);

  bool is_unit() const;
  ModN inverse() const; // throws domain_error for non-units
  ModN operator+(const ModN &o) const;
  ModN operator-(const ModN &o) const;
  ModN operator*(const ModN &o) const;
  friend bool operator==(const ModN &, const ModN &) = default;
};

std::int64_t mod(std::int64_t a, std::int64_t n);
std::int64_t mod(const Integer &a, std::int64_t n);
std::int64_t gcd64(std::int64_t a, std::int64_t b);
/// Inverse of a modulo n; throws domain_error if gcd(a, n) != 1.
std::int64_t inv_mod(std::int64_t a, std::int64_t n);
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t n);
bool is_prime(std::int64_t p);

} // namespace shimura
