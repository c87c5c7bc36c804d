#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace nb {

// Exact rational scalar. Thin wrapper over GMP keeping the value canonical
// (coprime numerator/denominator, denominator > 0).
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(static_cast<long>(n)) {}
  Rational(long num, long den) : v_(num, den) { v_.canonicalize(); }
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  static Rational from_string(const std::string& s) {
    mpq_class q(s);
    q.canonicalize();
    return Rational(q);
  }

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  // True when the denominator is a power of two. The defining relations only
  // ever divide by 2, so every scalar the engines produce from integer input
  // must satisfy this.
  bool is_dyadic() const {
    mpz_class d = v_.get_den();
    return mpz_scan1(d.get_mpz_t(), 0) == mpz_sizeinbase(d.get_mpz_t(), 2) - 1;
  }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) { v_ /= o.v_; return *this; }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

  std::string str() const { return v_.get_str(); }

 private:
  mpq_class v_;
};

inline Rational rational_pow(const Rational& a, int k) {
  Rational r(1);
  Rational base = a;
  int e = k;
  if (e < 0) { base = Rational(1) / base; e = -e; }
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

inline Rational binomial(long n, long k) {
  // Generalized binomial: n may be negative, k >= 0.
  if (k < 0) return Rational(0);
  Rational r(1);
  for (long i = 0; i < k; ++i) r *= Rational(n - i, i + 1);
  return r;
}

}  // namespace nb
