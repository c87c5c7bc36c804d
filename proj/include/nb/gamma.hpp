#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nb/rational.hpp"

namespace nb {

// Multiset of generator indices, kept sorted ascending.
using Monomial = std::vector<int>;

Monomial mono_mul(const Monomial& a, const Monomial& b);

// Sparse polynomial over a countable family of commuting generators.
// Shared backbone of GammaElement (q-generators) and LambdaElement
// (e-generators); zero coefficients are never stored.
class SymPoly {
 public:
  SymPoly() = default;
  explicit SymPoly(const Rational& c) { if (!c.is_zero()) terms_[{}] = c; }
  static SymPoly generator(int r) { SymPoly p; p.terms_[{r}] = Rational(1); return p; }
  static SymPoly monomial(const Monomial& m, const Rational& c) {
    SymPoly p;
    if (!c.is_zero()) p.terms_[m] = c;
    return p;
  }

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }
  Rational constant_term() const {
    auto it = terms_.find({});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const Monomial& m, const Rational& c);

  SymPoly& operator+=(const SymPoly& o);
  SymPoly& operator-=(const SymPoly& o);
  friend SymPoly operator+(SymPoly a, const SymPoly& b) { return a += b; }
  friend SymPoly operator-(SymPoly a, const SymPoly& b) { return a -= b; }
  friend SymPoly operator*(const SymPoly& a, const SymPoly& b);
  SymPoly& operator*=(const SymPoly& o) { *this = *this * o; return *this; }
  friend SymPoly operator*(const Rational& c, const SymPoly& p);
  friend bool operator==(const SymPoly& a, const SymPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const SymPoly& a, const SymPoly& b) { return !(a == b); }
  friend bool operator<(const SymPoly& a, const SymPoly& b);

  // Degree where generator index r contributes weight(r); -1 for zero.
  int degree(int weight_per_index) const;

  bool all_dyadic() const;

  std::string str(char gen) const;  // e.g. gen='q': "1/2*q1^2 + q3"
  std::string json(char key_is_irrelevant = 0) const;

 private:
  std::map<Monomial, Rational> terms_;
};

// --- Gamma: subring of symmetric functions generated by q_r, free on odd r ---

// q_r rewritten in the free odd generators; q_0 = 1 and even q's eliminated
// through q_{2r} = (-1)^{r-1} q_r^2/2 + sum_{s=1}^{r-1} (-1)^{s-1} q_s q_{2r-s}.
const SymPoly& gamma_q(int r);

// Canonical form of an arbitrary polynomial in q_r (r >= 0): substitute each
// index through gamma_q. Input monomials use raw q-indices.
SymPoly gamma_normalize(const SymPoly& raw);

SymPoly gamma_mul(const SymPoly& a, const SymPoly& b);

using GammaElement = SymPoly;   // canonical: only odd indices appear
using LambdaElement = SymPoly;  // e-basis: indices r >= 1 of e_r

// --- Lambda: full ring of symmetric functions in the e-basis ---

const LambdaElement& lambda_e(int r);  // e_r (r >= 0; e_0 = 1, e_{<0} = 0)
const LambdaElement& lambda_h(int r);  // h_r expanded into e's
LambdaElement q_in_lambda(int r);      // coefficient of u^{-r} in e(u)h(u)

// --- Closed nil-Brauer circles ---

// Value of the circle with r dots (dots on the right edge of the circle):
// r = 0 gives t, r >= 1 gives (-1)^{t+1} q_r / 2.
GammaElement bubble_scalar(int r, int t);

// --- Truncated formal series in u^{-1} ---

// Powers run from u^{hi} down to u^{-valid_order}; coefficients outside the
// window are unknown (not zero).  Arithmetic shrinks valid_order so that no
// unknown coefficient is ever read.
template <class R>
class FormalSeries {
 public:
  FormalSeries() : hi_(0), order_(-1) {}
  FormalSeries(int hi, int order) : hi_(hi), order_(order) {
    if (hi_ + order_ + 1 > 0) coef_.resize(hi_ + order_ + 1);
  }

  static FormalSeries one(int order) {
    FormalSeries s(0, order);
    s.set(0, R(Rational(1)));
    return s;
  }

  int hi() const { return hi_; }
  int order() const { return order_; }

  R coeff(int power) const {
    if (power > hi_) return R();
    if (power < -order_) throw std::out_of_range("series coefficient below valid order");
    return coef_[hi_ - power];
  }
  void set(int power, const R& v) {
    if (power > hi_ || power < -order_) throw std::out_of_range("series power out of window");
    coef_[hi_ - power] = v;
  }

  FormalSeries operator+(const FormalSeries& o) const {
    int hi = std::max(hi_, o.hi_);
    int ord = std::min(order_, o.order_);
    FormalSeries r(hi, ord);
    for (int p = hi; p >= -ord; --p) {
      R v{};
      if (p <= hi_ && p >= -order_) v += coeff(p);
      if (p <= o.hi_ && p >= -o.order_) v += o.coeff(p);
      r.set(p, v);
    }
    return r;
  }

  FormalSeries operator*(const FormalSeries& o) const {
    // A coefficient of u^p in the product is complete iff every split with
    // one factor's power below its window is impossible: p >= hi_ - o.order_
    // and p >= o.hi_ - order_ fail first at the bottom of the window.
    int hi = hi_ + o.hi_;
    int ord = std::min(order_ - o.hi_, o.order_ - hi_);
    FormalSeries r(hi, ord);
    if (hi + ord + 1 <= 0) return r;
    for (int p = hi; p >= -ord; --p) {
      R v{};
      for (int a = std::max(p - o.hi_, -order_); a <= hi_ && p - a >= -o.order_; ++a)
        v += coeff(a) * o.coeff(p - a);
      r.set(p, v);
    }
    return r;
  }

  FormalSeries scaled(const R& c) const {
    FormalSeries r = *this;
    for (auto& v : r.coef_) v = v * c;
    return r;
  }

  // Substitute u -> -u.
  FormalSeries negate_u() const {
    FormalSeries r = *this;
    for (int p = hi_; p >= -order_; --p)
      if (((p % 2) + 2) % 2 == 1) r.set(p, R() - coeff(p));
    return r;
  }

  FormalSeries truncated(int order) const {
    if (order > order_) throw std::invalid_argument("cannot extend a series");
    FormalSeries r(hi_, order);
    for (int p = hi_; p >= -order; --p) r.set(p, coeff(p));
    return r;
  }

  bool operator==(const FormalSeries& o) const {
    int hi = std::max(hi_, o.hi_);
    int ord = std::min(order_, o.order_);
    for (int p = hi; p >= -ord; --p) {
      R a = (p <= hi_) ? coeff(p) : R();
      R b = (p <= o.hi_) ? o.coeff(p) : R();
      if (!(a == b)) return false;
    }
    return true;
  }

 private:
  int hi_;
  int order_;
  std::vector<R> coef_;  // coef_[i] is the coefficient of u^{hi_ - i}
};

// Multiplicative inverse up to the order forced by the input window.  The
// leading (highest-power) coefficient must be a unit; `unit_inverse` supplies
// inverses in R.
template <class R, class Inv>
FormalSeries<R> series_invert(const FormalSeries<R>& s, Inv unit_inverse) {
  int lead = s.hi();
  R lc = s.coeff(lead);
  R lci = unit_inverse(lc);
  // (sum_{k>=0} c_k u^{lead-k})^{-1} = u^{-lead} * (c_0 + c_1 u^{-1} + ...)^{-1}
  int n = s.hi() + s.order();  // number of known coefficients minus one
  FormalSeries<R> r(-lead, lead + n);
  std::vector<R> inv(n + 1);
  inv[0] = lci;
  for (int k = 1; k <= n; ++k) {
    R acc{};
    for (int j = 1; j <= k; ++j) acc += s.coeff(lead - j) * inv[k - j];
    inv[k] = R() - lci * acc;
  }
  for (int k = 0; k <= n; ++k) r.set(-lead - k, inv[k]);
  return r;
}

using RationalSeries = FormalSeries<Rational>;
using LambdaSeries = FormalSeries<LambdaElement>;
using GammaSeries = FormalSeries<GammaElement>;

// e(u), h(u) and q(u) = e(u)h(u) as series with LambdaElement coefficients.
LambdaSeries e_series(int order, bool negate_u = false);
LambdaSeries h_series(int order, bool negate_u = false);
LambdaSeries q_series(int order, bool negate_u = false);

// O(u) = 1 + sum_{r>=1} O_r u^{-r} with O_r = gamma_q(r) under gamma_t.
GammaSeries obubble_series(int order, int t);

std::string rational_json(const Rational& c);

}  // namespace nb
