#pragma once

#include <map>

#include "nb/diagram.hpp"
#include "nb/gamma.hpp"

namespace nb {

// Gamma-linear combination of basis diagrams with common arities.
struct Morphism {
  int n = 0, m = 0;
  std::map<BasisDiagram, GammaElement> terms;

  Morphism() = default;
  Morphism(int n_, int m_) : n(n_), m(m_) {}

  static Morphism zero(int n, int m) { return Morphism(n, m); }
  static Morphism identity(int n) {
    Morphism f(n, n);
    f.add(BasisDiagram(Matching::identity(n)), GammaElement(Rational(1)));
    return f;
  }
  static Morphism single(BasisDiagram d, GammaElement c = GammaElement(Rational(1))) {
    Morphism f(d.matching.n, d.matching.m);
    f.add(std::move(d), std::move(c));
    return f;
  }

  bool is_zero() const { return terms.empty(); }

  void add(BasisDiagram d, GammaElement c) {
    if (c.is_zero()) return;
    auto it = terms.find(d);
    if (it == terms.end()) {
      terms.emplace(std::move(d), std::move(c));
    } else {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  Morphism& operator+=(const Morphism& o) {
    for (const auto& [d, c] : o.terms) add(d, c);
    return *this;
  }
  Morphism& operator-=(const Morphism& o) {
    for (const auto& [d, c] : o.terms) add(d, Rational(-1) * c);
    return *this;
  }
  friend Morphism operator+(Morphism a, const Morphism& b) { return a += b; }
  friend Morphism operator-(Morphism a, const Morphism& b) { return a -= b; }
  friend Morphism operator*(const GammaElement& c, const Morphism& f) {
    Morphism r(f.n, f.m);
    for (const auto& [d, v] : f.terms) r.add(d, c * v);
    return r;
  }
  friend Morphism operator*(const Rational& c, const Morphism& f) {
    return GammaElement(c) * f;
  }
  friend bool operator==(const Morphism& a, const Morphism& b) {
    return a.n == b.n && a.m == b.m && a.terms == b.terms;
  }

  // Every term must have total degree (diagram + coefficient) equal to deg.
  bool all_same_degree_as(int deg) const {
    for (const auto& [d, c] : terms)
      for (const auto& [mon, coef] : c.terms()) {
        int mdeg = 0;
        for (int r : mon) mdeg += 2 * r;
        if (d.degree() + mdeg != deg) return false;
      }
    return true;
  }

  std::string str() const;
  std::string json(int t) const;
};

}  // namespace nb
