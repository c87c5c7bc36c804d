#include "nb/gamma.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace nb {

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
  return m;
}

void SymPoly::add_term(const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SymPoly& SymPoly::operator+=(const SymPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

SymPoly& SymPoly::operator-=(const SymPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

SymPoly operator*(const SymPoly& a, const SymPoly& b) {
  SymPoly r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
  return r;
}

SymPoly operator*(const Rational& c, const SymPoly& p) {
  SymPoly r;
  for (const auto& [m, v] : p.terms_) r.add_term(m, c * v);
  return r;
}

bool operator<(const SymPoly& a, const SymPoly& b) {
  auto ita = a.terms_.begin(), itb = b.terms_.begin();
  for (; ita != a.terms_.end() && itb != b.terms_.end(); ++ita, ++itb) {
    if (ita->first != itb->first) return ita->first < itb->first;
    if (ita->second != itb->second) return ita->second < itb->second;
  }
  return itb != b.terms_.end();
}

int SymPoly::degree(int weight_per_index) const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (int r : m) s += weight_per_index * r;
    d = std::max(d, s);
  }
  return d;
}

bool SymPoly::all_dyadic() const {
  for (const auto& [m, c] : terms_)
    if (!c.is_dyadic()) return false;
  return true;
}

std::string SymPoly::str(char gen) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = c;
    if (!first) {
      if (a < Rational(0)) { os << " - "; a = -a; }
      else os << " + ";
    } else if (a < Rational(0)) {
      os << "-";
      a = -a;
    }
    first = false;
    bool wrote_scalar = false;
    if (!a.is_one() || m.empty()) { os << a.str(); wrote_scalar = true; }
    int i = 0;
    while (i < (int)m.size()) {
      int j = i;
      while (j < (int)m.size() && m[j] == m[i]) ++j;
      if (wrote_scalar || i > 0) os << "*";
      os << gen << m[i];
      if (j - i > 1) os << "^" << (j - i);
      wrote_scalar = true;
      i = j;
    }
  }
  return os.str();
}

std::string SymPoly::json(char) const {
  std::ostringstream os;
  os << "{\"terms\":[";
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << ",";
    first = false;
    os << "{\"mon\":[";
    for (size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
    os << "],\"num\":" << c.num().get_str() << ",\"den\":" << c.den().get_str() << "}";
  }
  os << "]}";
  return os.str();
}

std::string rational_json(const Rational& c) {
  std::ostringstream os;
  os << "{\"num\":" << c.num().get_str() << ",\"den\":" << c.den().get_str() << "}";
  return os.str();
}

namespace {
const SymPoly& gamma_q_impl(std::unordered_map<int, SymPoly>& memo, int r) {
  auto it = memo.find(r);
  if (it != memo.end()) return it->second;
  SymPoly v;
  if (r == 0) {
    v = SymPoly(Rational(1));
  } else if (r % 2 == 1) {
    v = SymPoly::generator(r);
  } else {
    int half = r / 2;
    const SymPoly& qh = gamma_q_impl(memo, half);
    v = Rational((half % 2 == 1) ? 1 : -1, 2) * (qh * qh);
    for (int s = 1; s <= half - 1; ++s) {
      Rational sign((s % 2 == 1) ? 1 : -1);
      v += sign * (gamma_q_impl(memo, s) * gamma_q_impl(memo, r - s));
    }
  }
  return memo.emplace(r, std::move(v)).first->second;
}
}  // namespace

const SymPoly& gamma_q(int r) {
  static std::unordered_map<int, SymPoly> memo;
  static std::mutex mu;
  if (r < 0) throw std::invalid_argument("q index must be >= 0");
  std::lock_guard<std::mutex> lk(mu);
  return gamma_q_impl(memo, r);
}

SymPoly gamma_normalize(const SymPoly& raw) {
  SymPoly out;
  for (const auto& [m, c] : raw.terms()) {
    for (int r : m)
      if (r < 0) throw std::invalid_argument("q index must be >= 0");
    SymPoly prod(c);
    for (int r : m) prod *= gamma_q(r);
    out += prod;
  }
  return out;
}

SymPoly gamma_mul(const SymPoly& a, const SymPoly& b) { return a * b; }

const LambdaElement& lambda_e(int r) {
  static std::unordered_map<int, LambdaElement> memo;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto it = memo.find(r);
  if (it != memo.end()) return it->second;
  LambdaElement v;
  if (r == 0) v = SymPoly(Rational(1));
  else if (r > 0) v = SymPoly::generator(r);
  return memo.emplace(r, std::move(v)).first->second;
}

const LambdaElement& lambda_h(int r) {
  // e(-u)h(u) = 1, so h_r = sum_{k=1}^{r} (-1)^{k+1} e_k h_{r-k}.
  static std::unordered_map<int, LambdaElement> memo;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  if (memo.find(r) == memo.end()) {
    if (memo.find(0) == memo.end()) memo.emplace(0, SymPoly(Rational(1)));
    for (int n = 1; n <= std::max(r, 0); ++n) {
      if (memo.find(n) != memo.end()) continue;
      LambdaElement v;
      for (int k = 1; k <= n; ++k) {
        Rational sign((k % 2 == 1) ? 1 : -1);
        v += sign * (SymPoly::generator(k) * memo.at(n - k));
      }
      memo.emplace(n, std::move(v));
    }
    if (r < 0) memo.emplace(r, LambdaElement());
  }
  return memo.at(r);
}

LambdaElement q_in_lambda(int r) {
  if (r < 0) return LambdaElement();
  LambdaElement v;
  for (int i = 0; i <= r; ++i) v += lambda_e(i) * lambda_h(r - i);
  return v;
}

GammaElement bubble_scalar(int r, int t) {
  if (t != 0 && t != 1) throw std::invalid_argument("t must be 0 or 1");
  if (r < 0) throw std::invalid_argument("dot count must be >= 0");
  if (r == 0) return SymPoly(Rational(t));
  Rational c(((t + 1) % 2 == 0) ? 1 : -1, 2);
  return c * gamma_q(r);
}

LambdaSeries e_series(int order, bool negate_u) {
  LambdaSeries s(0, order);
  for (int r = 0; r <= order; ++r) {
    Rational sign((negate_u && r % 2 == 1) ? -1 : 1);
    s.set(-r, sign * lambda_e(r));
  }
  return s;
}

LambdaSeries h_series(int order, bool negate_u) {
  LambdaSeries s(0, order);
  for (int r = 0; r <= order; ++r) {
    Rational sign((negate_u && r % 2 == 1) ? -1 : 1);
    s.set(-r, sign * lambda_h(r));
  }
  return s;
}

LambdaSeries q_series(int order, bool negate_u) {
  LambdaSeries s(0, order);
  for (int r = 0; r <= order; ++r) {
    Rational sign((negate_u && r % 2 == 1) ? -1 : 1);
    s.set(-r, sign * q_in_lambda(r));
  }
  return s;
}

GammaSeries obubble_series(int order, int t) {
  GammaSeries s(0, order);
  for (int r = 0; r <= order; ++r) {
    if (r == 0) s.set(0, SymPoly(Rational(1)));
    else s.set(-r, gamma_q(r));
  }
  (void)t;  // O_r = q_r under gamma_t for either t; t enters via bubble_scalar
  return s;
}

}  // namespace nb
