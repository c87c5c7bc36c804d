#include "nb/usl2.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <sstream>

namespace nb::usl2 {

int wt(const UWord& w) {
  int s = 0;
  for (Letter l : w) s += (l == Letter::E) ? 2 : -2;
  return s;
}

std::string uword_str(const UWord& w) {
  std::string s;
  for (Letter l : w) s += (l == Letter::E) ? 'E' : 'F';
  return s.empty() ? "1" : s;
}

UWord parse_uword(const std::string& s) {
  UWord w;
  if (s == "1") return w;
  for (char c : s) {
    if (c == 'E' || c == 'e') w.push_back(Letter::E);
    else if (c == 'F' || c == 'f') w.push_back(Letter::F);
    else throw std::invalid_argument("bad letter in word: " + s);
  }
  return w;
}

UDiagram UDiagram::identity(const UWord& w) {
  UDiagram d;
  d.bottom = d.top = w;
  d.matching = Matching::identity((int)w.size());
  d.dots.assign(w.size(), 0);
  return d;
}

bool UDiagram::admissible() const {
  for (const auto& [a, b] : matching.pairs) {
    bool a_top = matching.is_top(a), b_top = matching.is_top(b);
    Letter la = letter_at(a), lb = letter_at(b);
    if (a_top == b_top) {
      if (la == lb) return false;
    } else {
      if (la != lb) return false;
    }
  }
  return true;
}

int UDiagram::total_dots() const {
  int s = 0;
  for (int d : dots) s += d;
  return s;
}

std::string UDiagram::key() const {
  std::ostringstream os;
  os << uword_str(bottom) << ">" << uword_str(top) << "|" << matching.key();
  for (int d : dots) os << "." << d;
  return os.str();
}

UMorphism UMorphism::identity(const UWord& w, int lam, int valid) {
  UMorphism f(w, w, lam, valid);
  f.add_raw(UDiagram::identity(w), LambdaElement(Rational(1)));
  return f;
}

void UMorphism::add_raw(const UDiagram& d, const LambdaElement& c) {
  if (c.is_zero()) return;
  auto it = terms.find(d);
  if (it == terms.end()) terms.emplace(d, c);
  else {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

void UMorphism::add(const UDiagram& d, const LambdaElement& c) {
  if (c.is_zero()) return;
  int dd = udiagram_degree(d, lambda);
  LambdaElement kept;
  for (const auto& [mon, coef] : c.terms()) {
    int md = 0;
    for (int r : mon) md += 2 * r;
    if (dd + md <= valid_degree) kept.add_term(mon, coef);
  }
  add_raw(d, kept);
}

UMorphism& UMorphism::operator+=(const UMorphism& o) {
  valid_degree = std::min(valid_degree, o.valid_degree);
  for (const auto& [d, c] : o.terms) add(d, c);
  return *this;
}

UMorphism& UMorphism::operator-=(const UMorphism& o) {
  valid_degree = std::min(valid_degree, o.valid_degree);
  for (const auto& [d, c] : o.terms) add(d, Rational(-1) * c);
  return *this;
}

UMorphism operator*(const LambdaElement& c, const UMorphism& f) {
  UMorphism r(f.bottom, f.top, f.lambda, f.valid_degree);
  for (const auto& [d, v] : f.terms) r.add(d, c * v);
  return r;
}

bool u_equal(const UMorphism& a, const UMorphism& b) {
  if (a.bottom != b.bottom || a.top != b.top || a.lambda != b.lambda) return false;
  int bound = std::min(a.valid_degree, b.valid_degree);
  auto collect = [&](const UMorphism& f, std::map<UDiagram, LambdaElement>& out) {
    for (const auto& [d, c] : f.terms) {
      int dd = udiagram_degree(d, f.lambda);
      LambdaElement kept;
      for (const auto& [mon, coef] : c.terms()) {
        int md = 0;
        for (int r : mon) md += 2 * r;
        if (dd + md <= bound) kept.add_term(mon, coef);
      }
      if (!kept.is_zero()) out.emplace(d, kept);
    }
  };
  std::map<UDiagram, LambdaElement> ta, tb;
  collect(a, ta);
  collect(b, tb);
  return ta == tb;
}

std::string UMorphism::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [d, c] : terms) {
    if (!first) os << " + ";
    first = false;
    std::string cs = c.str('e');
    if (cs.find(" + ") != std::string::npos || cs.find(" - ") != std::string::npos)
      os << "(" << cs << ")";
    else os << cs;
    os << "*[";
    for (size_t k = 0; k < d.matching.pairs.size(); ++k) {
      os << "{" << d.matching.pairs[k].first << "-" << d.matching.pairs[k].second;
      if (d.dots[k]) os << ":" << d.dots[k];
      os << "}";
    }
    os << "]";
  }
  return os.str();
}

std::string UDiagramWord::key() const {
  std::ostringstream os;
  os << uword_str(bottom) << "@" << lambda << "|";
  for (const auto& s : slices) {
    switch (s.kind) {
      case SliceKind::Dot: os << "d"; break;
      case SliceKind::Cross: os << "x"; break;
      case SliceKind::Cup: os << (s.lcup ? "l" : "r"); break;
      case SliceKind::Cap: os << "n"; break;
    }
    os << s.pos << ";";
  }
  return os.str();
}

namespace {

std::vector<bool> bottom_flows(const UWord& w) {
  std::vector<bool> f;
  for (Letter l : w) f.push_back(l == Letter::E);
  return f;
}

int cupcap_degree(bool left_up, int right_weight) {
  return left_up ? 1 - right_weight : 1 + right_weight;
}

}  // namespace

UWord validate_uword(const UDiagramWord& w, int* total_degree, int* negative_slack) {
  std::vector<bool> flow = bottom_flows(w.bottom);
  auto weight_right_of = [&](size_t p) {
    int mu = w.lambda;
    for (size_t k = p; k < flow.size(); ++k) mu += flow[k] ? 2 : -2;
    return mu;
  };
  int deg = 0, slack = 0;
  for (size_t idx = 0; idx < w.slices.size(); ++idx) {
    const USlice& s = w.slices[idx];
    int width = (int)flow.size();
    auto fail = [&](const std::string& msg) {
      throw std::invalid_argument("slice " + std::to_string(idx) + ": " + msg);
    };
    switch (s.kind) {
      case SliceKind::Dot:
        if (s.pos < 0 || s.pos >= width) fail("dot out of range");
        deg += 2;
        break;
      case SliceKind::Cross: {
        if (s.pos < 0 || s.pos + 1 >= width) fail("crossing out of range");
        int d = (flow[s.pos] == flow[s.pos + 1]) ? -2 : 0;
        deg += d;
        if (d < 0) slack += -d;
        std::vector<bool>::swap(flow[s.pos], flow[s.pos + 1]);
        break;
      }
      case SliceKind::Cup: {
        if (s.pos < 0 || s.pos > width) fail("cup out of range");
        int mu = weight_right_of(s.pos);
        int d = cupcap_degree(s.lcup, mu);
        deg += d;
        if (d < 0) slack += -d;
        flow.insert(flow.begin() + s.pos, {s.lcup, !s.lcup});
        break;
      }
      case SliceKind::Cap: {
        if (s.pos < 0 || s.pos + 1 >= width) fail("cap out of range");
        bool a = flow[s.pos], b = flow[s.pos + 1];
        if (a == b) fail("cap on parallel strands");
        int mu = weight_right_of(s.pos + 2);
        int d = cupcap_degree(a, mu);
        deg += d;
        if (d < 0) slack += -d;
        flow.erase(flow.begin() + s.pos, flow.begin() + s.pos + 2);
        break;
      }
    }
  }
  if (total_degree) *total_degree = deg;
  if (negative_slack) *negative_slack = slack;
  UWord top;
  for (bool f : flow) top.push_back(f ? Letter::E : Letter::F);
  return top;
}

int region_weight_at_top(const UDiagram& d, int slot, int lambda) {
  int mu = lambda;
  for (size_t k = slot; k < d.top.size(); ++k) mu += (d.top[k] == Letter::E) ? 2 : -2;
  return mu;
}

UDiagramWord u_word_from_basis(const UDiagram& d, int lambda) {
  BasisDiagram b(d.matching, d.dots);
  DiagramWord w = word_from_basis(b);
  UDiagramWord uw;
  uw.bottom = d.bottom;
  uw.lambda = lambda;
  for (const Slice& s : w.slices) uw.slices.push_back({s.kind, s.pos, false});
  // resolve cup letters: replay wires to find each cup's left-leg endpoint
  {
    int n = d.matching.n, m = d.matching.m;
    std::vector<int> wires(n);
    for (int i = 0; i < n; ++i) wires[i] = i;
    int next_virtual = n + m;
    std::map<int, size_t> virt_to_slice;  // left-leg virtual id -> slice index
    for (size_t idx = 0; idx < uw.slices.size(); ++idx) {
      const USlice& s = uw.slices[idx];
      switch (s.kind) {
        case SliceKind::Dot: break;
        case SliceKind::Cross: std::swap(wires[s.pos], wires[s.pos + 1]); break;
        case SliceKind::Cup: {
          int v = next_virtual++;
          virt_to_slice[v] = idx;
          wires.insert(wires.begin() + s.pos, v);
          wires.insert(wires.begin() + s.pos + 1, -v - 7);
          break;
        }
        case SliceKind::Cap:
          wires.erase(wires.begin() + s.pos, wires.begin() + s.pos + 2);
          break;
      }
    }
    for (size_t j = 0; j < wires.size(); ++j) {
      int u = wires[j];
      if (u >= n + m) uw.slices[virt_to_slice[u]].lcup = (d.top[j] == Letter::E);
    }
  }
  validate_uword(uw);
  return uw;
}

int udiagram_degree(const UDiagram& d, int lambda) {
  static std::unordered_map<std::string, int> memo;
  static std::mutex mu;
  std::string key = d.key() + "@" + std::to_string(lambda);
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  UDiagramWord w = u_word_from_basis(d, lambda);
  int deg = 0;
  validate_uword(w, &deg);
  std::lock_guard<std::mutex> lk(mu);
  memo.emplace(std::move(key), deg);
  return deg;
}

// --- bubbles ---

LambdaElement UEngine::bubble_value(bool clockwise, int dcount, int mu) {
  if (clockwise) {
    int r = dcount + 1 - mu;
    if (r < 0) return LambdaElement();
    Rational sign((r % 2 == 0) ? 1 : -1);
    return sign * lambda_e(r);
  }
  int r = mu + dcount + 1;
  if (r < 0) return LambdaElement();
  return lambda_h(r);
}

LambdaElement UEngine::fake_bubble(bool clockwise, int k, int mu) {
  if (k == 0) return LambdaElement(Rational(1));
  if (!clockwise && (k < 0 || k > mu)) return LambdaElement();
  if (clockwise && (k < 0 || k > -mu)) return LambdaElement();
  std::vector<std::vector<LambdaElement>> A(k, std::vector<LambdaElement>(k));
  for (int r = 1; r <= k; ++r)
    for (int s = 1; s <= k; ++s) {
      int dots = clockwise ? (r - s - mu) : (r - s + mu);
      A[r - 1][s - 1] = dots < 0 ? LambdaElement() : bubble_value(!clockwise, dots, mu);
    }
  std::function<LambdaElement(std::vector<int>)> det = [&](std::vector<int> cols) -> LambdaElement {
    if (cols.empty()) return LambdaElement(Rational(1));
    int r = k - (int)cols.size();
    LambdaElement acc;
    for (size_t ci = 0; ci < cols.size(); ++ci) {
      if (A[r][cols[ci]].is_zero()) continue;
      std::vector<int> rest;
      for (size_t cj = 0; cj < cols.size(); ++cj)
        if (cj != ci) rest.push_back(cols[cj]);
      Rational sign((ci % 2 == 0) ? 1 : -1);
      acc += sign * (A[r][cols[ci]] * det(rest));
    }
    return acc;
  };
  std::vector<int> cols(k);
  for (int i = 0; i < k; ++i) cols[i] = i;
  LambdaElement d = det(cols);
  if (k % 2 == 1) d = Rational(-1) * d;
  return d;
}

// --- slides ---

UMorphism UEngine::slide_lambda_right(bool e_gen, int r, int slot, const UMorphism& base) const {
  if (r < 0) return UMorphism::zero(base.bottom, base.top, base.lambda, base.valid_degree);
  if (r == 0 || base.is_zero()) return base;
  if (slot >= (int)base.top.size()) {
    LambdaElement v = e_gen ? lambda_e(r) : lambda_h(r);
    return v * base;
  }
  UMorphism out(base.bottom, base.top, base.lambda, base.valid_degree);
  bool strand_up = base.top[slot] == Letter::E;
  bool finite = (e_gen != strand_up);  // e across F and h across E terminate at k = 2
  for (int k = 0; k <= r; ++k) {
    Rational coef;
    if (finite) {
      if (k == 0) coef = Rational(1);
      else if (k == 1) coef = Rational(-2);
      else if (k == 2) coef = Rational(1);
      else break;
    } else {
      coef = Rational(k + 1);
      if (e_gen && k % 2 == 1) coef = -coef;  // e across E carries (-1)^k
    }
    UMorphism dotted = base;
    for (int c = 0; c < k; ++c) dotted = act({SliceKind::Dot, slot, false}, dotted);
    if (dotted.is_zero()) continue;
    out += coef * slide_lambda_right(e_gen, r - k, slot + 1, dotted);
  }
  return out;
}

// --- walks ---

namespace {

struct UWalkOutcome {
  int sign = 1;
  int end_point = -1;
  std::vector<std::pair<int, UDiagramWord>> corrections;
};

UWalkOutcome u_walk_dot(const UDiagramWord& w, int from_point) {
  std::vector<std::vector<bool>> flows;
  {
    std::vector<bool> f = bottom_flows(w.bottom);
    flows.push_back(f);
    for (const auto& s : w.slices) {
      switch (s.kind) {
        case SliceKind::Dot: break;
        case SliceKind::Cross: std::vector<bool>::swap(f[s.pos], f[s.pos + 1]); break;
        case SliceKind::Cup: f.insert(f.begin() + s.pos, {s.lcup, !s.lcup}); break;
        case SliceKind::Cap: f.erase(f.begin() + s.pos, f.begin() + s.pos + 2); break;
      }
      flows.push_back(f);
    }
  }
  UWalkOutcome out;
  int K = (int)w.slices.size();
  int n = (int)w.bottom.size();
  int level, p;
  bool down;
  if (from_point >= n) {
    level = K;
    p = from_point - n;
    down = true;
  } else {
    level = 0;
    p = from_point;
    down = false;
  }
  int guard = 0;
  while (true) {
    if (++guard > 6 * (K + 2) + 8) throw std::logic_error("u_walk_dot loop");
    if (down && level == 0) {
      out.end_point = p;
      return out;
    }
    if (!down && level == K) {
      out.end_point = n + p;
      return out;
    }
    int si = down ? level - 1 : level;
    const USlice& s = w.slices[si];
    switch (s.kind) {
      case SliceKind::Dot:
        level += down ? -1 : 1;
        break;
      case SliceKind::Cross: {
        if (p == s.pos || p == s.pos + 1) {
          bool inc = (p == s.pos);  // the jump increases x
          int other_below = (inc != down) ? s.pos + 1 : s.pos;
          bool other_up = flows[si][other_below];
          bool mine_up = flows[si][other_below == s.pos ? s.pos + 1 : s.pos];
          int corr_sign = (inc == other_up) ? 1 : -1;
          if (mine_up == other_up) {
            UDiagramWord del = w;
            del.slices.erase(del.slices.begin() + si);
            out.corrections.push_back({corr_sign * out.sign, std::move(del)});
          } else {
            UDiagramWord cc = w;
            bool left_up_above = flows[si + 1][s.pos];
            cc.slices[si] = {SliceKind::Cap, s.pos, false};
            cc.slices.insert(cc.slices.begin() + si + 1, {SliceKind::Cup, s.pos, left_up_above});
            out.corrections.push_back({corr_sign * out.sign, std::move(cc)});
          }
          p = inc ? s.pos + 1 : s.pos;
        }
        level += down ? -1 : 1;
        break;
      }
      case SliceKind::Cup:
        if (down) {
          if (p == s.pos || p == s.pos + 1) {
            p = (p == s.pos) ? s.pos + 1 : s.pos;
            down = false;
          } else {
            if (p > s.pos + 1) p -= 2;
            --level;
          }
        } else {
          if (p >= s.pos) p += 2;
          ++level;
        }
        break;
      case SliceKind::Cap:
        if (!down) {
          if (p == s.pos || p == s.pos + 1) {
            p = (p == s.pos) ? s.pos + 1 : s.pos;
            down = true;
          } else {
            if (p > s.pos + 1) p -= 2;
            ++level;
          }
        } else {
          if (p >= s.pos) p += 2;
          --level;
        }
        break;
    }
  }
}

}  // namespace

// --- engine core ---

UMorphism UEngine::normalize(const UDiagramWord& w) const {
  int deg = 0, slack = 0;
  validate_uword(w, &deg, &slack);
  return normalize_word_at(w, N_ + slack);
}

UMorphism UEngine::normalize_word_at(const UDiagramWord& w, int valid) const {
  std::string key = w.key() + "!" + std::to_string(valid);
  {
    std::shared_lock lk(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  UMorphism M = UMorphism::identity(w.bottom, w.lambda, valid);
  for (const auto& s : w.slices) M = act(s, M);
  {
    std::unique_lock lk(mu_);
    cache_.emplace(std::move(key), M);
  }
  return M;
}

UMorphism UEngine::act(const USlice& s, const UMorphism& f) const {
  int local = 0;
  UWord new_top = f.top;
  switch (s.kind) {
    case SliceKind::Dot:
      if (s.pos < 0 || s.pos >= (int)f.top.size()) throw std::invalid_argument("act: dot range");
      local = 2;
      break;
    case SliceKind::Cross: {
      if (s.pos < 0 || s.pos + 1 >= (int)f.top.size())
        throw std::invalid_argument("act: crossing range");
      local = (f.top[s.pos] == f.top[s.pos + 1]) ? -2 : 0;
      std::swap(new_top[s.pos], new_top[s.pos + 1]);
      break;
    }
    case SliceKind::Cup: {
      if (s.pos < 0 || s.pos > (int)f.top.size()) throw std::invalid_argument("act: cup range");
      int mu = f.lambda;
      for (size_t k = s.pos; k < f.top.size(); ++k) mu += (f.top[k] == Letter::E) ? 2 : -2;
      local = cupcap_degree(s.lcup, mu);
      new_top.insert(new_top.begin() + s.pos,
                     {s.lcup ? Letter::E : Letter::F, s.lcup ? Letter::F : Letter::E});
      break;
    }
    case SliceKind::Cap: {
      if (s.pos < 0 || s.pos + 1 >= (int)f.top.size())
        throw std::invalid_argument("act: cap range");
      if (f.top[s.pos] == f.top[s.pos + 1])
        throw std::invalid_argument("act: cap on strands with equal letters");
      int mu = f.lambda;
      for (size_t k = s.pos + 2; k < f.top.size(); ++k) mu += (f.top[k] == Letter::E) ? 2 : -2;
      local = cupcap_degree(f.top[s.pos] == Letter::E, mu);
      new_top.erase(new_top.begin() + s.pos, new_top.begin() + s.pos + 2);
      break;
    }
  }
  int out_valid = f.valid_degree + std::min(0, local);
  UMorphism out(f.bottom, new_top, f.lambda, out_valid);
  for (const auto& [d, c] : f.terms) {
    UMorphism piece = act_diagram(s, d, f.lambda, out_valid);
    for (const auto& [dd, cc] : piece.terms) out.add(dd, c * cc);
  }
  return out;
}

UMorphism UEngine::act_diagram(const USlice& s, const UDiagram& d, int lambda, int valid) const {
  std::ostringstream ks;
  ks << (int)s.kind << "," << s.pos << "," << s.lcup << "|" << d.key() << "@" << lambda << "!"
     << valid;
  std::string key = ks.str();
  {
    std::shared_lock lk(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  UMorphism r;
  switch (s.kind) {
    case SliceKind::Dot: r = act_dot(s.pos, d, lambda, valid); break;
    case SliceKind::Cross: r = act_cross(s.pos, d, lambda, valid); break;
    case SliceKind::Cup: r = act_cup(s.pos, s.lcup, d, lambda, valid); break;
    case SliceKind::Cap: r = act_cap(s.pos, d, lambda, valid); break;
  }
  {
    std::unique_lock lk(mu_);
    cache_.emplace(std::move(key), r);
  }
  return r;
}

UMorphism UEngine::act_cup(int i, bool lcup, const UDiagram& d, int lambda, int valid) const {
  const Matching& M = d.matching;
  Matching R;
  R.n = M.n;
  R.m = M.m + 2;
  auto remap = [&](int p) { return (M.is_top(p) && p - M.n >= i) ? p + 2 : p; };
  std::vector<std::pair<std::pair<int, int>, int>> tagged;
  for (size_t k = 0; k < M.pairs.size(); ++k)
    tagged.push_back({{remap(M.pairs[k].first), remap(M.pairs[k].second)}, d.dots[k]});
  tagged.push_back({{R.n + i, R.n + i + 1}, 0});
  std::sort(tagged.begin(), tagged.end());
  std::vector<int> dots;
  for (auto& [pr, dt] : tagged) {
    R.pairs.push_back(pr);
    dots.push_back(dt);
  }
  UWord top = d.top;
  top.insert(top.begin() + i, {lcup ? Letter::E : Letter::F, lcup ? Letter::F : Letter::E});
  UMorphism out(d.bottom, top, lambda, valid);
  out.add(UDiagram(d.bottom, top, std::move(R), std::move(dots)), LambdaElement(Rational(1)));
  return out;
}

UMorphism UEngine::act_dot(int i, const UDiagram& d, int lambda, int valid) const {
  const Matching& M = d.matching;
  int g = M.n + i;
  int sidx = M.strand_of(g);
  int canon = M.pairs[sidx].first;
  UMorphism out(d.bottom, d.top, lambda, valid);
  if (canon == g) {
    UDiagram nd = d;
    nd.dots[sidx] += 1;
    out.add(nd, LambdaElement(Rational(1)));
    return out;
  }
  UDiagramWord w = u_word_from_basis(d, lambda);
  UWalkOutcome o = u_walk_dot(w, g);
  if (o.end_point != canon) throw std::logic_error("u act_dot landed wrong");
  UDiagram nd = d;
  nd.dots[sidx] += 1;
  out.add(nd, LambdaElement(Rational(o.sign)));
  for (auto& [sg, cw] : o.corrections) out += Rational(sg) * normalize_word_at(cw, valid);
  return out;
}

UMorphism UEngine::act_cross(int i, const UDiagram& d, int lambda, int valid) const {
  const Matching& M = d.matching;
  Letter la = d.top[i], lb = d.top[i + 1];
  if (la != lb) {
    // sideways crossings are composites of the generators
    std::vector<USlice> expansion;
    if (la == Letter::E) {
      expansion = {{SliceKind::Cup, i, false},
                   {SliceKind::Cross, i + 1, false},
                   {SliceKind::Cap, i + 2, false}};
    } else {
      expansion = {{SliceKind::Cup, i + 2, true},
                   {SliceKind::Cross, i + 1, false},
                   {SliceKind::Cap, i, false}};
    }
    UMorphism M2(d.bottom, d.top, lambda, valid);
    M2.add(d, LambdaElement(Rational(1)));
    for (const auto& s : expansion) M2 = act(s, M2);
    M2.valid_degree = std::min(M2.valid_degree, valid);
    return M2;
  }
  int g1 = M.n + i, g2 = M.n + i + 1;
  int s = M.strand_of(g1), r = M.strand_of(g2);
  bool up = (la == Letter::E);
  if (M.pairs[s].first == g1 && d.dots[s] > 0) {
    UDiagram d1 = d;
    d1.dots[s] -= 1;
    UMorphism base(d.bottom, d.top, lambda, valid);
    base.add(d1, LambdaElement(Rational(1)));
    UMorphism res = act({SliceKind::Dot, i + 1, false}, act_cross(i, d1, lambda, valid));
    res.valid_degree = std::min(res.valid_degree, valid);
    res += Rational(up ? 1 : -1) * base;
    return res;
  }
  if (M.pairs[r].first == g2 && d.dots[r] > 0) {
    UDiagram d1 = d;
    d1.dots[r] -= 1;
    UMorphism base(d.bottom, d.top, lambda, valid);
    base.add(d1, LambdaElement(Rational(1)));
    UMorphism res = act({SliceKind::Dot, i, false}, act_cross(i, d1, lambda, valid));
    res.valid_degree = std::min(res.valid_degree, valid);
    res += Rational(up ? -1 : 1) * base;
    return res;
  }
  UWord new_top = d.top;
  std::swap(new_top[i], new_top[i + 1]);
  if (s == r) throw std::logic_error("u act_cross: same-letter cup strand");
  if (strands_interleave(M, s, r)) return UMorphism::zero(d.bottom, new_top, lambda, valid);
  Matching R = M;
  for (auto& pr : R.pairs) {
    if (pr.first == g1) pr.first = g2;
    else if (pr.first == g2) pr.first = g1;
    if (pr.second == g1) pr.second = g2;
    else if (pr.second == g2) pr.second = g1;
  }
  std::vector<std::pair<std::pair<int, int>, int>> tagged;
  for (size_t k = 0; k < R.pairs.size(); ++k) {
    auto pr = R.pairs[k];
    if (pr.first > pr.second) std::swap(pr.first, pr.second);
    tagged.push_back({pr, d.dots[k]});
  }
  std::sort(tagged.begin(), tagged.end());
  Matching R2;
  R2.n = M.n;
  R2.m = M.m;
  std::vector<int> dots;
  for (auto& [pr, dt] : tagged) {
    R2.pairs.push_back(pr);
    dots.push_back(dt);
  }
  UMorphism out(d.bottom, new_top, lambda, valid);
  out.add(UDiagram(d.bottom, new_top, std::move(R2), std::move(dots)), LambdaElement(Rational(1)));
  return out;
}

UMorphism UEngine::act_cap(int i, const UDiagram& d, int lambda, int valid) const {
  const Matching& M = d.matching;
  Letter la = d.top[i], lb = d.top[i + 1];
  if (la == lb) throw std::invalid_argument("act_cap: same letters");
  int g1 = M.n + i, g2 = M.n + i + 1;
  int s = M.strand_of(g1), r = M.strand_of(g2);
  UWord new_top = d.top;
  new_top.erase(new_top.begin() + i, new_top.begin() + i + 2);
  if (s == r) {
    bool cw = (la == Letter::E);
    int dcount = d.dots[s];
    int mu = region_weight_at_top(d, i + 2, lambda);
    auto remap = [&](int p) {
      int q = p;
      if (p > g1) --q;
      if (p > g2) --q;
      return q;
    };
    std::vector<std::pair<std::pair<int, int>, int>> tagged;
    for (size_t j = 0; j < M.pairs.size(); ++j) {
      if ((int)j == s) continue;
      tagged.push_back({{remap(M.pairs[j].first), remap(M.pairs[j].second)}, d.dots[j]});
    }
    std::sort(tagged.begin(), tagged.end());
    Matching R;
    R.n = M.n;
    R.m = M.m - 2;
    std::vector<int> dots;
    for (auto& [pr, dt] : tagged) {
      R.pairs.push_back(pr);
      dots.push_back(dt);
    }
    UMorphism base(d.bottom, new_top, lambda, valid);
    base.add(UDiagram(d.bottom, new_top, std::move(R), std::move(dots)),
             LambdaElement(Rational(1)));
    if (cw) {
      int rr = dcount + 1 - mu;
      if (rr < 0) return UMorphism::zero(d.bottom, new_top, lambda, valid);
      Rational sign((rr % 2 == 0) ? 1 : -1);
      return sign * slide_lambda_right(true, rr, i, base);
    }
    int rr = mu + dcount + 1;
    if (rr < 0) return UMorphism::zero(d.bottom, new_top, lambda, valid);
    return slide_lambda_right(false, rr, i, base);
  }
  int js = (M.pairs[s].first == g1) ? d.dots[s] : 0;
  int jr = (M.pairs[r].first == g2) ? d.dots[r] : 0;
  UDiagram d0 = d;
  if (js) d0.dots[s] = 0;
  if (jr) d0.dots[r] = 0;
  return act_cap_pending(i, d0, lambda, valid, js + jr, 0);
}

UMorphism UEngine::act_cap_pending(int i, const UDiagram& d, int lambda, int valid, int pending,
                                   int far) const {
  const Matching& M = d.matching;
  int g1 = M.n + i, g2 = M.n + i + 1;
  int s = M.strand_of(g1), r = M.strand_of(g2);
  int far_point = (M.pairs[r].first == g2) ? M.pairs[r].second : M.pairs[r].first;
  UWord new_top = d.top;
  new_top.erase(new_top.begin() + i, new_top.begin() + i + 2);
  int mu_right = region_weight_at_top(d, i + 2, lambda);
  int cap_deg = cupcap_degree(d.top[i] == Letter::E, mu_right);
  int inner_valid = valid + std::max(0, -cap_deg) + 2 * pending;
  if (pending > 0) {
    UDiagramWord w = u_word_from_basis(d, lambda);
    for (int k = 0; k < far; ++k) {
      if (far_point < M.n) w.slices.insert(w.slices.begin(), {SliceKind::Dot, far_point, false});
      else w.slices.push_back({SliceKind::Dot, far_point - M.n, false});
    }
    for (int k = 1; k < pending; ++k) w.slices.push_back({SliceKind::Dot, i + 1, false});
    UWalkOutcome o = u_walk_dot(w, g2);
    if (o.end_point != far_point) throw std::logic_error("u cap pending walk landed wrong");
    UMorphism res(d.bottom, new_top, lambda, valid);
    res += Rational(o.sign) * act_cap_pending(i, d, lambda, valid, pending - 1, far + 1);
    for (auto& [sg, cw] : o.corrections) {
      UMorphism inner = normalize_word_at(cw, inner_valid);
      UMorphism capped(d.bottom, new_top, lambda, valid);
      for (const auto& [dd, cc] : inner.terms) {
        UMorphism piece = act_cap(i, dd, lambda, valid);
        for (const auto& [d2, c2] : piece.terms) capped.add(d2, cc * c2);
      }
      res += Rational(sg) * capped;
    }
    return res;
  }
  if (strands_interleave(M, s, r)) {
    if (far > 0) throw std::logic_error("curl with far dots not expected");
    return act_cap_curl(i, d, lambda, valid);
  }
  int ps = (M.pairs[s].first == g1) ? M.pairs[s].second : M.pairs[s].first;
  int pr = far_point;
  int dots_at_ps = d.dots[s];
  int dots_at_pr = d.dots[r] + far;
  auto remap = [&](int p) {
    int q = p;
    if (p > g1) --q;
    if (p > g2) --q;
    return q;
  };
  std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> tagged;
  for (size_t j = 0; j < M.pairs.size(); ++j) {
    if ((int)j == s || (int)j == r) continue;
    tagged.push_back({{remap(M.pairs[j].first), remap(M.pairs[j].second)}, {d.dots[j], 0}});
  }
  int a = remap(ps), b = remap(pr);
  int da = dots_at_ps, db = dots_at_pr;
  if (a > b) {
    std::swap(a, b);
    std::swap(da, db);
  }
  tagged.push_back({{a, b}, {da, db}});
  std::sort(tagged.begin(), tagged.end());
  Matching R;
  R.n = M.n;
  R.m = M.m - 2;
  std::vector<int> dots, far_dots;
  for (auto& [pr2, dt] : tagged) {
    R.pairs.push_back(pr2);
    dots.push_back(dt.first);
    far_dots.push_back(dt.second);
  }
  int far_strand = -1;
  for (size_t j = 0; j < far_dots.size(); ++j) {
    if (far_dots[j] == 0) continue;
    if (far_strand != -1) throw std::logic_error("u: far dots on two strands");
    far_strand = (int)j;
  }
  UDiagram nd(d.bottom, new_top, R, dots);
  if (!nd.admissible()) throw std::logic_error("u cap produced an inadmissible diagram");
  if (far_strand == -1) {
    UMorphism out(d.bottom, new_top, lambda, valid);
    out.add(nd, LambdaElement(Rational(1)));
    return out;
  }
  return walk_far_dots(nd, R.pairs[far_strand].second, far_dots[far_strand], lambda, valid);
}

UMorphism UEngine::walk_far_dots(const UDiagram& d, int point, int count, int lambda,
                                 int valid) const {
  UMorphism out(d.bottom, d.top, lambda, valid);
  if (count == 0) {
    out.add(d, LambdaElement(Rational(1)));
    return out;
  }
  const Matching& Md = d.matching;
  int sj = Md.strand_of(point);
  int canon = Md.pairs[sj].first;
  if (canon == point) {
    UDiagram nd = d;
    nd.dots[sj] += count;
    out.add(nd, LambdaElement(Rational(1)));
    return out;
  }
  UDiagramWord wv = u_word_from_basis(d, lambda);
  for (int x = 1; x < count; ++x) {
    if (point < Md.n) wv.slices.insert(wv.slices.begin(), {SliceKind::Dot, point, false});
    else wv.slices.push_back({SliceKind::Dot, point - Md.n, false});
  }
  UWalkOutcome o = u_walk_dot(wv, point);
  if (o.end_point != canon) throw std::logic_error("u far-dot walk landed wrong");
  UDiagram nd = d;
  nd.dots[sj] += 1;
  out += Rational(o.sign) * walk_far_dots(nd, point, count - 1, lambda, valid);
  for (auto& [sg, cw] : o.corrections) out += Rational(sg) * normalize_word_at(cw, valid);
  return out;
}

UMorphism UEngine::act_cap_curl(int i, const UDiagram& d, int lambda, int valid) const {
  // The cap closes over the topmost crossing of the two interleaved strands;
  // sliding the loop down the left leg leaves a curl whose expansion is a
  // sum of dotted strands times fake bubbles in the region between the legs.
  const Matching& M = d.matching;
  int g1 = M.n + i, g2 = M.n + i + 1;
  Letter la = d.top[i];
  Matching R = M;
  for (auto& pr : R.pairs) {
    if (pr.first == g1) pr.first = g2;
    else if (pr.first == g2) pr.first = g1;
    if (pr.second == g1) pr.second = g2;
    else if (pr.second == g2) pr.second = g1;
  }
  std::vector<std::pair<std::pair<int, int>, int>> tagged;
  for (size_t k = 0; k < R.pairs.size(); ++k) {
    auto pr = R.pairs[k];
    if (pr.first > pr.second) std::swap(pr.first, pr.second);
    tagged.push_back({pr, d.dots[k]});
  }
  std::sort(tagged.begin(), tagged.end());
  Matching R2;
  R2.n = M.n;
  R2.m = M.m;
  std::vector<int> dots;
  for (auto& [pr, dt] : tagged) {
    R2.pairs.push_back(pr);
    dots.push_back(dt);
  }
  UWord swapped_top = d.top;
  std::swap(swapped_top[i], swapped_top[i + 1]);
  UDiagram dsw(d.bottom, swapped_top, R2, dots);

  int mu_c = region_weight_at_top(d, i + 2, lambda);
  UWord new_top = d.top;
  new_top.erase(new_top.begin() + i, new_top.begin() + i + 2);
  UMorphism out(d.bottom, new_top, lambda, valid);

  int cap_deg = cupcap_degree(dsw.top[i] == Letter::E, mu_c);
  int inner_valid = valid + std::max(0, -cap_deg);

  auto capped_of = [&](const UMorphism& slid) {
    UMorphism capped(d.bottom, new_top, lambda, valid);
    for (const auto& [dd, cc] : slid.terms) {
      UMorphism piece = act_cap(i, dd, lambda, valid);
      for (const auto& [d2, c2] : piece.terms) capped.add(d2, cc * c2);
    }
    return capped;
  };

  // The cap over the mixed crossing is a kink on the merged strand.  It
  // expands like a curl whose fake bubbles sit in the region right of the
  // whole figure: with cap letters (F,E) it behaves as a rightward kink on
  // a downward strand (clockwise fakes, minus sign); with (E,F) as its
  // mirror (counterclockwise fakes, plus sign).
  bool ccw_fakes = (la == Letter::E);
  int range = ccw_fakes ? mu_c : -mu_c;
  for (int n = 0; n <= range; ++n) {
    int dcount = range - n;
    LambdaElement fake = fake_bubble(!ccw_fakes, n, mu_c);
    if (fake.is_zero()) continue;
    UMorphism term(dsw.bottom, dsw.top, lambda, inner_valid + 2 * dcount);
    term.add(dsw, LambdaElement(Rational(1)));
    for (int k = 0; k < dcount; ++k) term = act({SliceKind::Dot, i, false}, term);
    UMorphism capped = capped_of(term);
    // the fake bubble sits right of the capped figure and slides out
    UMorphism slid(d.bottom, new_top, lambda, capped.valid_degree);
    for (const auto& [mon, coef] : fake.terms()) {
      UMorphism cur = coef * capped;
      for (int rr : mon) cur = slide_lambda_right(true, rr, i, cur);
      slid += cur;
    }
    if (ccw_fakes) out += slid;
    else out -= slid;
  }
  out.valid_degree = valid;
  return out;
}

UMorphism UEngine::compose(const UMorphism& f, const UMorphism& g) const {
  if (f.bottom != g.top || f.lambda != g.lambda)
    throw std::invalid_argument("u compose: boundary mismatch");
  UMorphism out(g.bottom, f.top, f.lambda, std::min(f.valid_degree, g.valid_degree));
  for (const auto& [df, cf] : f.terms) {
    UDiagramWord w = u_word_from_basis(df, f.lambda);
    UMorphism M = g;
    for (const auto& s : w.slices) M = act(s, M);
    out.valid_degree = std::min(out.valid_degree, M.valid_degree);
    for (const auto& [dd, cc] : M.terms) out.add(dd, cf * cc);
  }
  return out;
}

UMorphism UEngine::tensor(const UMorphism& f, const UMorphism& g) const {
  if (f.lambda != g.lambda + wt(g.bottom))
    throw std::invalid_argument("u tensor: weight mismatch");
  UWord bottom = f.bottom, top = f.top;
  bottom.insert(bottom.end(), g.bottom.begin(), g.bottom.end());
  top.insert(top.end(), g.top.begin(), g.top.end());
  UMorphism out(bottom, top, g.lambda, std::min(f.valid_degree, g.valid_degree));
  for (const auto& [df, cf] : f.terms) {
    for (const auto& [dg, cg] : g.terms) {
      int nf = df.matching.n, ng = dg.matching.n, mf = df.matching.m;
      std::vector<std::pair<std::pair<int, int>, int>> tagged;
      auto remap_f = [&](int p) { return df.matching.is_top(p) ? p + ng : p; };
      auto remap_g = [&](int p) { return dg.matching.is_top(p) ? p + nf + mf : p + nf; };
      for (size_t k = 0; k < df.matching.pairs.size(); ++k)
        tagged.push_back(
            {{remap_f(df.matching.pairs[k].first), remap_f(df.matching.pairs[k].second)},
             df.dots[k]});
      for (size_t k = 0; k < dg.matching.pairs.size(); ++k)
        tagged.push_back(
            {{remap_g(dg.matching.pairs[k].first), remap_g(dg.matching.pairs[k].second)},
             dg.dots[k]});
      std::sort(tagged.begin(), tagged.end());
      Matching R;
      R.n = nf + ng;
      R.m = (int)top.size();
      std::vector<int> dots;
      for (auto& [pr, dt] : tagged) {
        R.pairs.push_back(pr);
        dots.push_back(dt);
      }
      UMorphism base(bottom, top, g.lambda, out.valid_degree);
      base.add(UDiagram(bottom, top, std::move(R), std::move(dots)), LambdaElement(Rational(1)));
      for (const auto& [mon, coef] : cf.terms()) {
        UMorphism slid = base;
        for (int rr : mon) slid = slide_lambda_right(true, rr, mf, slid);
        for (const auto& [dd, cc] : slid.terms) out.add(dd, (coef * cg) * cc);
      }
    }
  }
  return out;
}

LambdaElement eta_lambda(const LambdaElement& c, const Rational& a, int lambda) {
  auto eta_e = [&](int r) {
    LambdaElement out;
    for (int k = 0; k <= r; ++k) {
      Rational coef = binomial(-lambda - k, r - k) * rational_pow(-a, r - k);
      if (k % 2 == 1) coef = -coef;
      if (r % 2 == 1) coef = -coef;
      out += coef * lambda_e(k);
    }
    return out;
  };
  LambdaElement out;
  for (const auto& [mon, coef] : c.terms()) {
    LambdaElement prod(coef);
    for (int r : mon) prod *= eta_e(r);
    out += prod;
  }
  return out;
}

UMorphism UEngine::eta(const UMorphism& f, const Rational& a) const {
  UMorphism out(f.bottom, f.top, f.lambda, f.valid_degree);
  for (const auto& [d, c] : f.terms) {
    LambdaElement ec = eta_lambda(c, a, f.lambda);
    std::function<void(UDiagram&, size_t, Rational)> expand = [&](UDiagram& cur, size_t k,
                                                                  Rational scale) {
      if (k == cur.dots.size()) {
        out.add(cur, scale * ec);
        return;
      }
      int n = d.dots[k];
      for (int j = 0; j <= n; ++j) {
        UDiagram next = cur;
        next.dots[k] = j;
        expand(next, k + 1, scale * binomial(n, j) * rational_pow(a, n - j));
      }
    };
    UDiagram start = d;
    expand(start, 0, Rational(1));
  }
  return out;
}

}  // namespace nb::usl2
