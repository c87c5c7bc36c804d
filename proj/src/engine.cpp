#include "nb/engine.hpp"

#include <algorithm>
#include <sstream>

namespace nb {

namespace {

DiagramWord delete_slice(const DiagramWord& w, int idx) {
  DiagramWord r = w;
  r.slices.erase(r.slices.begin() + idx);
  return r;
}

DiagramWord capcup_slice(const DiagramWord& w, int idx) {
  DiagramWord r = w;
  int pos = r.slices[idx].pos;
  r.slices[idx] = {SliceKind::Cap, pos};
  r.slices.insert(r.slices.begin() + idx + 1, {SliceKind::Cup, pos});
  return r;
}

// Remove points a < b from the matching and reindex.
Matching drop_points(const Matching& M, int a, int b, int n_new, int m_new,
                     std::vector<std::pair<int, int>>* extra = nullptr) {
  Matching R;
  R.n = n_new;
  R.m = m_new;
  auto remap = [&](int p) {
    int q = p;
    if (p > a) --q;
    if (p > b) --q;
    return q;
  };
  for (auto [x, y] : M.pairs) {
    if (x == a || x == b || y == a || y == b) continue;
    R.pairs.push_back({remap(x), remap(y)});
  }
  if (extra)
    for (auto [x, y] : *extra) R.pairs.push_back({remap(x), remap(y)});
  R.canonicalize();
  return R;
}

}  // namespace

WalkOutcome walk_dot(const DiagramWord& w, int from_point) {
  WalkOutcome out;
  int K = (int)w.slices.size();
  int level, p;
  bool down;
  if (from_point >= w.n) {
    level = K;
    p = from_point - w.n;
    down = true;
  } else {
    level = 0;
    p = from_point;
    down = false;
  }
  int sigma = 1;
  int guard = 0;
  while (true) {
    if (++guard > 4 * (K + 2) + 8) throw std::logic_error("walk_dot failed to terminate");
    if (down && level == 0) {
      out.sign = sigma;
      out.end_point = p;
      return out;
    }
    if (!down && level == K) {
      out.sign = sigma;
      out.end_point = w.n + p;  // caller translates via the final arity
      return out;
    }
    int si = down ? level - 1 : level;
    const Slice& s = w.slices[si];
    switch (s.kind) {
      case SliceKind::Dot:
        level += down ? -1 : 1;
        break;
      case SliceKind::Cross:
        if (p == s.pos) {
          out.corrections.push_back({sigma, delete_slice(w, si)});
          out.corrections.push_back({-sigma, capcup_slice(w, si)});
          p = s.pos + 1;
        } else if (p == s.pos + 1) {
          out.corrections.push_back({-sigma, delete_slice(w, si)});
          out.corrections.push_back({sigma, capcup_slice(w, si)});
          p = s.pos;
        }
        level += down ? -1 : 1;
        break;
      case SliceKind::Cup:
        if (down) {
          if (p == s.pos || p == s.pos + 1) {
            sigma = -sigma;
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
            sigma = -sigma;
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

Morphism Engine::normalize(const DiagramWord& w) const {
  int m = validate_word(w);
  (void)m;
  std::string key = w.key();
  {
    std::shared_lock lk(mu_);
    auto it = word_cache_.find(key);
    if (it != word_cache_.end()) return it->second;
  }
  Morphism M = Morphism::identity(w.n);
  for (const auto& s : w.slices) M = act(s, M);
  {
    std::unique_lock lk(mu_);
    word_cache_.emplace(std::move(key), M);
  }
  return M;
}

Morphism Engine::act(const Slice& s, const Morphism& f) const {
  int width = f.m;
  Morphism out(f.n, width);
  switch (s.kind) {
    case SliceKind::Dot: out.m = width; break;
    case SliceKind::Cross: out.m = width; break;
    case SliceKind::Cup: out.m = width + 2; break;
    case SliceKind::Cap: out.m = width - 2; break;
  }
  for (const auto& [d, c] : f.terms) {
    Morphism piece = act_diagram(s, d);
    // piece arities: (d.n, out.m); reuse n from f
    for (const auto& [dd, cc] : piece.terms) out.add(dd, c * cc);
  }
  return out;
}

Morphism Engine::act_diagram(const Slice& s, const BasisDiagram& d) const {
  std::ostringstream ks;
  ks << (int)s.kind << "," << s.pos << "|" << d.key();
  std::string key = ks.str();
  {
    std::shared_lock lk(mu_);
    auto it = act_cache_.find(key);
    if (it != act_cache_.end()) return it->second;
  }
  Morphism r;
  switch (s.kind) {
    case SliceKind::Dot: r = act_dot(s.pos, d); break;
    case SliceKind::Cross: r = act_cross(s.pos, d); break;
    case SliceKind::Cup: r = act_cup(s.pos, d); break;
    case SliceKind::Cap: r = act_cap(s.pos, d); break;
  }
  {
    std::unique_lock lk(mu_);
    act_cache_.emplace(std::move(key), r);
  }
  return r;
}

Morphism Engine::act_cup(int i, const BasisDiagram& d) const {
  const Matching& M = d.matching;
  Matching R;
  R.n = M.n;
  R.m = M.m + 2;
  auto remap = [&](int p) { return (M.is_top(p) && p - M.n >= i) ? p + 2 : p; };
  std::vector<std::pair<Matching, int>> order;
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
  return Morphism::single(BasisDiagram(std::move(R), std::move(dots)));
}

Morphism Engine::act_dot(int i, const BasisDiagram& d) const {
  const Matching& M = d.matching;
  int g = M.n + i;
  int sidx = M.strand_of(g);
  int canon = M.pairs[sidx].first;
  if (canon == g) {
    BasisDiagram nd = d;
    nd.dots[sidx] += 1;
    return Morphism::single(std::move(nd));
  }
  DiagramWord w = word_from_basis(d);
  WalkOutcome out = walk_dot(w, g);
  int landed = out.end_point;
  if (landed >= w.n) {
    // top arity of w equals M.m
    landed = M.n + (landed - w.n);
  }
  if (landed != canon) throw std::logic_error("act_dot: walk landed at the wrong end");
  BasisDiagram nd = d;
  nd.dots[sidx] += 1;
  Morphism res = Rational(out.sign) * Morphism::single(std::move(nd));
  for (const auto& [sg, cw] : out.corrections) res += Rational(sg) * normalize(cw);
  return res;
}

Morphism Engine::act_cross(int i, const BasisDiagram& d) const {
  const Matching& M = d.matching;
  int g1 = M.n + i, g2 = M.n + i + 1;
  int s = M.strand_of(g1), r = M.strand_of(g2);
  // Clear dots stored against the two capped top points (cup strands whose
  // canonical end is t_i or t_{i+1}).
  if (M.pairs[s].first == g1 && d.dots[s] > 0) {
    // x(i) . dot(i) = dot(i+1) . x(i) + 1 - cup(i) . cap(i)
    BasisDiagram d1 = d;
    d1.dots[s] -= 1;
    Morphism base = Morphism::single(d1);
    Morphism res = act({SliceKind::Dot, i + 1}, act_cross(i, d1));
    res += base;
    res -= act({SliceKind::Cup, i}, act({SliceKind::Cap, i}, base));
    return res;
  }
  if (M.pairs[r].first == g2 && d.dots[r] > 0) {
    // x(i) . dot(i+1) = dot(i) . x(i) - 1 + cup(i) . cap(i)
    BasisDiagram d1 = d;
    d1.dots[r] -= 1;
    Morphism base = Morphism::single(d1);
    Morphism res = act({SliceKind::Dot, i}, act_cross(i, d1));
    res -= base;
    res += act({SliceKind::Cup, i}, act({SliceKind::Cap, i}, base));
    return res;
  }
  if (s == r) return Morphism::zero(M.n, M.m);                       // twisted cup
  if (strands_interleave(M, s, r)) return Morphism::zero(M.n, M.m);  // double crossing
  // Reduced: swap the two top points.
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
  return Morphism::single(BasisDiagram(std::move(R2), std::move(dots)));
}

Morphism Engine::slide_circle(int slot, int k, const Rational& coef, const Morphism& base) const {
  if (slot >= base.m) {
    GammaElement o = (k == 0) ? GammaElement(Rational(1)) : GammaElement(gamma_q(k));
    return (coef * o) * base;
  }
  Morphism res(base.n, base.m);
  for (int j = 0; j <= k; ++j) {
    Rational aj = (j == 0) ? Rational(1) : Rational(((j % 2 == 0) ? 4 : -4) * (long)j);
    Morphism withdots = base;
    for (int c = 0; c < j; ++c) withdots = act({SliceKind::Dot, slot}, withdots);
    res += aj * slide_circle(slot + 1, k - j, coef, withdots);
  }
  return res;
}

Morphism Engine::act_cap(int i, const BasisDiagram& d) const {
  const Matching& M = d.matching;
  int g1 = M.n + i, g2 = M.n + i + 1;
  int s = M.strand_of(g1), r = M.strand_of(g2);
  if (s == r) {
    // Closed circle: dots sit at the canonical (left) top end, so the value
    // carries the side sign (-1)^dots relative to the right-dot convention.
    int k = d.dots[s];
    Matching R = drop_points(M, g1, g2, M.n, M.m - 2);
    std::vector<int> dots;
    for (size_t j = 0; j < M.pairs.size(); ++j)
      if ((int)j != s) dots.push_back(d.dots[j]);
    // dots must be re-aligned with the sorted pair order of R
    std::vector<std::pair<std::pair<int, int>, int>> tagged;
    {
      auto remap = [&](int p) {
        int q = p;
        if (p > g1) --q;
        if (p > g2) --q;
        return q;
      };
      for (size_t j = 0; j < M.pairs.size(); ++j) {
        if ((int)j == s) continue;
        tagged.push_back({{remap(M.pairs[j].first), remap(M.pairs[j].second)}, d.dots[j]});
      }
      std::sort(tagged.begin(), tagged.end());
    }
    Matching R2;
    R2.n = R.n;
    R2.m = R.m;
    std::vector<int> dots2;
    for (auto& [pr, dt] : tagged) {
      R2.pairs.push_back(pr);
      dots2.push_back(dt);
    }
    Morphism base = Morphism::single(BasisDiagram(std::move(R2), std::move(dots2)));
    Rational coef;
    if (k == 0) coef = Rational(cfg_.t);
    else {
      coef = Rational(1, 2);
      if (cfg_.t == 0) coef = -coef;          // (-1)^{t+1}/2
      if (k % 2 == 1) coef = -coef;           // side sign (-1)^k
    }
    if (coef.is_zero()) return Morphism::zero(base.n, base.m);
    return slide_circle(i, k, coef, base);
  }
  // Move dots stored against t_i over to t_{i+1} (cap slides a dot across
  // its critical point with a sign).
  int js = (M.pairs[s].first == g1) ? d.dots[s] : 0;
  int jr = (M.pairs[r].first == g2) ? d.dots[r] : 0;
  BasisDiagram d0 = d;
  if (js) d0.dots[s] = 0;
  if (jr) d0.dots[r] = 0;
  Morphism res = act_cap_pending(i, d0, js + jr, 0);
  if (js % 2 == 1) res = Rational(-1) * res;
  return res;
}

Morphism Engine::act_cap_pending(int i, const BasisDiagram& d, int pending, int far) const {
  const Matching& M = d.matching;
  int g1 = M.n + i, g2 = M.n + i + 1;
  int s = M.strand_of(g1), r = M.strand_of(g2);
  int far_point = (M.pairs[r].first == g2) ? M.pairs[r].second : M.pairs[r].first;
  auto with_far_dots = [&](DiagramWord w) {
    for (int k = 0; k < far; ++k) {
      if (far_point < M.n) w.slices.insert(w.slices.begin(), {SliceKind::Dot, far_point});
      else w.slices.push_back({SliceKind::Dot, far_point - M.n});
    }
    return w;
  };
  if (pending > 0) {
    // Walk the top pending dot down strand r to its far end; waiting pending
    // dots and already-landed far dots ride along as explicit slices.
    DiagramWord w = with_far_dots(word_from_basis(d));
    for (int k = 1; k < pending; ++k) w.slices.push_back({SliceKind::Dot, i + 1});
    WalkOutcome out = walk_dot(w, g2);
    int landed = out.end_point >= w.n ? M.n + (out.end_point - w.n) : out.end_point;
    if (landed != far_point) throw std::logic_error("act_cap_pending: walk landed at the wrong end");
    Morphism res(M.n, M.m - 2);
    res += Rational(out.sign) * act_cap_pending(i, d, pending - 1, far + 1);
    for (const auto& [sg, cw] : out.corrections) {
      Morphism inner = normalize(cw);
      Morphism capped(inner.n, inner.m - 2);
      for (const auto& [dd, cc] : inner.terms) {
        Morphism piece = act_cap(i, dd);
        for (const auto& [d2, c2] : piece.terms) capped.add(d2, cc * c2);
      }
      res += Rational(sg) * capped;
    }
    return res;
  }
  if (strands_interleave(M, s, r)) return Morphism::zero(M.n, M.m - 2);  // curl
  // A third strand crossed by both s and r gets double-crossed by the merged
  // strand: the whole diagram carries a bigon and vanishes.
  for (size_t q = 0; q < M.pairs.size(); ++q) {
    if ((int)q == s || (int)q == r) continue;
    if (strands_interleave(M, s, (int)q) && strands_interleave(M, r, (int)q))
      return Morphism::zero(M.n, M.m - 2);
  }
  // Merge: surviving ends of s and r join into one strand.
  int ps = (M.pairs[s].first == g1) ? M.pairs[s].second
         : (M.pairs[s].second == g1) ? M.pairs[s].first
                                     : throw std::logic_error("cap: bad strand s");
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
  // tag: pair -> (dots_at_first, dots_at_second)
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
  // Dots recorded at the second (non-canonical) end of the merged strand are
  // walked across one at a time; the ones still waiting ride along as
  // explicit slices so the smoothing corrections keep them.
  int far_strand = -1;
  for (size_t j = 0; j < far_dots.size(); ++j) {
    if (far_dots[j] == 0) continue;
    if (far_strand != -1) throw std::logic_error("far dots on more than one strand");
    far_strand = (int)j;
  }
  BasisDiagram base(R, dots);
  if (far_strand == -1) return Morphism::single(base);
  return walk_far_dots(base, R.pairs[far_strand].second, far_dots[far_strand]);
}

Morphism Engine::walk_far_dots(const BasisDiagram& d, int point, int count) const {
  if (count == 0) return Morphism::single(d);
  const Matching& Md = d.matching;
  int sj = Md.strand_of(point);
  int canon = Md.pairs[sj].first;
  if (canon == point) {
    BasisDiagram nd = d;
    nd.dots[sj] += count;
    return Morphism::single(std::move(nd));
  }
  DiagramWord wv = word_from_basis(d);
  for (int x = 1; x < count; ++x) {
    if (point < Md.n) wv.slices.insert(wv.slices.begin(), {SliceKind::Dot, point});
    else wv.slices.push_back({SliceKind::Dot, point - Md.n});
  }
  WalkOutcome out = walk_dot(wv, point);
  int landed = out.end_point >= wv.n ? Md.n + (out.end_point - wv.n) : out.end_point;
  if (landed != canon) throw std::logic_error("far-dot walk landed wrong");
  BasisDiagram nd = d;
  nd.dots[sj] += 1;
  Morphism res = Rational(out.sign) * walk_far_dots(nd, point, count - 1);
  for (const auto& [sg, cw] : out.corrections) res += Rational(sg) * normalize(cw);
  return res;
}

Morphism Engine::compose(const Morphism& f, const Morphism& g) const {
  if (f.n != g.m) throw std::invalid_argument("compose: arity mismatch");
  Morphism out(g.n, f.m);
  for (const auto& [df, cf] : f.terms) {
    Morphism M = g;
    DiagramWord w = word_from_basis(df);
    for (const auto& s : w.slices) M = act(s, M);
    for (const auto& [d, c] : M.terms) out.add(d, cf * c);
  }
  return out;
}

Morphism Engine::tensor(const Morphism& f, const Morphism& g) const {
  Morphism out(f.n + g.n, f.m + g.m);
  for (const auto& [df, cf] : f.terms) {
    for (const auto& [dg, cg] : g.terms) {
      int nf = df.matching.n, ng = dg.matching.n, mf = df.matching.m;
      std::vector<std::pair<std::pair<int, int>, int>> tagged;
      auto remap_f = [&](int p) { return df.matching.is_top(p) ? p + ng : p; };
      auto remap_g = [&](int p) { return dg.matching.is_top(p) ? p + nf + mf : p + nf; };
      for (size_t k = 0; k < df.matching.pairs.size(); ++k)
        tagged.push_back({{remap_f(df.matching.pairs[k].first), remap_f(df.matching.pairs[k].second)},
                          df.dots[k]});
      for (size_t k = 0; k < dg.matching.pairs.size(); ++k)
        tagged.push_back({{remap_g(dg.matching.pairs[k].first), remap_g(dg.matching.pairs[k].second)},
                          dg.dots[k]});
      std::sort(tagged.begin(), tagged.end());
      Matching R;
      R.n = nf + ng;
      R.m = df.matching.m + dg.matching.m;
      std::vector<int> dots;
      for (auto& [pr, dt] : tagged) {
        R.pairs.push_back(pr);
        dots.push_back(dt);
      }
      Morphism base = Morphism::single(BasisDiagram(std::move(R), std::move(dots)));
      // The left factor's coefficient stands for bubbles sitting between the
      // two factors; each q_r slides across the right factor as an O_r.
      for (const auto& [mono, coef] : cf.terms()) {
        Morphism slid = base;
        for (int r : mono) slid = slide_circle(mf, r, Rational(1), slid);
        for (const auto& [dd, cc] : slid.terms) out.add(dd, (coef * cg) * cc);
      }
    }
  }
  return out;
}

Morphism Engine::gamma_act(const Morphism& f, const GammaElement& p) const {
  Morphism out(f.n, f.m);
  for (const auto& [d, c] : f.terms) out.add(d, c * p);
  return out;
}

DiagramWord word_T(const DiagramWord& w) {
  DiagramWord r(validate_word(w));
  for (auto it = w.slices.rbegin(); it != w.slices.rend(); ++it) {
    Slice s = *it;
    if (s.kind == SliceKind::Cup) s.kind = SliceKind::Cap;
    else if (s.kind == SliceKind::Cap) s.kind = SliceKind::Cup;
    r.slices.push_back(s);
  }
  return r;
}

DiagramWord word_R(const DiagramWord& w) {
  DiagramWord r(w.n);
  int width = w.n;
  for (const auto& s : w.slices) {
    Slice t = s;
    switch (s.kind) {
      case SliceKind::Dot: t.pos = width - 1 - s.pos; break;
      case SliceKind::Cross: t.pos = width - 2 - s.pos; break;
      case SliceKind::Cup:
        t.pos = width - s.pos;
        width += 2;
        break;
      case SliceKind::Cap:
        t.pos = width - 2 - s.pos;
        width -= 2;
        break;
    }
    r.slices.push_back(t);
  }
  return r;
}

Morphism Engine::symmetry(const Morphism& f, SymmetryKind which) const {
  if (which == SymmetryKind::D) return symmetry(symmetry(f, SymmetryKind::T), SymmetryKind::R);
  Morphism out = (which == SymmetryKind::T) ? Morphism(f.m, f.n) : Morphism(f.n, f.m);
  for (const auto& [d, c] : f.terms) {
    DiagramWord w = word_from_basis(d);
    if (which == SymmetryKind::T) {
      // op-duality fixes bubbles, so the coefficient stays on the right
      Morphism piece = normalize(word_T(w));
      for (const auto& [dd, cc] : piece.terms) out.add(dd, c * cc);
    } else {
      // rev-duality reflects the diagram, moving its coefficient bubbles to
      // the left edge; push them back through with the tensor slides.
      Rational sign(d.total_dots() % 2 == 1 ? -1 : 1);
      Morphism base = normalize(word_R(w));
      Morphism coeffm(0, 0);
      coeffm.add(BasisDiagram(Matching{}), sign * c);
      out += tensor(coeffm, base);
    }
  }
  return out;
}

size_t Engine::cache_size() const {
  std::shared_lock lk(mu_);
  return word_cache_.size() + act_cache_.size();
}

std::map<int, long> graded_rank(int m, int n, int order) {
  std::map<int, long> out;
  if ((m + n) % 2 != 0) return out;
  int k = (m + n) / 2;
  // (1 - q^2)^{-k} = sum_j C(j+k-1, k-1) q^{2j}
  auto matchings = enumerate_matchings(m, n);
  for (const auto& M : matchings) {
    int base = -2 * crossing_number(M);
    for (int j = 0; base + 2 * j <= order; ++j) {
      long coef = 1;
      for (int t = 1; t <= k - 1; ++t) coef = coef * (j + t) / t;
      if (k == 0 && j > 0) break;
      out[base + 2 * j] += coef;
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

std::string graded_rank_str(const std::map<int, long>& s) {
  if (s.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, c] : s) {
    if (!first) os << " + ";
    first = false;
    if (p == 0) {
      os << c;
    } else {
      if (c != 1) os << c << "*";
      os << "q^" << p;
    }
  }
  return os.str();
}

std::string Morphism::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [d, c] : terms) {
    if (!first) os << " + ";
    first = false;
    std::string cs = c.str('q');
    bool needs_parens = cs.find(" + ") != std::string::npos || cs.find(" - ") != std::string::npos;
    if (needs_parens) os << "(" << cs << ")";
    else os << cs;
    if (d.matching.pairs.empty()) continue;
    os << "*[";
    bool ident = d.matching.n == d.matching.m && d.total_dots() == 0;
    if (ident)
      for (int i = 0; i < d.matching.n && ident; ++i)
        ident = d.matching.partner(i) == d.matching.n + i;
    if (ident) {
      os << "id";
    } else {
      for (size_t k = 0; k < d.matching.pairs.size(); ++k) {
        os << "{" << d.matching.pairs[k].first << "-" << d.matching.pairs[k].second;
        if (d.dots[k]) os << ":" << d.dots[k];
        os << "}";
      }
    }
    os << "]";
  }
  return os.str();
}

std::string Morphism::json(int t) const {
  std::ostringstream os;
  os << "{\"n\":" << n << ",\"m\":" << m << ",\"t\":" << t << ",\"terms\":[";
  bool first = true;
  for (const auto& [d, c] : terms) {
    if (!first) os << ",";
    first = false;
    std::string dj = d.json();
    dj.pop_back();  // strip closing brace, append coeff
    os << dj << ",\"coeff\":" << c.json() << "}";
  }
  os << "]}";
  return os.str();
}

}  // namespace nb
