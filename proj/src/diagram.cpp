#include "nb/diagram.hpp"

#include <algorithm>
#include <sstream>

namespace nb {

Matching Matching::identity(int n) {
  Matching M;
  M.n = M.m = n;
  for (int i = 0; i < n; ++i) M.pairs.push_back({i, n + i});
  return M;
}

int Matching::partner(int p) const {
  for (const auto& [a, b] : pairs) {
    if (a == p) return b;
    if (b == p) return a;
  }
  throw std::out_of_range("point not matched");
}

int Matching::strand_of(int p) const {
  for (size_t i = 0; i < pairs.size(); ++i)
    if (pairs[i].first == p || pairs[i].second == p) return (int)i;
  throw std::out_of_range("point not matched");
}

void Matching::canonicalize() {
  for (auto& pr : pairs)
    if (pr.first > pr.second) std::swap(pr.first, pr.second);
  std::sort(pairs.begin(), pairs.end());
}

void Matching::validate() const {
  if ((n + m) % 2 != 0) throw std::invalid_argument("odd number of boundary points");
  std::vector<int> seen(n + m, 0);
  if ((int)pairs.size() * 2 != n + m) throw std::invalid_argument("not a perfect matching");
  for (const auto& [a, b] : pairs) {
    if (a < 0 || a >= n + m || b < 0 || b >= n + m || a == b)
      throw std::invalid_argument("bad point id");
    seen[a]++;
    seen[b]++;
  }
  for (int c : seen)
    if (c != 1) throw std::invalid_argument("point not matched exactly once");
}

int Matching::circpos(int p) const { return is_top(p) ? n + (m - 1 - (p - n)) : p; }

bool strands_interleave(const Matching& M, int si, int sj) {
  auto [a, b] = M.pairs[si];
  auto [c, d] = M.pairs[sj];
  int ca = M.circpos(a), cb = M.circpos(b), cc = M.circpos(c), cd = M.circpos(d);
  if (ca > cb) std::swap(ca, cb);
  bool c_in = (cc > ca && cc < cb);
  bool d_in = (cd > ca && cd < cb);
  return c_in != d_in;
}

int crossing_number(const Matching& M) {
  int k = 0;
  for (size_t i = 0; i < M.pairs.size(); ++i)
    for (size_t j = i + 1; j < M.pairs.size(); ++j)
      if (strands_interleave(M, (int)i, (int)j)) ++k;
  return k;
}

std::string Matching::key() const {
  std::ostringstream os;
  os << n << ":" << m;
  for (const auto& [a, b] : pairs) os << ":" << a << "-" << b;
  return os.str();
}

namespace {
void enumerate_rec(int total, std::vector<int>& partner, std::vector<Matching>& out, int n, int m,
                   std::vector<std::pair<int, int>>& acc) {
  int p = 0;
  while (p < total && partner[p] >= 0) ++p;
  if (p == total) {
    Matching M;
    M.n = n;
    M.m = m;
    M.pairs = acc;
    M.canonicalize();
    out.push_back(std::move(M));
    return;
  }
  for (int q = p + 1; q < total; ++q) {
    if (partner[q] >= 0) continue;
    partner[p] = q;
    partner[q] = p;
    acc.push_back({p, q});
    enumerate_rec(total, partner, out, n, m, acc);
    acc.pop_back();
    partner[p] = partner[q] = -1;
  }
}
}  // namespace

std::vector<Matching> enumerate_matchings(int m, int n) {
  std::vector<Matching> out;
  if (m < 0 || n < 0 || (m + n) % 2 != 0) return out;
  if (m + n == 0) {
    Matching M;
    out.push_back(M);
    return out;
  }
  std::vector<int> partner(n + m, -1);
  std::vector<std::pair<int, int>> acc;
  enumerate_rec(n + m, partner, out, n, m, acc);
  return out;
}

int BasisDiagram::total_dots() const {
  int s = 0;
  for (int d : dots) s += d;
  return s;
}

int BasisDiagram::degree() const { return 2 * total_dots() - 2 * crossing_number(matching); }

std::string BasisDiagram::key() const {
  std::ostringstream os;
  os << matching.key();
  for (int d : dots) os << "." << d;
  return os.str();
}

std::string BasisDiagram::json() const {
  std::ostringstream os;
  os << "{\"n\":" << matching.n << ",\"m\":" << matching.m << ",\"pairs\":[";
  for (size_t i = 0; i < matching.pairs.size(); ++i) {
    if (i) os << ",";
    os << "[" << matching.pairs[i].first << "," << matching.pairs[i].second << "]";
  }
  os << "],\"dots\":[";
  for (size_t i = 0; i < dots.size(); ++i) os << (i ? "," : "") << dots[i];
  os << "]}";
  return os.str();
}

int DiagramWord::crossings() const {
  int k = 0;
  for (const auto& s : slices) k += (s.kind == SliceKind::Cross);
  return k;
}

int DiagramWord::total_dots() const {
  int k = 0;
  for (const auto& s : slices) k += (s.kind == SliceKind::Dot);
  return k;
}

int DiagramWord::degree() const {
  int d = 0;
  for (const auto& s : slices) {
    if (s.kind == SliceKind::Dot) d += 2;
    else if (s.kind == SliceKind::Cross) d -= 2;
  }
  return d;
}

std::string DiagramWord::key() const {
  std::ostringstream os;
  os << n << "|";
  for (const auto& s : slices) {
    switch (s.kind) {
      case SliceKind::Dot: os << "d"; break;
      case SliceKind::Cross: os << "x"; break;
      case SliceKind::Cup: os << "u"; break;
      case SliceKind::Cap: os << "n"; break;
    }
    os << s.pos << ";";
  }
  return os.str();
}

int validate_word(const DiagramWord& w) {
  if (w.n < 0) throw WordError(WordError::WidthMismatch, -1, "negative arity");
  int width = w.n;
  for (size_t i = 0; i < w.slices.size(); ++i) {
    const Slice& s = w.slices[i];
    auto fail_pos = [&] {
      std::ostringstream os;
      os << "slice " << i << ": position " << s.pos + 1 << " out of range at width " << width;
      throw WordError(WordError::PositionOutOfRange, (int)i, os.str());
    };
    switch (s.kind) {
      case SliceKind::Dot:
        if (s.pos < 0 || s.pos >= width) fail_pos();
        break;
      case SliceKind::Cross:
        if (s.pos < 0 || s.pos + 1 >= width) fail_pos();
        break;
      case SliceKind::Cup:
        if (s.pos < 0 || s.pos > width) fail_pos();
        width += 2;
        break;
      case SliceKind::Cap:
        if (s.pos < 0 || s.pos + 1 >= width) fail_pos();
        width -= 2;
        break;
    }
  }
  return width;
}

DiagramWord stack_words(const DiagramWord& bottom, const DiagramWord& top) {
  if (validate_word(bottom) != top.n)
    throw WordError(WordError::WidthMismatch, 0, "stacked words do not chain");
  DiagramWord w = bottom;
  w.slices.insert(w.slices.end(), top.slices.begin(), top.slices.end());
  return w;
}

DiagramWord tensor_words(const DiagramWord& left, const DiagramWord& right) {
  DiagramWord w(left.n + right.n);
  int left_width = left.n;
  for (const auto& s : left.slices) {
    w.slices.push_back(s);
    if (s.kind == SliceKind::Cup) left_width += 2;
    if (s.kind == SliceKind::Cap) left_width -= 2;
  }
  for (const auto& s : right.slices) w.slices.push_back({s.kind, s.pos + left_width});
  validate_word(w);
  return w;
}

namespace {

// Reduced word for an undotted matching.  Peels boundary-adjacent cups/caps
// and boundary-exposed crossings; every emitted crossing removes exactly one
// interleaving, so the crossing count of the word equals crossing_number.
void core_word(const Matching& M, std::vector<Slice>& bottom_acc, std::vector<Slice>& top_acc);

Matching drop_pair(const Matching& M, int a, int b, int n_new, int m_new) {
  // Remove points a < b and reindex the rest, keeping boundary order.
  Matching R;
  R.n = n_new;
  R.m = m_new;
  auto remap = [&](int p) {
    int q = p;
    if (p > a) --q;
    if (p > b) --q;
    // account for bottom/top boundary shrink
    if (!M.is_top(p) || n_new == M.n) return q;
    return q;  // already consistent: ids are consecutive after removal
  };
  for (auto [x, y] : M.pairs) {
    if ((x == a && y == b)) continue;
    R.pairs.push_back({remap(x), remap(y)});
  }
  R.canonicalize();
  return R;
}

Matching swap_top(const Matching& M, int j) {
  Matching R = M;
  int a = M.n + j, b = M.n + j + 1;
  for (auto& pr : R.pairs) {
    if (pr.first == a) pr.first = b;
    else if (pr.first == b) pr.first = a;
    if (pr.second == a) pr.second = b;
    else if (pr.second == b) pr.second = a;
  }
  R.canonicalize();
  return R;
}

Matching swap_bottom(const Matching& M, int j) {
  Matching R = M;
  for (auto& pr : R.pairs) {
    if (pr.first == j) pr.first = j + 1;
    else if (pr.first == j + 1) pr.first = j;
    if (pr.second == j) pr.second = j + 1;
    else if (pr.second == j + 1) pr.second = j;
  }
  R.canonicalize();
  return R;
}

void core_word(const Matching& M, std::vector<Slice>& bottom_acc, std::vector<Slice>& top_acc) {
  if (M.pairs.empty()) return;
  // 1. boundary-adjacent cup {t_j, t_{j+1}}
  for (int j = 0; j + 1 < M.m; ++j) {
    int a = M.n + j, b = M.n + j + 1;
    if (M.strand_of(a) == M.strand_of(b) && M.partner(a) == b) {
      top_acc.push_back({SliceKind::Cup, j});
      core_word(drop_pair(M, a, b, M.n, M.m - 2), bottom_acc, top_acc);
      return;
    }
  }
  // 2. boundary-adjacent cap {b_j, b_{j+1}}
  for (int j = 0; j + 1 < M.n; ++j) {
    if (M.partner(j) == j + 1) {
      bottom_acc.push_back({SliceKind::Cap, j});
      core_word(drop_pair(M, j, j + 1, M.n - 2, M.m), bottom_acc, top_acc);
      return;
    }
  }
  // 3. top-exposed crossing: adjacent top points whose strands interleave
  for (int j = 0; j + 1 < M.m; ++j) {
    int si = M.strand_of(M.n + j), sj = M.strand_of(M.n + j + 1);
    if (si != sj && strands_interleave(M, si, sj)) {
      top_acc.push_back({SliceKind::Cross, j});
      core_word(swap_top(M, j), bottom_acc, top_acc);
      return;
    }
  }
  // 4. bottom-exposed crossing
  for (int j = 0; j + 1 < M.n; ++j) {
    int si = M.strand_of(j), sj = M.strand_of(j + 1);
    if (si != sj && strands_interleave(M, si, sj)) {
      bottom_acc.push_back({SliceKind::Cross, j});
      core_word(swap_bottom(M, j), bottom_acc, top_acc);
      return;
    }
  }
  // identity-like matching: nothing to emit
  for (const auto& [a, b] : M.pairs) {
    if (M.is_top(a) == M.is_top(b)) throw std::logic_error("core_word: unpeelable matching");
    if (a != b - M.n) throw std::logic_error("core_word: crossing left unpeeled");
  }
}

}  // namespace

DiagramWord word_from_basis(const BasisDiagram& d) {
  d.matching.validate();
  DiagramWord w(d.matching.n);
  // bottom dots first: canonical ends on the bottom boundary
  for (size_t s = 0; s < d.matching.pairs.size(); ++s) {
    int e = d.matching.pairs[s].first;
    if (!d.matching.is_top(e))
      for (int k = 0; k < d.dots[s]; ++k) w.slices.push_back({SliceKind::Dot, e});
  }
  std::vector<Slice> bottom_acc, top_acc;
  core_word(d.matching, bottom_acc, top_acc);
  // bottom_acc was collected outermost-first: it already lists slices bottom-up.
  w.slices.insert(w.slices.end(), bottom_acc.begin(), bottom_acc.end());
  // top_acc was collected outermost-first, i.e. top-down: reverse it.
  w.slices.insert(w.slices.end(), top_acc.rbegin(), top_acc.rend());
  // top dots last: canonical ends on the top boundary (cup strands)
  for (size_t s = 0; s < d.matching.pairs.size(); ++s) {
    int e = d.matching.pairs[s].first;
    if (d.matching.is_top(e))
      for (int k = 0; k < d.dots[s]; ++k) w.slices.push_back({SliceKind::Dot, e - d.matching.n});
  }
  if (validate_word(w) != d.matching.m) throw std::logic_error("word_from_basis arity bug");
  if (w.crossings() != crossing_number(d.matching))
    throw std::logic_error("word_from_basis crossing-count bug");
  return w;
}

}  // namespace nb
