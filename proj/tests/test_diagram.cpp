#include "doctest.h"

#include <map>

#include "nb/diagram.hpp"

using namespace nb;

namespace {
long double_factorial(int k) {  // k!! with (-1)!! = 1
  long r = 1;
  for (int v = k; v > 1; v -= 2) r *= v;
  return r;
}

// Replay a word and recover the boundary matching it realizes.
Matching replay(const DiagramWord& w, int m) {
  int n = w.n;
  // wire labels: real point ids < n+m; cup-born wires get virtual ids
  std::vector<int> wires(n);
  for (int i = 0; i < n; ++i) wires[i] = i;
  std::vector<std::pair<int, int>> found;
  int next_virtual = n + m;
  std::map<int, int> vpartner;
  auto substitute = [&](int from, int to) {
    for (auto& x : wires)
      if (x == from) x = to;
    for (auto& [k, v] : vpartner)
      if (v == from) v = to;
  };
  for (const auto& s : w.slices) {
    switch (s.kind) {
      case SliceKind::Dot: break;
      case SliceKind::Cross: std::swap(wires[s.pos], wires[s.pos + 1]); break;
      case SliceKind::Cup: {
        int a = next_virtual++, b = next_virtual++;
        vpartner[a] = b;
        vpartner[b] = a;
        wires.insert(wires.begin() + s.pos, a);
        wires.insert(wires.begin() + s.pos + 1, b);
        break;
      }
      case SliceKind::Cap: {
        int a = wires[s.pos], b = wires[s.pos + 1];
        wires.erase(wires.begin() + s.pos, wires.begin() + s.pos + 2);
        bool va = a >= n + m, vb = b >= n + m;
        if (!va && !vb) {
          found.push_back({a, b});
        } else if (va && vb) {
          int pa = vpartner[a], pb = vpartner[b];
          vpartner.erase(a);
          vpartner.erase(b);
          vpartner[pa] = pb;
          vpartner[pb] = pa;
        } else {
          int real = va ? b : a, virt = va ? a : b;
          int pv = vpartner[virt];
          vpartner.erase(virt);
          vpartner.erase(pv);
          substitute(pv, real);
        }
        break;
      }
    }
  }
  for (size_t j = 0; j < wires.size(); ++j) {
    int u = wires[j];
    int topid = n + (int)j;
    if (u < n + m) {
      found.push_back({u, topid});
    } else {
      int pu = vpartner[u];
      vpartner.erase(u);
      vpartner.erase(pu);
      substitute(pu, topid);
      substitute(u, -1000 - (int)j);  // consumed
    }
  }
  Matching R;
  R.n = n;
  R.m = m;
  R.pairs = found;
  R.canonicalize();
  return R;
}
}  // namespace

TEST_CASE("enumerate_matchings counts (m+n-1)!! and respects parity") {
  CHECK(enumerate_matchings(0, 2).size() == 1);
  CHECK(enumerate_matchings(2, 2).size() == 3);
  CHECK(enumerate_matchings(1, 2).empty());
  for (int n = 0; n <= 5; ++n)
    for (int m = 0; m <= 5; ++m) {
      if (n + m > 10) continue;
      auto v = enumerate_matchings(m, n);
      if ((m + n) % 2 == 0)
        CHECK((long)v.size() == double_factorial(m + n - 1));
      else
        CHECK(v.empty());
      for (const auto& M : v) M.validate();
    }
}

TEST_CASE("enumeration order is lexicographic by partner of the first point") {
  auto v = enumerate_matchings(2, 2);
  REQUIRE(v.size() == 3);
  CHECK(v[0].pairs == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
  CHECK(v[1].pairs == std::vector<std::pair<int, int>>{{0, 2}, {1, 3}});
  CHECK(v[2].pairs == std::vector<std::pair<int, int>>{{0, 3}, {1, 2}});
}

TEST_CASE("crossing_number on stated examples") {
  for (int n = 1; n <= 4; ++n) CHECK(crossing_number(Matching::identity(n)) == 0);
  Matching x;
  x.n = x.m = 2;
  x.pairs = {{0, 3}, {1, 2}};
  CHECK(crossing_number(x) == 1);
  Matching cyc;  // {(b1,t2),(b2,t3),(b3,t1)}
  cyc.n = cyc.m = 3;
  cyc.pairs = {{0, 4}, {1, 5}, {2, 3}};
  CHECK(crossing_number(cyc) == 2);
}

TEST_CASE("crossing_number is invariant under 180-degree rotation") {
  for (auto& M : enumerate_matchings(3, 3)) {
    Matching R;
    R.n = M.m;
    R.m = M.n;
    auto rot = [&](int p) {
      if (M.is_top(p)) return M.m - 1 - (p - M.n);
      return M.m + (M.n - 1 - p);
    };
    for (auto [a, b] : M.pairs) R.pairs.push_back({rot(a), rot(b)});
    R.canonicalize();
    R.validate();
    CHECK(crossing_number(R) == crossing_number(M));
  }
}

TEST_CASE("degree of basis diagrams") {
  BasisDiagram id1(Matching::identity(1));
  CHECK(id1.degree() == 0);
  Matching x;
  x.n = x.m = 2;
  x.pairs = {{0, 3}, {1, 2}};
  CHECK(BasisDiagram(x).degree() == -2);
  Matching cap;
  cap.n = 2;
  cap.m = 0;
  cap.pairs = {{0, 1}};
  CHECK(BasisDiagram(cap, {3}).degree() == 6);
}

TEST_CASE("validate_word reports arities and failures") {
  DiagramWord w(2);
  w.cap(0);
  CHECK(validate_word(w) == 0);

  DiagramWord bad(2);
  bad.cross(1);
  CHECK_THROWS_AS(validate_word(bad), WordError);

  DiagramWord loop(0);
  loop.cup(0).cap(0);
  CHECK(validate_word(loop) == 0);
}

TEST_CASE("word_from_basis is reduced and realizes the right matching") {
  for (int n = 0; n <= 4; ++n)
    for (int m = 0; m <= 4; ++m) {
      if ((n + m) % 2 != 0 || n + m == 0 || n + m > 8) continue;
      for (const auto& M : enumerate_matchings(m, n)) {
        BasisDiagram d(M);
        for (size_t k = 0; k < d.dots.size(); ++k) d.dots[k] = (int)k % 2;
        DiagramWord w = word_from_basis(d);
        CHECK(validate_word(w) == m);
        CHECK(w.crossings() == crossing_number(M));
        CHECK(w.total_dots() == d.total_dots());
        CHECK(replay(w, m) == M);
      }
    }
}

TEST_CASE("diagram JSON matches the documented shape") {
  Matching x;
  x.n = x.m = 2;
  x.pairs = {{0, 3}, {1, 2}};
  BasisDiagram d(x, {0, 1});
  CHECK(d.json() == "{\"n\":2,\"m\":2,\"pairs\":[[0,3],[1,2]],\"dots\":[0,1]}");
}
