#include "nb/report.hpp"

#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "nb/parse.hpp"

namespace nb {

std::string Report::json() const {
  std::ostringstream os;
  os << "{\"suite\":\"" << suite << "\",\"cases\":[";
  for (size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    if (i) os << ",";
    os << "{\"id\":\"" << c.id << "\",\"params\":\"" << c.params << "\",\"status\":\""
       << c.status << "\"";
    if (!c.witness.empty()) {
      std::string esc;
      for (char ch : c.witness) {
        if (ch == '"' || ch == '\\') esc += '\\';
        esc += ch;
      }
      os << ",\"witness\":\"" << esc << "\"";
    }
    os << "}";
  }
  os << "],\"elapsed_ms\":" << elapsed_ms << "}";
  return os.str();
}

std::string Report::text() const {
  std::ostringstream os;
  for (const auto& c : cases) {
    os << c.status << "  " << suite << "/" << c.id;
    if (!c.params.empty()) os << " (" << c.params << ")";
    if (c.status == "FAIL" && !c.witness.empty()) os << "\n      witness: " << c.witness;
    os << "\n";
  }
  return os.str();
}

std::uint64_t ContextSampler::next() {
  // xorshift64*
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 2685821657736338717ULL;
}

DiagramWord ContextSampler::random_word(int n_start, int max_len) {
  DiagramWord w(n_start);
  int width = n_start;
  int dots = 0;
  int len = (int)(next() % (max_len + 1));
  for (int i = 0; i < len; ++i) {
    int kind = (int)(next() % 4);
    if (kind == 0 && width > 0 && dots < max_dots_) {
      w.dot((int)(next() % width));
      ++dots;
    } else if (kind == 1 && width > 1) {
      w.cross((int)(next() % (width - 1)));
    } else if (kind == 2 && width > 1) {
      w.cap((int)(next() % (width - 1)));
      width -= 2;
    } else if (width + 2 <= max_width_) {
      w.cup((int)(next() % (width + 1)));
      width += 2;
    }
  }
  return w;
}

DiagramWord ContextSampler::word_with_top(int m_target, int max_len) {
  for (int attempt = 0; attempt < 500; ++attempt) {
    int n0 = (int)(next() % (max_width_ + 1));
    if ((n0 + m_target) % 2 != 0) continue;
    DiagramWord w = random_word(n0, max_len);
    if (validate_word(w) == m_target) return w;
  }
  // fall back to the plain identity context
  return DiagramWord(m_target);
}

std::vector<CaseResult> run_cases_parallel(int jobs, int count,
                                           const std::function<CaseResult(int)>& one) {
  std::vector<CaseResult> out(count);
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) out[i] = one(i);
    return out;
  }
  std::atomic<int> cursor{0};
  std::vector<std::thread> pool;
  int threads = std::min(jobs, count);
  for (int tix = 0; tix < threads; ++tix) {
    pool.emplace_back([&] {
      while (true) {
        int i = cursor.fetch_add(1);
        if (i >= count) break;
        out[i] = one(i);
      }
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

namespace {

std::string subst_t(std::string s, int t) {
  const std::string key = "{t}";
  for (size_t p = s.find(key); p != std::string::npos; p = s.find(key))
    s = s.substr(0, p) + std::to_string(t) + s.substr(p + key.size());
  return s;
}

}  // namespace

const std::vector<RelationCase>& nilbrauer_relations() {
  static const std::vector<RelationCase> rels = {
      {"rels1.square", "x(1).x(1)", "0*id(2)"},
      {"rels1.braid", "x(1).x(2).x(1)", "x(2).x(1).x(2)"},
      {"rels2.circle", "cap(1).cup(1)", "{t}*id(0)"},
      {"rels2.zigzag-a", "cap(1).cup(2)", "id(1)"},
      {"rels2.zigzag-b", "cap(2).cup(1)", "id(1)"},
      {"rels3.cap-cross", "cap(1).x(1)", "0*cap(1)"},
      {"rels3.cap-slide", "cap(2).x(1)", "cap(1).x(2)"},
      {"rels4.dot-cross", "dot(1).x(1) - x(1).dot(2)", "id(2) - cup(1).cap(1)"},
      {"rels4.cap-dot", "cap(1).dot(2)", "-cap(1).dot(1)"},
  };
  return rels;
}

const std::vector<RelationCase>& derived_relations() {
  static const std::vector<RelationCase> rels = {
      {"rels5.cup-slide", "x(1).cup(2)", "x(2).cup(1)"},
      {"rels5.curl-right", "cap(2).x(1).cup(2)", "0*id(1)"},
      {"rels5.curl-left", "cap(1).x(2).cup(1)", "0*id(1)"},
      {"rels6.cross-cup", "x(1).cup(1)", "0*cup(1)"},
      {"rels6.bigon", "cap(2).x(1).x(3).cup(2)", "0*id(2)"},
      {"rels7.dot-cross", "x(1).dot(1) - dot(2).x(1)", "id(2) - cup(1).cap(1)"},
      {"rels7.cup-dot", "dot(2).cup(1)", "-dot(1).cup(1)"},
      {"rels8.t-squared",
       "cap(1).dot(1).x(1).cup(1) - cap(1).x(1).dot(2).cup(1)",
       "cap(1).cup(1) - cap(1).cup(1).cap(1).cup(1)"},
  };
  return rels;
}

CaseResult verify_identity(const Engine& e, const RelationCase& rc, const VerifyOptions& opt) {
  CaseResult res;
  res.id = rc.id;
  res.params = "t=" + std::to_string(e.config().t);
  try {
    Morphism L = eval_expr(e, subst_t(rc.lhs, e.config().t));
    Morphism R = eval_expr(e, subst_t(rc.rhs, e.config().t));
    if (L.n != R.n || L.m != R.m) {
      res.status = "FAIL";
      res.witness = "arity mismatch between sides";
      return res;
    }
    if (!(L == R)) {
      res.status = "FAIL";
      res.witness = "identity context: " + L.str() + "  !=  " + R.str();
      return res;
    }
    ContextSampler gen(opt.seed * 1000003ULL + std::hash<std::string>{}(rc.id), 2, 2);
    for (int k = 0; k < opt.contexts; ++k) {
      DiagramWord c2 = gen.word_with_top(L.n, 2 + k % 3);
      DiagramWord c1 = gen.word_with_bottom(L.m, 2 + k % 3);
      DiagramWord c3 = gen.random_word((int)(gen.next() % 3), 2);
      Morphism c1m = e.normalize(c1), c2m = e.normalize(c2), c3m = e.normalize(c3);
      Morphism lw = e.tensor(e.compose(c1m, e.compose(L, c2m)), c3m);
      Morphism rw = e.tensor(e.compose(c1m, e.compose(R, c2m)), c3m);
      if (!(lw == rw)) {
        res.status = "FAIL";
        std::ostringstream os;
        os << "context #" << k << " c1=" << c1.key() << " c2=" << c2.key() << " c3=" << c3.key()
           << ": " << lw.str() << "  !=  " << rw.str();
        res.witness = os.str();
        return res;
      }
    }
    res.status = "PASS";
  } catch (const std::exception& ex) {
    res.status = "FAIL";
    res.witness = std::string("exception: ") + ex.what();
  }
  return res;
}

namespace {

// Right curl with r dots on the loop, as a word on one strand.
DiagramWord curl_word(int r) {
  DiagramWord w(1);
  w.cup(1);
  for (int k = 0; k < r; ++k) w.dot(2);
  w.cross(0).cap(1);
  return w;
}

DiagramWord circle_right_of_strand(int r) {
  DiagramWord w(1);
  w.cup(1);
  for (int k = 0; k < r; ++k) w.dot(2);
  w.cap(1);
  return w;
}

DiagramWord circle_left_of_strand(int r) {
  DiagramWord w(1);
  w.cup(0);
  for (int k = 0; k < r; ++k) w.dot(1);
  w.cap(0);
  return w;
}

DiagramWord strand_with_dots(int i) {
  DiagramWord w(1);
  for (int k = 0; k < i; ++k) w.dot(0);
  return w;
}

DiagramWord free_circle(int r) {
  DiagramWord w(0);
  w.cup(0);
  for (int k = 0; k < r; ++k) w.dot(1);
  w.cap(0);
  return w;
}

}  // namespace

Report run_nilbrauer_suite(const VerifyOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  Report rep;
  rep.suite = "nilbrauer";
  Engine e{EngineConfig(opt.t, opt.series_order)};
  const auto& rels = nilbrauer_relations();
  rep.cases = run_cases_parallel(opt.jobs, (int)rels.size(),
                                 [&](int i) { return verify_identity(e, rels[i], opt); });
  rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return rep;
}

Report run_derived_suite(const VerifyOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  Report rep;
  rep.suite = "derived";
  Engine e{EngineConfig(opt.t, opt.series_order)};

  const auto& rels = derived_relations();
  rep.cases = run_cases_parallel(opt.jobs, (int)rels.size(),
                                 [&](int i) { return verify_identity(e, rels[i], opt); });

  int N = std::max(opt.series_order, 6);

  // rels11 coefficientwise: 2 curl_r = 2 sum_{i+j=r-1} (-1)^i dot^i x bubble_j
  //                         - (1 + (-1)^{r-1}) dot^{r-1}
  for (int r = 0; r <= N; ++r) {
    CaseResult c;
    c.id = "rels11.curl-expansion[r=" + std::to_string(r) + "]";
    c.params = "t=" + std::to_string(opt.t);
    Morphism lhs = Rational(2) * e.normalize(curl_word(r));
    Morphism rhs(1, 1);
    for (int i = 0; i + 1 <= r; ++i) {
      int j = r - 1 - i;
      Rational sign((i % 2 == 0) ? 2 : -2);
      rhs += sign * e.compose(e.normalize(strand_with_dots(i)), e.normalize(circle_right_of_strand(j)));
    }
    if (r >= 1) {
      long factor = 1 + ((r - 1) % 2 == 0 ? 1 : -1);
      if (factor != 0) rhs -= Rational(factor) * e.normalize(strand_with_dots(r - 1));
    }
    c.status = (lhs == rhs) ? "PASS" : "FAIL";
    if (c.status == "FAIL") c.witness = lhs.str() + "  !=  " + rhs.str();
    rep.cases.push_back(c);
  }

  // rels12: O(u) O(-u) = 1 with O_r the renormalized dotted circles.
  {
    // O_0 = 1, O_r = -2(-1)^t (free circle with r dots)
    auto obub = [&](int r) -> Morphism {
      if (r == 0) return Morphism::identity(0);
      return Rational(opt.t == 0 ? -2 : 2) * e.normalize(free_circle(r));
    };
    for (int r = 0; r <= N; ++r) {
      CaseResult c;
      c.id = "rels12.OO[r=" + std::to_string(r) + "]";
      c.params = "t=" + std::to_string(opt.t);
      Morphism acc(0, 0);
      for (int i = 0; i <= r; ++i) {
        int j = r - i;
        Rational sign((j % 2 == 0) ? 1 : -1);
        acc += sign * e.tensor(obub(i), obub(j));
      }
      Morphism expect = (r == 0) ? Morphism::identity(0) : Morphism::zero(0, 0);
      c.status = (acc == expect) ? "PASS" : "FAIL";
      if (c.status == "FAIL") c.witness = acc.str();
      rep.cases.push_back(c);
    }
  }

  // rels13 bubble slide: O_r * strand = sum_j a_j dot^j (strand * O_{r-j}).
  {
    auto obub_left = [&](int r) -> Morphism {
      if (r == 0) return Morphism::identity(1);  // O_0 = 1
      return Rational(opt.t == 0 ? -2 : 2) * e.normalize(circle_left_of_strand(r));
    };
    auto obub_right = [&](int r) -> Morphism {
      if (r == 0) return Morphism::identity(1);
      return Rational(opt.t == 0 ? -2 : 2) * e.normalize(circle_right_of_strand(r));
    };
    for (int r = 0; r <= N; ++r) {
      CaseResult c;
      c.id = "rels13.bubble-slide[r=" + std::to_string(r) + "]";
      c.params = "t=" + std::to_string(opt.t);
      Morphism lhs = obub_left(r);
      Morphism rhs(1, 1);
      for (int j = 0; j <= r; ++j) {
        Rational aj = (j == 0) ? Rational(1) : Rational(((j % 2 == 0) ? 4 : -4) * (long)j);
        rhs += aj * e.compose(e.normalize(strand_with_dots(j)), obub_right(r - j));
      }
      c.status = (lhs == rhs) ? "PASS" : "FAIL";
      if (c.status == "FAIL") c.witness = lhs.str() + "  !=  " + rhs.str();
      rep.cases.push_back(c);
    }
  }

  // Gamma-side restatement of q(u)q(-u)=1.
  for (int r = 1; r <= 12; ++r) {
    CaseResult c;
    c.id = "gamma.qq[r=" + std::to_string(r) + "]";
    SymPoly acc;
    for (int i = 0; i <= r; ++i) {
      Rational sign(((r - i) % 2 == 0) ? 1 : -1);
      acc += sign * gamma_normalize(SymPoly::generator(i) * SymPoly::generator(r - i));
    }
    c.status = acc.is_zero() ? "PASS" : "FAIL";
    if (c.status == "FAIL") c.witness = acc.str('q');
    rep.cases.push_back(c);
  }

  rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return rep;
}

}  // namespace nb
