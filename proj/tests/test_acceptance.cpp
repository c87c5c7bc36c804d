// Acceptance suite: one line per criterion, PASS/FAIL, with timing.
// Criteria 1-7 exercise the nil-Brauer engine; 8-10 the truncated U(sl2)
// engine, the zeta_a lemma catalog and the Omega functor.

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "nb/catalog.hpp"
#include "nb/parse.hpp"
#include "nb/report.hpp"
#include "nb_oracle.hpp"

using namespace nb;

namespace {

int g_failures = 0;

void criterion(int index, const std::string& name, const std::function<bool(std::string&)>& run) {
  auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = run(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start)
                .count();
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << index << ": " << name << "  [" << ms
            << " ms]";
  if (!detail.empty()) std::cout << "  (" << detail << ")";
  std::cout << "\n" << std::flush;
  if (!ok) ++g_failures;
}

long double_factorial(int k) {
  long r = 1;
  for (int v = k; v > 1; v -= 2) r *= v;
  return r;
}

bool run_suite_pair(const std::string& which, std::string& detail, int contexts, int jobs) {
  for (int t : {0, 1}) {
    VerifyOptions opt;
    opt.t = t;
    opt.contexts = contexts;
    opt.jobs = jobs;
    Report rep = which == "nilbrauer" ? run_nilbrauer_suite(opt) : run_derived_suite(opt);
    if (!rep.all_pass()) {
      for (const auto& c : rep.cases)
        if (c.status == "FAIL") {
          detail = "t=" + std::to_string(t) + " " + c.id + ": " + c.witness;
          return false;
        }
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int jobs = 4;
  bool only_nb = false, only_u = false;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--nb")) only_nb = true;
    if (!std::strcmp(argv[i], "--usl2")) only_u = true;
    if (!std::strcmp(argv[i], "--jobs") && i + 1 < argc) jobs = std::atoi(argv[i + 1]);
  }

  if (!only_u) {
    criterion(1, "basis counts |D(m,n)| = (m+n-1)!!", [&](std::string& detail) {
      for (int n = 0; n <= 8; ++n)
        for (int m = 0; m <= 8 - n; ++m) {
          auto v = enumerate_matchings(m, n);
          long expect = ((m + n) % 2 == 0) ? double_factorial(m + n - 1) : 0;
          if ((long)v.size() != expect) {
            detail = "(" + std::to_string(m) + "," + std::to_string(n) + ")";
            return false;
          }
        }
      return enumerate_matchings(2, 2).size() == 3 && enumerate_matchings(3, 3).size() == 15 &&
             enumerate_matchings(4, 4).size() == 105;
    });

    criterion(2, "defining relations under random contexts (both t)", [&](std::string& detail) {
      return run_suite_pair("nilbrauer", detail, 50, jobs);
    });

    criterion(3, "derived relations rels5-rels7, rels11-rels13 and the q(u)q(-u) check",
              [&](std::string& detail) { return run_suite_pair("derived", detail, 10, jobs); });

    criterion(4, "structural laws and idempotence on basis diagrams", [&](std::string& detail) {
      Engine e0{EngineConfig(0)}, e1{EngineConfig(1)};
      for (int n = 0; n <= 4; ++n)
        for (int m = 0; m <= 8 - n; ++m) {
          if ((n + m) % 2 != 0) continue;
          for (const auto& M : enumerate_matchings(m, n)) {
            for (int pat = 0; pat < 3; ++pat) {
              BasisDiagram d(M);
              for (size_t k = 0; k < d.dots.size(); ++k)
                d.dots[k] = pat == 0 ? 0 : (int)((k + pat) % 3 == 0 ? 2 : (k + pat) % 2);
              DiagramWord w = word_from_basis(d);
              if (!(e0.normalize(w) == Morphism::single(d)) ||
                  !(e1.normalize(w) == Morphism::single(d))) {
                detail = "idempotence failed at " + d.key();
                return false;
              }
              if (!e0.normalize(w).all_same_degree_as(w.degree())) {
                detail = "degree inhomogeneity at " + d.key();
                return false;
              }
            }
          }
        }
      ContextSampler gen(2024, 4, 2);
      Engine& e = e0;
      for (int trial = 0; trial < 110; ++trial) {
        DiagramWord wa = gen.random_word((int)(gen.next() % 3), 3);
        int ma = validate_word(wa);
        DiagramWord wb = gen.random_word(ma, 3);
        int mb = validate_word(wb);
        DiagramWord wc = gen.random_word(mb, 3);
        Morphism A = e.normalize(wa), B = e.normalize(wb), C = e.normalize(wc);
        if (!(e.compose(e.compose(C, B), A) == e.compose(C, e.compose(B, A)))) {
          detail = "associativity failed";
          return false;
        }
        DiagramWord wd = gen.random_word((int)(gen.next() % 2), 3);
        int md = validate_word(wd);
        DiagramWord we = gen.random_word(md, 2);
        Morphism D = e.normalize(wd), E = e.normalize(we);
        if (!(e.tensor(e.compose(E, D), e.compose(B, A)) ==
              e.compose(e.tensor(E, B), e.tensor(D, A)))) {
          detail = "interchange failed";
          return false;
        }
        if (!(e.compose(Morphism::identity(A.m), A) == A) ||
            !(e.compose(A, Morphism::identity(A.n)) == A)) {
          detail = "unit law failed";
          return false;
        }
        if (!A.all_same_degree_as(wa.degree())) {
          detail = "degree homogeneity failed";
          return false;
        }
      }
      return true;
    });

    criterion(5, "symmetries R, T, D: involutions, commutation, relation preservation",
              [&](std::string& detail) {
      for (int t : {0, 1}) {
        Engine e{EngineConfig(t)};
        ContextSampler gen(77, 4, 2);
        for (int trial = 0; trial < 40; ++trial) {
          DiagramWord w = gen.random_word((int)(gen.next() % 3), 4);
          Morphism f = e.normalize(w);
          Morphism Tf = e.symmetry(f, SymmetryKind::T);
          Morphism Rf = e.symmetry(f, SymmetryKind::R);
          if (!(e.symmetry(Tf, SymmetryKind::T) == f) || !(e.symmetry(Rf, SymmetryKind::R) == f)) {
            detail = "involution failed";
            return false;
          }
          if (!(e.symmetry(Rf, SymmetryKind::T) == e.symmetry(Tf, SymmetryKind::R)) ||
              !(e.symmetry(f, SymmetryKind::D) == e.symmetry(Tf, SymmetryKind::R))) {
            detail = "R T commutation failed";
            return false;
          }
        }
        ContextSampler gen2(99, 4, 2);
        for (int trial = 0; trial < 25; ++trial) {
          DiagramWord wa = gen2.random_word((int)(gen2.next() % 3), 3);
          int ma = validate_word(wa);
          DiagramWord wb = gen2.random_word(ma, 3);
          Morphism A = e.normalize(wa), B = e.normalize(wb);
          if (!(e.symmetry(e.compose(B, A), SymmetryKind::T) ==
                e.compose(e.symmetry(A, SymmetryKind::T), e.symmetry(B, SymmetryKind::T)))) {
            detail = "T anti-homomorphism failed";
            return false;
          }
          if (!(e.symmetry(e.tensor(A, B), SymmetryKind::R) ==
                e.tensor(e.symmetry(B, SymmetryKind::R), e.symmetry(A, SymmetryKind::R)))) {
            detail = "R tensor reversal failed";
            return false;
          }
        }
        for (const auto& rc : nilbrauer_relations()) {
          std::string lhs = rc.lhs, rhs = rc.rhs;
          for (size_t pp = lhs.find("{t}"); pp != std::string::npos; pp = lhs.find("{t}"))
            lhs = lhs.substr(0, pp) + std::to_string(t) + lhs.substr(pp + 3);
          for (size_t pp = rhs.find("{t}"); pp != std::string::npos; pp = rhs.find("{t}"))
            rhs = rhs.substr(0, pp) + std::to_string(t) + rhs.substr(pp + 3);
          Morphism L = eval_expr(e, lhs), R = eval_expr(e, rhs);
          for (auto which : {SymmetryKind::R, SymmetryKind::T}) {
            if (!(e.symmetry(L, which) == e.symmetry(R, which))) {
              detail = rc.id + " not preserved";
              return false;
            }
          }
        }
      }
      return true;
    });

    criterion(6, "oracle equivalence on all small words (<=3 crossings, <=2 dots, n<=3)",
              [&](std::string& detail) {
      long count = 0, tested = 0;
      bool ok = true;
      std::string bad;
      Engine e0{EngineConfig(0)}, e1{EngineConfig(1)};
      std::function<void(DiagramWord&, int, int, int, int)> rec =
          [&](DiagramWord& w, int width, int crossings, int dots, int left) {
            if (!ok) return;
            if (!w.slices.empty()) {
              ++count;
              ++tested;
              if (!oracle::oracle_agrees(e0, w) || !oracle::oracle_agrees(e1, w)) {
                ok = false;
                bad = w.key();
                return;
              }
            }
            if (left == 0) return;
            if (width > 0 && dots < 2)
              for (int p = 0; p < width; ++p) {
                w.dot(p);
                rec(w, width, crossings, dots + 1, left - 1);
                w.slices.pop_back();
              }
            if (width > 1 && crossings < 3)
              for (int p = 0; p + 1 < width; ++p) {
                w.cross(p);
                rec(w, width, crossings + 1, dots, left - 1);
                w.slices.pop_back();
              }
            if (width + 2 <= 5)
              for (int p = 0; p <= width; ++p) {
                w.cup(p);
                rec(w, width + 2, crossings, dots, left - 1);
                w.slices.pop_back();
              }
            if (width > 1)
              for (int p = 0; p + 1 < width; ++p) {
                w.cap(p);
                rec(w, width - 2, crossings, dots, left - 1);
                w.slices.pop_back();
              }
          };
      for (int n = 0; n <= 3; ++n) {
        DiagramWord w(n);
        rec(w, n, 0, 0, 5);
      }
      if (!ok) detail = "disagreement on " + bad;
      else detail = std::to_string(tested) + " of " + std::to_string(count) + " words cross-checked";
      return ok;
    });

    criterion(7, "gamma_t injectivity at desk scale (degree <= 12)", [&](std::string& detail) {
      for (int t : {0, 1}) {
        Engine e{EngineConfig(t)};
        std::vector<Monomial> monos;
        std::function<void(int, int, Monomial&)> gen = [&](int minr, int degleft, Monomial& cur) {
          monos.push_back(cur);
          for (int r = minr; r <= 11 && 2 * r <= degleft; r += 2) {
            cur.push_back(r);
            gen(r, degleft - 2 * r, cur);
            cur.pop_back();
          }
        };
        Monomial cur;
        gen(1, 12, cur);
        std::set<std::string> images;
        for (const auto& mo : monos) {
          Morphism img = Morphism::identity(0);
          for (int r : mo) {
            DiagramWord circ(0);
            circ.cup(0);
            for (int k = 0; k < r; ++k) circ.dot(1);
            circ.cap(0);
            img = Rational(t == 0 ? -2 : 2) * e.tensor(img, e.normalize(circ));
          }
          if (img.is_zero()) {
            detail = "image vanished";
            return false;
          }
          std::ostringstream key;
          for (const auto& [d, c] : img.terms) key << d.key() << "|" << c.str('q') << ";";
          if (!images.insert(key.str()).second) {
            detail = "collision between distinct monomial images";
            return false;
          }
        }
        if (images.size() != monos.size()) return false;
      }
      return true;
    });
  }

  if (!only_nb) {
    criterion(8, "U(sl2): KMrels1-KMrels5, Rouquier inverse, infinite Grassmannian",
              [&](std::string& detail) {
      VerifyOptions opt;
      opt.cutoff = 8;
      opt.jobs = jobs;
      Report rep = run_usl2_suite(opt);
      for (const auto& c : rep.cases)
        if (c.status == "FAIL") {
          detail = c.id + ": " + c.witness;
          return false;
        }
      return !rep.cases.empty();
    });

    criterion(9, "zeta_a lemma catalog at a=1, |lambda|<=3, N=8", [&](std::string& detail) {
      VerifyOptions opt;
      opt.cutoff = 8;
      opt.jobs = jobs;
      opt.catalog_dir = CATALOG_DIR;
      Report rep = run_lemmas_suite(opt);
      int skips = 0;
      for (const auto& c : rep.cases) {
        if (c.status == "FAIL") {
          detail = c.id + ": " + c.witness;
          return false;
        }
        if (c.status == "SKIP") ++skips;
      }
      detail = std::to_string(rep.cases.size()) + " cases, " + std::to_string(skips) +
               " hypothesis-gated skips";
      return !rep.cases.empty();
    });

    criterion(10, "Omega_t maps the defining relations to truncated-equal matrices; magic formula",
              [&](std::string& detail) {
      VerifyOptions opt;
      opt.cutoff = 8;
      opt.jobs = jobs;
      Report rep = run_omega_suite(opt);
      for (const auto& c : rep.cases)
        if (c.status == "FAIL") {
          detail = c.id + ": " + c.witness;
          return false;
        }
      return !rep.cases.empty();
    });
  }

  std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT") << "\n";
  return g_failures == 0 ? 0 : 1;
}
