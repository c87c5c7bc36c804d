#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "nb/cache.hpp"
#include "nb/catalog.hpp"
#include "nb/parse.hpp"
#include "nb/report.hpp"

using namespace nb;

namespace {

int run_normalize(const std::string& expr, int t, bool as_json, const std::string& cache_dir,
                  bool no_cache) {
  std::string key = "normalize|t=" + std::to_string(t) + "|" + expr;
  FileCache cache(cache_dir);
  if (!no_cache) {
    if (auto hit = cache.get(key)) {
      std::cout << *hit << "\n";
      return 0;
    }
  }
  Engine e{EngineConfig(t)};
  Morphism f = eval_expr(e, expr);
  std::string out = as_json ? f.json(t) : f.str();
  if (!no_cache) cache.put(key, out);
  std::cout << out << "\n";
  return 0;
}

int run_basis(int m, int n, bool degrees) {
  auto v = enumerate_matchings(m, n);
  for (const auto& M : v) {
    std::cout << BasisDiagram(M).json() << "  crossings=" << crossing_number(M);
    if (degrees) std::cout << "  degree=" << BasisDiagram(M).degree();
    std::cout << "\n";
  }
  std::cerr << v.size() << " matchings\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nil-Brauer diagram engine"};
  app.require_subcommand(1);

  // --- normalize ---
  std::string expr;
  int t = 0;
  bool as_json = false;
  bool no_cache = false;
  std::string cache_dir;
  auto* cn = app.add_subcommand("normalize", "normalize a diagram expression");
  cn->add_option("expr", expr, "expression in the diagram grammar")->required();
  cn->add_option("--t", t, "parameter t (0 or 1)")->check(CLI::Range(0, 1));
  cn->add_flag("--json", as_json, "emit morphism JSON");
  cn->add_flag("--no-cache", no_cache, "bypass the result cache");
  cn->add_option("--cache-dir", cache_dir, "cache directory (default NB_CACHE_DIR or .nb-cache)");

  // --- basis ---
  int bm = 0, bn = 0;
  bool degrees = false;
  auto* cb = app.add_subcommand("basis", "list the dot-free basis diagrams of Hom(B^n, B^m)");
  cb->add_option("m", bm, "top arity")->required();
  cb->add_option("n", bn, "bottom arity")->required();
  cb->add_flag("--degrees", degrees, "also print degrees");

  // --- grank ---
  int gm = 0, gn = 0, gorder = 8;
  auto* cg = app.add_subcommand("grank", "graded rank of Hom(B^n, B^m)");
  cg->add_option("m", gm, "top arity")->required();
  cg->add_option("n", gn, "bottom arity")->required();
  cg->add_option("--order", gorder, "truncate at q^order");

  // --- verify ---
  std::string suite;
  VerifyOptions vo;
  std::string json_out;
  std::string shift_str = "1";
  auto* cv = app.add_subcommand("verify", "run a relation verification suite");
  cv->add_option("--suite", suite, "nilbrauer | derived | usl2 | omega | lemmas")->required();
  cv->add_option("--t", vo.t, "parameter t (0 or 1)")->check(CLI::Range(0, 1));
  cv->add_option("--seed", vo.seed, "random seed (default 0)");
  cv->add_option("--contexts", vo.contexts, "random contexts per defining relation");
  cv->add_option("--jobs", vo.jobs, "parallel workers");
  cv->add_option("--series-order", vo.series_order, "order for series identities");
  cv->add_option("--lambda-min", vo.lambda_min, "smallest weight");
  cv->add_option("--lambda-max", vo.lambda_max, "largest weight");
  cv->add_option("--shift", shift_str, "dot shift a (nonzero rational)");
  cv->add_option("--cutoff", vo.cutoff, "truncation degree N");
  cv->add_option("--catalog", vo.catalog_dir, "catalog directory (default: ./catalog)");
  cv->add_option("--json", json_out, "write the report JSON to this file ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cn->parsed()) return run_normalize(expr, t, as_json, cache_dir, no_cache);
    if (cb->parsed()) return run_basis(bm, bn, degrees);
    if (cg->parsed()) {
      std::cout << graded_rank_str(graded_rank(gm, gn, gorder)) << "\n";
      return 0;
    }
    if (cv->parsed()) {
      {
        auto slash = shift_str.find('/');
        vo.shift_num = std::stol(shift_str.substr(0, slash));
        vo.shift_den = slash == std::string::npos ? 1 : std::stol(shift_str.substr(slash + 1));
        if (vo.shift_num == 0) throw std::invalid_argument("--shift must be nonzero");
      }
      Report rep;
      if (suite == "nilbrauer") rep = run_nilbrauer_suite(vo);
      else if (suite == "derived") rep = run_derived_suite(vo);
      else if (suite == "usl2") rep = run_usl2_suite(vo);
      else if (suite == "omega") rep = run_omega_suite(vo);
      else if (suite == "lemmas") rep = run_lemmas_suite(vo);
      else {
        std::cerr << "unknown suite: " << suite << "\n";
        return 2;
      }
      std::cout << rep.text();
      std::cerr << rep.cases.size() << " cases, " << rep.elapsed_ms << " ms\n";
      if (!json_out.empty()) {
        if (json_out == "-") {
          std::cout << rep.json() << "\n";
        } else {
          std::ofstream out(json_out, std::ios::trunc);
          out << rep.json() << "\n";
        }
      }
      return rep.all_pass() ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const WordError& e) {
    std::cerr << "word error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
