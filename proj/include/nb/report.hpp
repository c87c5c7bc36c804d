#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nb/engine.hpp"

namespace nb {

struct CaseResult {
  std::string id;
  std::string params;
  std::string status;  // PASS, FAIL or SKIP
  std::string witness;
};

struct Report {
  std::string suite;
  std::vector<CaseResult> cases;
  long elapsed_ms = 0;

  bool all_pass() const {
    for (const auto& c : cases)
      if (c.status == "FAIL") return false;
    return true;
  }
  std::string json() const;
  std::string text() const;
};

struct VerifyOptions {
  int t = 0;
  std::uint64_t seed = 0;
  int contexts = 50;
  int jobs = 1;
  int series_order = 6;
  int lambda_min = -3, lambda_max = 3;
  long shift_num = 1, shift_den = 1;  // the dot shift a
  int cutoff = 8;                     // truncation degree N
  std::string catalog_dir;            // where catalog data files live
};

// One defining/derived relation as a pair of expressions in the diagram
// grammar; {t} in the text is replaced by the configured parameter.
struct RelationCase {
  std::string id;
  std::string lhs;
  std::string rhs;
};

const std::vector<RelationCase>& nilbrauer_relations();
const std::vector<RelationCase>& derived_relations();

// PASS iff normalize(c1 . L . c2 * c3) equals the same for R over sampled
// contexts (identity context first, then `contexts` random ones of width
// <= 2 with <= 2 dots).  A failure records the smallest witness found.
CaseResult verify_identity(const Engine& e, const RelationCase& rc, const VerifyOptions& opt);

Report run_nilbrauer_suite(const VerifyOptions& opt);
Report run_derived_suite(const VerifyOptions& opt);

// Random composable context words, exposed for tests.
class ContextSampler {
 public:
  ContextSampler(std::uint64_t seed, int max_width, int max_dots)
      : state_(seed * 6364136223846793005ULL + 1442695040888963407ULL),
        max_width_(max_width),
        max_dots_(max_dots) {}
  std::uint64_t next();
  DiagramWord random_word(int n_start, int max_len);
  // A word with the prescribed top arity (by rejection).
  DiagramWord word_with_top(int m_target, int max_len);
  // A word with the prescribed bottom arity.
  DiagramWord word_with_bottom(int n_start, int max_len) { return random_word(n_start, max_len); }

 private:
  std::uint64_t state_;
  int max_width_;
  int max_dots_;
};

// Helper shared by suites and the CLI: run cases in parallel, keep order.
std::vector<CaseResult> run_cases_parallel(
    int jobs, int count, const std::function<CaseResult(int)>& one);

}  // namespace nb
