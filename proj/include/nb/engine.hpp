#pragma once

#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "nb/morphism.hpp"

namespace nb {

struct EngineConfig {
  int t = 0;             // ring parameter, forced into {0,1}
  int series_order = 8;  // order for generating-function identities

  EngineConfig() = default;
  EngineConfig(int t_, int order = 8) : t(t_), series_order(order) {
    if (t_ != 0 && t_ != 1) throw std::invalid_argument("t must be 0 or 1");
  }
};

enum class SymmetryKind { R, T, D };

// Normalizer for nil-Brauer diagram words.  A single engine instance is safe
// for concurrent use; normal forms are memoized by canonical word encoding.
class Engine {
 public:
  explicit Engine(EngineConfig cfg) : cfg_(cfg) {}
  const EngineConfig& config() const { return cfg_; }

  Morphism normalize(const DiagramWord& w) const;
  Morphism compose(const Morphism& f, const Morphism& g) const;  // f on top of g
  Morphism tensor(const Morphism& f, const Morphism& g) const;   // f left of g
  Morphism gamma_act(const Morphism& f, const GammaElement& p) const;
  Morphism symmetry(const Morphism& f, SymmetryKind which) const;

  // Apply one generator slice on top of a normal form.
  Morphism act(const Slice& s, const Morphism& f) const;

  size_t cache_size() const;

 private:
  Morphism act_diagram(const Slice& s, const BasisDiagram& d) const;
  Morphism act_dot(int i, const BasisDiagram& d) const;
  Morphism act_cross(int i, const BasisDiagram& d) const;
  Morphism act_cup(int i, const BasisDiagram& d) const;
  Morphism act_cap(int i, const BasisDiagram& d) const;

  // cap(i) over a diagram with `pending` dots stacked at top position i+1
  // and `far` dots already walked to the far end of the strand at t_{i+1}.
  Morphism act_cap_pending(int i, const BasisDiagram& d, int pending, int far) const;

  // Transport `count` dots from a non-canonical strand end to the canonical
  // one, one at a time, with smoothing corrections.
  Morphism walk_far_dots(const BasisDiagram& d, int point, int count) const;

  // Dotted circle at top slot i (value already includes the side sign),
  // slid to the right edge across the remaining strands.
  Morphism slide_circle(int slot, int obub_index, const Rational& coef,
                        const Morphism& base) const;

  EngineConfig cfg_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<std::string, Morphism> word_cache_;
  mutable std::unordered_map<std::string, Morphism> act_cache_;
};

// T flips a word vertically (cups and caps swap); R mirrors horizontally.
DiagramWord word_T(const DiagramWord& w);
DiagramWord word_R(const DiagramWord& w);

// Graded rank of Hom(B^n, B^m) as a Laurent series in q, truncated at q^N:
// sum over matchings of q^{-2 crossings} / (1-q^2)^{(m+n)/2}.
// Returned as (power -> integer coefficient) for powers <= N.
std::map<int, long> graded_rank(int m, int n, int order);
std::string graded_rank_str(const std::map<int, long>& s);

// --- transport walk (shared with the oracle tests) ---

struct WalkOutcome {
  int sign = 1;         // sign of the principal term
  int end_point = -1;   // global point id where the dot lands
  // Correction words, each with its sign; the transported dot is consumed.
  std::vector<std::pair<int, DiagramWord>> corrections;
};

// Transport a virtual dot along the strand of w that touches the given
// boundary point (global id).  NB rules: sign flips at critical points,
// each crossing passed contributes the two smoothing corrections.
WalkOutcome walk_dot(const DiagramWord& w, int from_point);

}  // namespace nb
