#pragma once

#include <map>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "nb/diagram.hpp"
#include "nb/gamma.hpp"

namespace nb::usl2 {

enum class Letter : int8_t { E = 0, F = 1 };
using UWord = std::vector<Letter>;

int wt(const UWord& w);
std::string uword_str(const UWord& w);
UWord parse_uword(const std::string& s);

// Oriented dotted matching between the letters of two words.  Point ids are
// global as in the unoriented case: bottom 0..n-1, then top n..n+m-1.
// Admissible: propagating strands join equal letters, cups and caps join
// different letters.  Dots sit at the canonical (smaller) endpoint.
struct UDiagram {
  UWord bottom, top;
  Matching matching;
  std::vector<int> dots;

  UDiagram() = default;
  UDiagram(UWord b, UWord t, Matching m, std::vector<int> d)
      : bottom(std::move(b)), top(std::move(t)), matching(std::move(m)), dots(std::move(d)) {}

  static UDiagram identity(const UWord& w);

  bool admissible() const;
  Letter letter_at(int point) const { return point < (int)bottom.size() ? bottom[point] : top[point - bottom.size()]; }
  int total_dots() const;
  std::string key() const;
  auto operator<=>(const UDiagram&) const = default;
};

// Degree of the reduced diagram at rightmost weight lambda (dots included).
int udiagram_degree(const UDiagram& d, int lambda);

// Truncated Lambda-linear combination.  valid_degree N means: the stored
// terms agree with the true morphism in every total degree <= N.
struct UMorphism {
  UWord bottom, top;
  int lambda = 0;
  int valid_degree = 0;
  std::map<UDiagram, LambdaElement> terms;

  UMorphism() = default;
  UMorphism(UWord b, UWord t, int lam, int valid)
      : bottom(std::move(b)), top(std::move(t)), lambda(lam), valid_degree(valid) {}

  static UMorphism zero(UWord b, UWord t, int lam, int valid) {
    return UMorphism(std::move(b), std::move(t), lam, valid);
  }
  static UMorphism identity(const UWord& w, int lam, int valid);

  bool is_zero() const { return terms.empty(); }
  void add(const UDiagram& d, const LambdaElement& c);  // truncates at valid_degree
  void add_raw(const UDiagram& d, const LambdaElement& c);

  UMorphism& operator+=(const UMorphism& o);
  UMorphism& operator-=(const UMorphism& o);
  friend UMorphism operator*(const Rational& c, UMorphism f) {
    for (auto& [d, v] : f.terms) v = c * v;
    return f;
  }
  friend UMorphism operator*(const LambdaElement& c, const UMorphism& f);

  std::string str() const;
};

// Truncated equality: both sides agree in every degree <= min(valid).
bool u_equal(const UMorphism& a, const UMorphism& b);

// Generator slices.  For cups the inserted letters need a flag:
// lcup inserts (E, F), rcup inserts (F, E).
struct USlice {
  SliceKind kind;
  int pos;
  bool lcup = false;
  auto operator<=>(const USlice&) const = default;
};

struct UDiagramWord {
  UWord bottom;
  int lambda = 0;
  std::vector<USlice> slices;
  std::string key() const;
};

// Top word and per-slice local degrees; throws on orientation mismatch.
UWord validate_uword(const UDiagramWord& w, int* total_degree = nullptr,
                     int* negative_slack = nullptr);

// Normalizer for the degree-truncated completion.
class UEngine {
 public:
  explicit UEngine(int cutoff) : N_(cutoff) {}
  int cutoff() const { return N_; }

  // Normal form of a generator word, valid at least to degree N.
  UMorphism normalize(const UDiagramWord& w) const;

  UMorphism act(const USlice& s, const UMorphism& f) const;
  UMorphism compose(const UMorphism& f, const UMorphism& g) const;  // f on top
  UMorphism tensor(const UMorphism& f, const UMorphism& g) const;   // f left of g

  // dot shift: dot -> dot + a, with the matching action on coefficients.
  UMorphism eta(const UMorphism& f, const Rational& a) const;

  // Genuine dotted bubble as a coefficient at the rightmost region:
  // clockwise with d dots at weight mu = (-1)^{d+1-mu} e_{d+1-mu},
  // counterclockwise = h_{mu+d+1}.
  static LambdaElement bubble_value(bool clockwise, int d, int mu);
  // Fake bubble via the determinant formula (0 <= k <= mu for ccw at mu,
  // 0 <= k <= -mu for cw); identified value equals h_k resp. (-1)^k e_k.
  static LambdaElement fake_bubble(bool clockwise, int k, int mu);

  // Slide a single Lambda generator (e_r if e_gen, else h_r) rightward from
  // the region left of top slot `slot` of each term, to the right edge.
  UMorphism slide_lambda_right(bool e_gen, int r, int slot, const UMorphism& base) const;

  struct ActKey;

 private:
  UMorphism act_diagram(const USlice& s, const UDiagram& d, int lambda, int valid) const;
  UMorphism act_dot(int i, const UDiagram& d, int lambda, int valid) const;
  UMorphism act_cross(int i, const UDiagram& d, int lambda, int valid) const;
  UMorphism act_cup(int i, bool lcup, const UDiagram& d, int lambda, int valid) const;
  UMorphism act_cap(int i, const UDiagram& d, int lambda, int valid) const;
  UMorphism act_cap_pending(int i, const UDiagram& d, int lambda, int valid, int pending,
                            int far) const;
  UMorphism act_cap_curl(int i, const UDiagram& d, int lambda, int valid) const;
  UMorphism walk_far_dots(const UDiagram& d, int point, int count, int lambda, int valid) const;
  UMorphism normalize_word_at(const UDiagramWord& w, int valid) const;

  int N_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<std::string, UMorphism> cache_;
};

// Reduced word realizing a diagram (layout only; dots appended canonically).
UDiagramWord u_word_from_basis(const UDiagram& d, int lambda);

// Weight of the region right of top slot `slot` (counting strands at the
// top boundary of diagram d with rightmost weight lambda).
int region_weight_at_top(const UDiagram& d, int slot, int lambda);

// eta_a on a Lambda coefficient sitting at rightmost weight lambda.
LambdaElement eta_lambda(const LambdaElement& c, const Rational& a, int lambda);

}  // namespace nb::usl2
