#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nb {

// Perfect matching on the boundary of an (m, n) rectangle.  Points carry
// global ids: bottom 0..n-1 left to right, then top n..n+m-1 left to right.
struct Matching {
  int n = 0;  // bottom arity
  int m = 0;  // top arity
  std::vector<std::pair<int, int>> pairs;  // first < second, sorted by first

  static Matching identity(int n);

  bool is_top(int p) const { return p >= n; }
  int partner(int p) const;
  int strand_of(int p) const;  // index into pairs
  void canonicalize();         // sort pair entries and the pair list
  void validate() const;

  // Position in the circular order: bottom left-to-right, then top
  // right-to-left.  Two chords cross in a reduced diagram iff their
  // endpoints interleave in this order.
  int circpos(int p) const;

  std::string key() const;
  auto operator<=>(const Matching&) const = default;
};

bool strands_interleave(const Matching& M, int si, int sj);
int crossing_number(const Matching& M);

// All matchings with the given arities, ordered lexicographically by the
// partner of the lowest unmatched point, recursively.  Empty unless
// m = n (mod 2); count is (m+n-1)!! otherwise.
std::vector<Matching> enumerate_matchings(int m, int n);

// Dotted matching: dot multiplicities aligned with the sorted pair list.
// Each strand's dots sit at the canonical position, adjacent to the
// endpoint that comes first in the order b0 < ... < b_{n-1} < t0 < ... .
struct BasisDiagram {
  Matching matching;
  std::vector<int> dots;

  BasisDiagram() = default;
  explicit BasisDiagram(Matching m) : matching(std::move(m)), dots(matching.pairs.size(), 0) {}
  BasisDiagram(Matching m, std::vector<int> d) : matching(std::move(m)), dots(std::move(d)) {}

  int total_dots() const;
  int degree() const;  // 2 * dots - 2 * crossings
  std::string key() const;
  std::string json() const;
  auto operator<=>(const BasisDiagram&) const = default;
};

// --- Generator words -------------------------------------------------------

enum class SliceKind : uint8_t { Dot, Cross, Cup, Cap };

struct Slice {
  SliceKind kind;
  int pos;  // 0-based strand position
  auto operator<=>(const Slice&) const = default;
};

// Vertical stack of generator slices, listed bottom to top.
struct DiagramWord {
  int n = 0;
  std::vector<Slice> slices;

  DiagramWord() = default;
  explicit DiagramWord(int n_) : n(n_) {}

  DiagramWord& dot(int pos) { slices.push_back({SliceKind::Dot, pos}); return *this; }
  DiagramWord& cross(int pos) { slices.push_back({SliceKind::Cross, pos}); return *this; }
  DiagramWord& cup(int pos) { slices.push_back({SliceKind::Cup, pos}); return *this; }
  DiagramWord& cap(int pos) { slices.push_back({SliceKind::Cap, pos}); return *this; }

  int crossings() const;
  int total_dots() const;
  int degree() const;  // sum of slice degrees: dot +2, crossing -2
  std::string key() const;
  auto operator<=>(const DiagramWord&) const = default;
};

struct WordError : std::runtime_error {
  enum Kind { PositionOutOfRange, WidthMismatch };
  Kind kind;
  int slice_index;
  WordError(Kind k, int idx, const std::string& msg)
      : std::runtime_error(msg), kind(k), slice_index(idx) {}
};

// Checks width chaining; returns the top arity m.
int validate_word(const DiagramWord& w);

// Stack v on top of u (u first, then v); widths must chain.
DiagramWord stack_words(const DiagramWord& bottom, const DiagramWord& top);
// Side-by-side tensor product, left * right.
DiagramWord tensor_words(const DiagramWord& left, const DiagramWord& right);

// Reduced word realizing the diagram: crossing count equals
// crossing_number, one critical point per cup/cap, dots at canonical spots.
DiagramWord word_from_basis(const BasisDiagram& d);

}  // namespace nb
