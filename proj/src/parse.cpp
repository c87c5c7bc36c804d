#include "nb/parse.hpp"

#include <cctype>
#include <sstream>

namespace nb {

namespace {

struct Lexer {
  const std::string& s;
  size_t i = 0;
  explicit Lexer(const std::string& text) : s(text) {}

  void skip_ws() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      std::ostringstream os;
      os << "expected '" << c << "' at offset " << i;
      throw ParseError(os.str());
    }
  }
  bool accept_word(const char* w) {
    skip_ws();
    size_t j = i, k = 0;
    while (w[k] && j < s.size() && s[j] == w[k]) ++j, ++k;
    if (w[k]) return false;
    i = j;
    return true;
  }
  long integer() {
    skip_ws();
    size_t start = i;
    while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
    if (i == start) throw ParseError("expected an integer at offset " + std::to_string(start));
    return std::stol(s.substr(start, i - start));
  }
};

struct GenTok {
  enum Kind { Id, Dot, Cross, Cup, Cap } kind;
  long arg;
};

GenTok parse_gen(Lexer& lx) {
  GenTok g{};
  if (lx.accept_word("id(")) g.kind = GenTok::Id;
  else if (lx.accept_word("dot(")) g.kind = GenTok::Dot;
  else if (lx.accept_word("x(")) g.kind = GenTok::Cross;
  else if (lx.accept_word("cup(")) g.kind = GenTok::Cup;
  else if (lx.accept_word("cap(")) g.kind = GenTok::Cap;
  else throw ParseError("expected a generator at offset " + std::to_string(lx.i));
  g.arg = lx.integer();
  lx.expect(')');
  if (g.kind != GenTok::Id && g.arg < 1) throw ParseError("positions are 1-based");
  if (g.kind == GenTok::Id && g.arg < 0) throw ParseError("id arity must be >= 0");
  return g;
}

// Build a DiagramWord from the top-first generator list, inferring the
// minimal bottom arity consistent with every slice.
DiagramWord assemble(const std::vector<GenTok>& gens_top_first) {
  std::vector<GenTok> gens(gens_top_first.rbegin(), gens_top_first.rend());
  // constraints on the starting width n: n + delta >= minw (or == for id)
  long n_lower = 0;
  long delta = 0;
  bool pinned = false;
  long pin_val = 0;
  for (const auto& g : gens) {
    long need = 0;
    switch (g.kind) {
      case GenTok::Id:
        if (pinned && pin_val != g.arg - delta)
          throw ParseError("inconsistent id(...) widths in word");
        pinned = true;
        pin_val = g.arg - delta;
        need = g.arg;
        break;
      case GenTok::Dot: need = g.arg; break;
      case GenTok::Cross: need = g.arg + 1; break;
      case GenTok::Cup: need = g.arg - 1; break;
      case GenTok::Cap: need = g.arg + 1; break;
    }
    n_lower = std::max(n_lower, need - delta);
    if (g.kind == GenTok::Cup) delta += 2;
    if (g.kind == GenTok::Cap) delta -= 2;
    // widths can never go negative
    n_lower = std::max(n_lower, -delta);
  }
  long n = pinned ? pin_val : n_lower;
  if (pinned && pin_val < n_lower)
    throw ParseError("id(...) width too small for the surrounding word");
  DiagramWord w((int)n);
  for (const auto& g : gens) {
    switch (g.kind) {
      case GenTok::Id: break;
      case GenTok::Dot: w.dot((int)g.arg - 1); break;
      case GenTok::Cross: w.cross((int)g.arg - 1); break;
      case GenTok::Cup: w.cup((int)g.arg - 1); break;
      case GenTok::Cap: w.cap((int)g.arg - 1); break;
    }
  }
  validate_word(w);
  return w;
}

ExprTerm parse_term(Lexer& lx) {
  ExprTerm t;
  t.coeff = GammaElement(Rational(1));
  // optional rational [* gmono] *
  if (std::isdigit((unsigned char)lx.peek())) {
    long num = lx.integer();
    long den = 1;
    if (lx.accept('/')) den = lx.integer();
    Rational c(num, den);
    GammaElement mono(c);
    lx.expect('*');
    while (lx.peek() == 'q') {
      ++lx.i;
      long r = lx.integer();
      mono = mono * GammaElement::generator((int)r);
      lx.expect('*');
    }
    t.coeff = gamma_normalize(mono);
  }
  std::vector<GenTok> gens;
  gens.push_back(parse_gen(lx));
  while (lx.accept('.')) gens.push_back(parse_gen(lx));
  t.word = assemble(gens);
  return t;
}

}  // namespace

std::vector<ExprTerm> parse_expr(const std::string& text) {
  Lexer lx(text);
  std::vector<ExprTerm> out;
  bool neg = lx.accept('-');
  while (true) {
    ExprTerm t = parse_term(lx);
    if (neg) t.coeff = Rational(-1) * t.coeff;
    out.push_back(std::move(t));
    if (lx.accept('+')) neg = false;
    else if (lx.accept('-')) neg = true;
    else break;
  }
  if (!lx.eof()) throw ParseError("trailing input at offset " + std::to_string(lx.i));
  return out;
}

Morphism eval_expr(const Engine& e, const std::string& text) {
  auto terms = parse_expr(text);
  if (terms.empty()) throw ParseError("empty expression");
  int n = terms[0].word.n;
  int m = validate_word(terms[0].word);
  Morphism out(n, m);
  for (const auto& t : terms) {
    if (t.word.n != n || validate_word(t.word) != m)
      throw ParseError("terms with mismatched arities in one expression");
    out += t.coeff * e.normalize(t.word);
  }
  return out;
}

}  // namespace nb
