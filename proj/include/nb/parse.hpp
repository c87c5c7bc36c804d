#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nb/engine.hpp"

namespace nb {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One parsed additive term: coefficient times a generator word.
struct ExprTerm {
  GammaElement coeff;
  DiagramWord word;
};

// Grammar (positions 1-based in the text):
//   expr  := ['-'] term (('+'|'-') term)*
//   term  := [rational ['*' gmono] '*'] word
//   word  := gen ('.' gen)*          -- '.' composes with the left factor on top
//   gen   := id(n) | dot(i) | x(i) | cup(i) | cap(i)
//   gmono := 'q' r ('*q' r)*
std::vector<ExprTerm> parse_expr(const std::string& text);

// Parse and normalize; all terms must share arities.
Morphism eval_expr(const Engine& e, const std::string& text);

}  // namespace nb
