#pragma once

#include "stlmine/formula.hpp"

namespace stlmine {

// Text syntax:
//   formula  := or
//   or       := and ('|' and)*
//   and      := until ('&' until)*
//   until    := unary ('U' '[' num ',' num ']' until)?     (right associative)
//   unary    := '!' unary | 'F' '[' num ',' num ']' unary
//             | 'G' '[' num ',' num ']' unary | primary
//   primary  := 'true' | '(' ident relop num ')' | '(' or ')'
//   relop    := '>' | '>=' | '<=' | '<'      (>= is read as >, < as <=)
//   num      := floating point literal | '?' ident          (placeholder)
//
// 'true', 'F', 'G' and 'U' are reserved words.  Errors carry the 1-based
// character position where parsing failed.
Formula parse_formula(const std::string& text);
ParametricFormula parse_template(const std::string& text);

}  // namespace stlmine
