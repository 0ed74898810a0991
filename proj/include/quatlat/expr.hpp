#pragma once

// Element expressions such as "(1 - i - j - k)/2" or
// "(1/2)*(c^14 + c^2 + 1) + (1/2)*sqrt2*(c^5 + c^4)*i".
//
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' ['-'] integer)?
//   atom   := integer | symbol | '(' expr ')' | '-' factor
//
// Symbols: c, i, j, k, sqrt2, sqrt5, d (when an embedding is declared) and
// any names bound in the context. U+2212 is accepted as a minus sign.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quatlat/quatalg.hpp"

namespace quatlat {

struct ExprContext {
  Algebra alg;
  std::optional<Quaternion> d;
  std::map<std::string, Quaternion> names;
};

// Throws ParseError (SyntaxError, UnknownSymbol, DivisionByZero) with spans.
Quaternion parse_element(std::string_view src, const ExprContext& ctx);
// Same, but the value must lie in the center.
FieldElem parse_scalar(std::string_view src, const ExprContext& ctx);
// Comma-separated list at the top level.
std::vector<Quaternion> parse_element_list(std::string_view src, const ExprContext& ctx);
// Splits at top-level commas; spans of the pieces are reported relative to src.
std::vector<std::string_view> split_top_level(std::string_view src);

}  // namespace quatlat
