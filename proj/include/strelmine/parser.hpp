#pragma once

#include <string_view>

#include "strelmine/formula.hpp"

namespace strelmine {

struct ParseOptions {
  // Permit `$name` parameter holes in thresholds and interval endpoints
  // (used by template skeletons).
  bool allow_holes = false;
};

// Grammar (precedence from loosest to tightest: | , & , U/R , prefix ops):
//   phi    := 'true' | ident cmp number | '!' phi | phi '&' phi | phi '|' phi
//           | phi 'U' ival phi | 'F' ival phi | 'G' ival phi | phi 'R' ival phi
//           | 'E' ival phi | 'somewhere' ival phi | 'everywhere' ival phi
//           | 'surround' ival '(' phi ',' phi ')' | '(' phi ')'
//   ival   := '[' scalar ',' (scalar | 'inf') ']'
//   cmp    := '>' | '>=' | '<' | '<='
// U and R associate to the left. Time intervals (U, F, G) must be
// non-singular with a finite upper bound; distance intervals may be
// singular and may end at inf. Throws syntax_error with the offending
// offset.
FormulaPtr parse_formula(std::string_view text, ParseOptions options = {});

}  // namespace strelmine
