#pragma once

#include <string>

#include "abducto/symkernel/expr.hpp"

namespace abducto::sym {

// Renders a canonical expression as an answer string: "**" for powers,
// " + " / " - " between terms, unary minus attached, unit coefficients
// omitted, rationals as num/den and quotients as "2*x/3", "1/(x + 1)".
// Exact-match scoring compares these strings byte for byte.
std::string to_answer_string(const Expr& e);

}  // namespace abducto::sym
