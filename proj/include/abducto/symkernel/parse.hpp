#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "abducto/symkernel/expr.hpp"

namespace abducto::sym {

// Resolves a function application f(arg) met while parsing. Returning nullopt
// rejects the call.
using CallResolver = std::function<std::optional<Expr>(char name, const Expr& arg)>;

// Grammar (Python precedence): integers, decimals (read exactly), fractions via
// '/', single-letter symbols a-z, + - * / **, parentheses, unary minus.
// Call syntax "q(f)" is rejected. Throws KernelError(MalformedExpression) on
// syntax errors; arithmetic errors (division by zero, bad exponent) propagate
// with their own codes. The result is canonical.
Expr parse_expr(std::string_view text);

// Same grammar, but f(arg) is handed to the resolver.
Expr parse_expr(std::string_view text, const CallResolver& resolver);

}  // namespace abducto::sym
