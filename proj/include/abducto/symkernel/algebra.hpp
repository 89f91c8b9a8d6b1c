#pragma once

#include <set>
#include <span>
#include <utility>

#include "abducto/symkernel/expr.hpp"

namespace abducto::sym {

// Canonical form
// --------------
// * Sums and products are flat and fully expanded: products distribute over
//   sums, and positive integer powers of sums are multiplied out.
// * Numeric literals are folded into at most one literal per Sum/Product;
//   a Product's literal (its coefficient) comes first and is never 1.
// * Sum terms are ordered by total degree descending, then graded-lex on
//   symbol names (earlier letters with larger exponents first), so constants
//   come last: "-4*c**3 - 9".
// * Product factors after the coefficient are ordered by base: symbols
//   alphabetically, then sum bases (which only appear with negative exponents).
// * Powers have integer exponents other than 0 and 1, and a base that is a
//   symbol or a sum; numeric powers are evaluated.
//
// Every function below takes canonical inputs and returns a canonical result.

Expr canonicalize(const Expr& e);

Expr add(const Expr& a, const Expr& b);
Expr add_all(std::span<const Expr> terms);
Expr sub(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b);
Expr mul_all(std::span<const Expr> factors);
Expr neg(const Expr& a);
// Throws DivisionByZero when b is zero.
Expr div(const Expr& a, const Expr& b);
// Throws UnsupportedExponent unless n is an integer literal.
Expr pow(const Expr& base, const Expr& n);
Expr pow(const Expr& base, long n);

Expr substitute(const Expr& e, char sym, const Expr& value);
// order-fold derivative with respect to sym; order >= 1.
Expr diff(const Expr& e, char sym, long order = 1);

std::set<char> free_symbols(const Expr& e);
// Highest power of sym; UnsupportedExpression when e is not a polynomial in sym.
long degree(const Expr& e, char sym);

// Numerator / denominator of a literal, a monomial or a quotient of factors.
// Sums are not combined over a common denominator; they raise
// UnsupportedExpression.
Expr numer(const Expr& e);
Expr denom(const Expr& e);

// Constant-folds a symbol-free expression to a single literal.
Expr evaluate_arith(const Expr& e);

// Splits a canonical term into (numeric coefficient, coefficient-free rest).
// For a literal the rest is IntegerLit(1).
std::pair<Rational, Expr> split_coefficient(const Expr& term);

}  // namespace abducto::sym
