#pragma once

#include <string>
#include <utility>
#include <vector>

#include "abducto/symkernel/expr.hpp"

namespace abducto::sym {

// Integer helpers. Inputs are exact; nothing here touches floating point.

// Non-negative; UndefinedForZero when both are zero.
Integer gcd(const Integer& a, const Integer& b);
// Non-negative; UndefinedForZero when either is zero.
Integer lcm(const Integer& a, const Integer& b);
// Python semantics: the remainder takes the sign of the divisor.
Integer mod(const Integer& a, const Integer& b);
Integer floordiv(const Integer& a, const Integer& b);
Integer factorial(const Integer& n);
Integer floor(const Rational& q);
Integer ceiling(const Rational& q);

// Rounds half away from zero to `places` decimals and prints the result with
// trailing fractional zeros removed: round_to(157/50, 1) == "3.1",
// round_to(5/2, 0) == "3", round_to(-1/200, 2) == "-0.01".
std::string round_to(const Rational& q, long places);

// Digits 0-9 then a-z, lowercase; negative numbers get a leading '-'.
std::string to_base(const Integer& n, int base);
// Accepts lowercase or uppercase digits and an optional leading '-'.
Integer from_base(const std::string& digits, int base);

// Sorts numeric expressions by value; NonNumeric for anything symbolic.
std::vector<Expr> sort_values(std::vector<Expr> xs, bool ascending);

// Prime factorization by trial division; NonPositive for n < 1,
// ResourceLimit past 10**12.
std::vector<std::pair<Integer, unsigned>> factorint(const Integer& n);
bool is_prime(const Integer& n);
std::vector<Integer> divisors(const Integer& n);

}  // namespace abducto::sym
