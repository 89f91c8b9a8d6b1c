#pragma once

#include <map>
#include <utility>
#include <vector>

#include "abducto/symkernel/expr.hpp"

namespace abducto::sym {

struct LinearSystem {
    std::vector<std::pair<Expr, Expr>> equations;  // lhs = rhs
    std::vector<char> unknowns;                    // ascending, no duplicates

    // Unknowns are all free symbols of the equations.
    static LinearSystem from_equations(std::vector<std::pair<Expr, Expr>> equations);
};

// Gaussian elimination over the rationals. Throws NonLinear when an equation
// is not affine in the unknowns and SingularSystem when there is no unique
// solution (inconsistent or under-determined).
std::map<char, Expr> solve_linear(const LinearSystem& system);

}  // namespace abducto::sym
