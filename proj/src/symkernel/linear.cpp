#include "abducto/symkernel/linear.hpp"

#include <algorithm>
#include <set>

#include "abducto/symkernel/algebra.hpp"
#include "abducto/symkernel/error.hpp"

namespace abducto::sym {

LinearSystem LinearSystem::from_equations(std::vector<std::pair<Expr, Expr>> equations) {
    std::set<char> syms;
    for (const auto& [lhs, rhs] : equations) {
        for (char s : free_symbols(lhs)) syms.insert(s);
        for (char s : free_symbols(rhs)) syms.insert(s);
    }
    return LinearSystem{std::move(equations), std::vector<char>(syms.begin(), syms.end())};
}

std::map<char, Expr> solve_linear(const LinearSystem& system) {
    const std::size_t n = system.unknowns.size();
    if (system.equations.empty()) raise(KernelErrc::SingularSystem, "no equations");
    auto column_of = [&](char s) -> std::size_t {
        auto it = std::find(system.unknowns.begin(), system.unknowns.end(), s);
        return it == system.unknowns.end() ? n : static_cast<std::size_t>(it - system.unknowns.begin());
    };

    // Augmented rows: coefficients of each unknown, then the negated constant.
    std::vector<std::vector<Rational>> rows;
    for (const auto& [lhs, rhs] : system.equations) {
        const Expr zero_form = sub(lhs, rhs);
        std::vector<Rational> row(n + 1, Rational(0));
        std::span<const Expr> terms =
            zero_form.is_sum() ? zero_form.operands() : std::span<const Expr>(&zero_form, 1);
        for (const auto& t : terms) {
            auto [coeff, rest] = split_coefficient(t);
            if (rest.is_number()) {
                row[n] -= coeff * rest.number();
            } else if (rest.is_symbol() && column_of(rest.name()) < n) {
                row[column_of(rest.name())] += coeff;
            } else {
                raise(KernelErrc::NonLinear, "equation is not linear in the unknowns");
            }
        }
        rows.push_back(std::move(row));
    }

    std::size_t rank = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        const Rational lead = rows[rank][col];
        for (auto& v : rows[rank]) v /= lead;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            const Rational f = rows[r][col];
            for (std::size_t c = col; c <= n; ++c) rows[r][c] -= f * rows[rank][c];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (std::size_t r = rank; r < rows.size(); ++r) {
        if (rows[r][n] != 0) raise(KernelErrc::SingularSystem, "inconsistent system");
    }
    if (rank < n) raise(KernelErrc::SingularSystem, "system is under-determined");

    std::map<char, Expr> solution;
    for (std::size_t r = 0; r < rank; ++r) {
        solution.emplace(system.unknowns[pivot_col[r]], Expr::rational(rows[r][n]));
    }
    return solution;
}

}  // namespace abducto::sym
