#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "abducto/symkernel/expr.hpp"

namespace abducto::dsl {

using sym::Expr;

// Non-expression results: decimals from rounding, bases other than ten,
// factorization maps, truth values.
struct Text {
    std::string text;
};

struct ExprList {
    std::vector<Expr> items;
};

struct Equation {
    Expr lhs;
    Expr rhs;
};

struct EquationSet {
    std::vector<Equation> equations;
};

// f(param) = body
struct FunctionDef {
    char name = 'f';
    char param = 'x';
    Expr body;
};

using Value = std::variant<Expr, Text, ExprList, EquationSet, FunctionDef>;

// Answer-string rendering: exprs through to_answer_string, lists joined by
// ", ", equations as "lhs = rhs", definitions as "f(x) = body".
std::string render(const Value& v);

// Bindings made by define/solve and read back when later Pos operators parse
// their slots.
struct Env {
    std::array<std::optional<Expr>, 26> symbols;
    std::array<std::optional<FunctionDef>, 26> functions;

    bool empty() const noexcept;
    bool has_functions() const noexcept;
    const Expr* symbol(char c) const noexcept;
    const FunctionDef* function(char c) const noexcept;
    void bind(char c, Expr value) { symbols[c - 'a'] = std::move(value); }
    void bind(FunctionDef f) { functions[f.name - 'a'] = std::move(f); }
};

// Replaces every bound symbol in v by its value (a definition's parameter is
// left alone).
Value apply_env(const Value& v, const Env& env);

}  // namespace abducto::dsl
