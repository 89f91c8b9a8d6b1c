// Kernel bindings for every registry operator.

#include <algorithm>
#include <map>

#include "abducto/dsl/executor.hpp"
#include "abducto/dsl/registry.hpp"
#include "abducto/symkernel/algebra.hpp"
#include "abducto/symkernel/error.hpp"
#include "abducto/symkernel/linear.hpp"
#include "abducto/symkernel/numbers.hpp"
#include "ops_table.hpp"

namespace abducto::dsl {

using sym::Integer;
using sym::KernelErrc;
using sym::Rational;

namespace {

constexpr long kMaxDiffOrder = 64;

[[noreturn]] void mismatch() { throw ExecFailure{ExecErrc::TypeMismatch}; }

const Expr& expr(const Value& v) {
    const Expr* e = std::get_if<Expr>(&v);
    if (!e) mismatch();
    return *e;
}

const Rational& number(const Value& v) {
    const Expr& e = expr(v);
    if (!e.is_number()) sym::raise(KernelErrc::NonNumeric);
    return e.number();
}

Integer integer(const Value& v) {
    const Expr& e = expr(v);
    if (!e.is_integer()) sym::raise(KernelErrc::NonNumeric);
    return e.number().get_num();
}

long small_integer(const Value& v, long lo, long hi) {
    const Integer n = integer(v);
    if (n < lo || n > hi) sym::raise(KernelErrc::ResourceLimit);
    return n.get_si();
}

char symbol(const Value& v) {
    const Expr& e = expr(v);
    if (!e.is_symbol()) mismatch();
    return e.name();
}

// The only free symbol, or 0 for a constant.
char sole_symbol(const Expr& e) {
    const auto syms = sym::free_symbols(e);
    if (syms.size() > 1) sym::raise(KernelErrc::UnsupportedExpression, "more than one variable");
    return syms.empty() ? 0 : *syms.begin();
}

std::vector<Expr> flatten(std::span<const Value> args) {
    std::vector<Expr> out;
    for (const auto& a : args) {
        if (const auto* l = std::get_if<ExprList>(&a)) {
            out.insert(out.end(), l->items.begin(), l->items.end());
        } else {
            out.push_back(expr(a));
        }
    }
    return out;
}

Expr integer_expr(const Integer& n) { return Expr::integer(n); }

Expr abs_expr(const Expr& e) {
    if (!e.is_number()) sym::raise(KernelErrc::UnsupportedExpression, "abs of a symbolic expression");
    return Expr::rational(abs(e.number()));
}

Value op_add(std::span<const Value> a, Env&) {
    if (a.size() == 2) return sym::add(expr(a[0]), expr(a[1]));
    const Expr xs[] = {expr(a[0]), expr(a[1]), expr(a[2])};
    return sym::add_all(xs);
}
Value op_sub(std::span<const Value> a, Env&) { return sym::sub(expr(a[0]), expr(a[1])); }
Value op_mul(std::span<const Value> a, Env&) {
    if (a.size() == 2) return sym::mul(expr(a[0]), expr(a[1]));
    const Expr xs[] = {expr(a[0]), expr(a[1]), expr(a[2])};
    return sym::mul_all(xs);
}
Value op_div(std::span<const Value> a, Env&) { return sym::div(expr(a[0]), expr(a[1])); }
Value op_pow(std::span<const Value> a, Env&) { return sym::pow(expr(a[0]), expr(a[1])); }
Value op_neg(std::span<const Value> a, Env&) { return sym::neg(expr(a[0])); }
Value op_abs(std::span<const Value> a, Env&) { return abs_expr(expr(a[0])); }
Value op_expand(std::span<const Value> a, Env&) { return expr(a[0]); }

Value op_evaluate(std::span<const Value> a, Env&) {
    const Expr& e = expr(a[0]);
    if (a.size() == 1) return sym::evaluate_arith(e);
    const char s = sole_symbol(e);
    if (s == 0) return sym::evaluate_arith(e);
    return sym::substitute(e, s, expr(a[1]));
}

Value op_subs(std::span<const Value> a, Env&) { return sym::substitute(expr(a[0]), symbol(a[1]), expr(a[2])); }

Value op_diff(std::span<const Value> a, Env&) {
    const Expr& e = expr(a[0]);
    char s = 0;
    long order = 1;
    bool have_order = false;
    for (std::size_t i = 1; i < a.size(); ++i) {
        const Expr& x = expr(a[i]);
        if (x.is_symbol() && s == 0) {
            s = x.name();
        } else if (x.is_integer() && !have_order) {
            order = small_integer(a[i], 1, kMaxDiffOrder);
            have_order = true;
        } else {
            mismatch();
        }
    }
    if (s == 0) s = sole_symbol(e);
    if (s == 0) return Expr::integer(0);
    return sym::diff(e, s, order);
}

Value op_degree(std::span<const Value> a, Env&) {
    const Expr& e = expr(a[0]);
    const char s = a.size() == 2 ? symbol(a[1]) : sole_symbol(e);
    if (s == 0) {
        if (e.is_zero()) sym::raise(KernelErrc::UndefinedForZero);
        return Expr::integer(0);
    }
    return Expr::integer(sym::degree(e, s));
}

template <Integer (*F)(const Integer&, const Integer&)>
Value fold_integers(std::span<const Value> a, Env&) {
    const auto xs = flatten(a);
    if (xs.size() < 2) mismatch();
    auto as_int = [](const Expr& e) -> Integer {
        if (!e.is_integer()) sym::raise(KernelErrc::NonNumeric);
        return e.number().get_num();
    };
    Integer acc = as_int(xs[0]);
    for (std::size_t i = 1; i < xs.size(); ++i) acc = F(acc, as_int(xs[i]));
    return integer_expr(acc);
}

Value op_numer(std::span<const Value> a, Env&) { return sym::numer(expr(a[0])); }
Value op_denom(std::span<const Value> a, Env&) { return sym::denom(expr(a[0])); }
Value op_mod(std::span<const Value> a, Env&) { return integer_expr(sym::mod(integer(a[0]), integer(a[1]))); }
Value op_floordiv(std::span<const Value> a, Env&) {
    return integer_expr(sym::floordiv(integer(a[0]), integer(a[1])));
}
Value op_factorial(std::span<const Value> a, Env&) { return integer_expr(sym::factorial(integer(a[0]))); }
Value op_floor(std::span<const Value> a, Env&) { return integer_expr(sym::floor(number(a[0]))); }
Value op_ceiling(std::span<const Value> a, Env&) { return integer_expr(sym::ceiling(number(a[0]))); }

std::vector<std::pair<Expr, Expr>> equations_of(const Value& v) {
    std::vector<std::pair<Expr, Expr>> out;
    if (const auto* s = std::get_if<EquationSet>(&v)) {
        for (const auto& eq : s->equations) out.emplace_back(eq.lhs, eq.rhs);
    } else {
        out.emplace_back(expr(v), Expr::integer(0));
    }
    return out;
}

Value op_solve(std::span<const Value> a, Env& env) {
    auto system = sym::LinearSystem::from_equations(equations_of(a[0]));
    if (system.unknowns.empty()) sym::raise(KernelErrc::SingularSystem, "no unknowns");
    const auto solution = sym::solve_linear(system);
    for (const auto& [name, value] : solution) env.bind(name, value);
    const char target = a.size() == 2 ? symbol(a[1]) : system.unknowns.front();
    auto it = solution.find(target);
    if (it == solution.end()) sym::raise(KernelErrc::UnsupportedExpression, "not an unknown of the system");
    return it->second;
}

Value op_define(std::span<const Value> a, Env& env) {
    if (const auto* f = std::get_if<FunctionDef>(&a[0])) {
        env.bind(*f);
        return f->body;
    }
    const auto* s = std::get_if<EquationSet>(&a[0]);
    if (!s) mismatch();
    for (const auto& eq : s->equations) {
        if (!eq.lhs.is_symbol()) sym::raise(KernelErrc::UnsupportedExpression, "left side is not a symbol");
    }
    for (const auto& eq : s->equations) env.bind(eq.lhs.name(), eq.rhs);
    return s->equations.back().rhs;
}

Value op_round(std::span<const Value> a, Env&) {
    const long places = a.size() == 2 ? small_integer(a[1], 0, 30) : 0;
    return Text{sym::round_to(number(a[0]), places)};
}

Value op_to_base(std::span<const Value> a, Env&) {
    return Text{sym::to_base(integer(a[0]), static_cast<int>(small_integer(a[1], 2, 36)))};
}

Value op_from_base(std::span<const Value> a, Env&) {
    std::string digits;
    if (const auto* t = std::get_if<Text>(&a[0])) {
        digits = t->text;
    } else {
        digits = integer(a[0]).get_str();
    }
    return integer_expr(sym::from_base(digits, static_cast<int>(small_integer(a[1], 2, 36))));
}

ExprList list_arg(const Value& v) {
    if (const auto* l = std::get_if<ExprList>(&v)) return *l;
    return ExprList{{expr(v)}};
}

Value op_sort(std::span<const Value> a, Env&) { return ExprList{sym::sort_values(list_arg(a[0]).items, true)}; }
Value op_sort_desc(std::span<const Value> a, Env&) {
    return ExprList{sym::sort_values(list_arg(a[0]).items, false)};
}

template <bool Largest>
Value extremum(std::span<const Value> a, Env&) {
    const auto xs = flatten(a);
    if (xs.empty()) mismatch();
    const Expr* best = nullptr;
    for (const auto& x : xs) {
        if (!x.is_number()) sym::raise(KernelErrc::NonNumeric);
        if (!best || (Largest ? x.number() > best->number() : x.number() < best->number())) best = &x;
    }
    return *best;
}

Value op_factorint(std::span<const Value> a, Env&) {
    std::string out = "{";
    for (const auto& [p, e] : sym::factorint(integer(a[0]))) {
        if (out.size() > 1) out += ", ";
        out += p.get_str() + ": " + std::to_string(e);
    }
    return Text{out + "}"};
}

Value op_prime_factors(std::span<const Value> a, Env&) {
    ExprList out;
    for (const auto& [p, e] : sym::factorint(integer(a[0]))) out.items.push_back(integer_expr(p));
    return out;
}

Value op_divisors(std::span<const Value> a, Env&) {
    ExprList out;
    for (const auto& d : sym::divisors(integer(a[0]))) out.items.push_back(integer_expr(d));
    return out;
}

Value op_is_prime(std::span<const Value> a, Env&) {
    return Text{sym::is_prime(integer(a[0])) ? "True" : "False"};
}

Value cv_as_answer(std::span<const Value> a, Env&) { return a[0]; }
Value cv_round0(std::span<const Value> a, Env&) { return Text{sym::round_to(number(a[0]), 0)}; }
Value cv_round2(std::span<const Value> a, Env&) { return Text{sym::round_to(number(a[0]), 2)}; }
Value cv_abs_wrap(std::span<const Value> a, Env&) { return abs_expr(expr(a[0])); }
Value cv_neg_wrap(std::span<const Value> a, Env&) { return sym::neg(expr(a[0])); }

constexpr std::uint8_t ar(std::initializer_list<int> ks) {
    std::uint8_t m = 0;
    for (int k : ks) m = static_cast<std::uint8_t>(m | (1u << k));
    return m;
}

}  // namespace

std::vector<OpEntry> builtin_operators() {
    const auto M = OpKind::Math;
    const auto C = OpKind::Convert;
    return {
        {"add", M, ar({2, 3}), {}, op_add},
        {"sub", M, ar({2}), {}, op_sub},
        {"mul", M, ar({2, 3}), {}, op_mul},
        {"div", M, ar({2}), {}, op_div},
        {"pow", M, ar({2}), {}, op_pow},
        {"neg", M, ar({1}), {}, op_neg},
        {"abs", M, ar({1}), {}, op_abs},
        {"expand", M, ar({1}), {}, op_expand},
        {"evaluate", M, ar({1, 2}), {}, op_evaluate},
        {"subs", M, ar({3}), {}, op_subs},
        {"diff", M, ar({1, 2, 3}), {}, op_diff},
        {"degree", M, ar({1, 2}), {}, op_degree},
        {"gcd", M, ar({2, 3}), {}, fold_integers<sym::gcd>},
        {"lcm", M, ar({2, 3}), {}, fold_integers<sym::lcm>},
        {"numer", M, ar({1}), {}, op_numer},
        {"denom", M, ar({1}), {}, op_denom},
        {"mod", M, ar({2}), {}, op_mod},
        {"floordiv", M, ar({2}), {}, op_floordiv},
        {"factorial", M, ar({1}), {}, op_factorial},
        {"floor", M, ar({1}), {}, op_floor},
        {"ceiling", M, ar({1}), {}, op_ceiling},
        {"solve", M, ar({1, 2}), {}, op_solve},
        {"define", M, ar({1}), {}, op_define},
        {"round", M, ar({1, 2}), {}, op_round},
        {"to_base", M, ar({2}), {}, op_to_base},
        {"from_base", M, ar({2}), {}, op_from_base},
        {"sort", M, ar({1}), {}, op_sort},
        {"sort_desc", M, ar({1}), {}, op_sort_desc},
        {"max", M, ar({1, 2}), {}, extremum<true>},
        {"min", M, ar({1, 2}), {}, extremum<false>},
        {"factorint", M, ar({1}), {}, op_factorint},
        {"prime_factors", M, ar({1}), {}, op_prime_factors},
        {"divisors", M, ar({1}), {}, op_divisors},
        {"is_prime", M, ar({1}), {}, op_is_prime},
        {"as_answer", C, ar({1}), {}, cv_as_answer},
        {"round0", C, ar({1}), {}, cv_round0},
        {"round2", C, ar({1}), {}, cv_round2},
        {"abs_wrap", C, ar({1}), {}, cv_abs_wrap},
        {"neg_wrap", C, ar({1}), {}, cv_neg_wrap},
    };
}

}  // namespace abducto::dsl
