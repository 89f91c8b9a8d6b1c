#include "abducto/dsl/value.hpp"

#include <algorithm>

#include "abducto/symkernel/algebra.hpp"
#include "abducto/symkernel/print.hpp"

namespace abducto::dsl {

namespace {

struct Renderer {
    std::string operator()(const Expr& e) const { return sym::to_answer_string(e); }
    std::string operator()(const Text& t) const { return t.text; }
    std::string operator()(const ExprList& l) const {
        std::string out;
        for (std::size_t i = 0; i < l.items.size(); ++i) {
            if (i) out += ", ";
            out += sym::to_answer_string(l.items[i]);
        }
        return out;
    }
    std::string operator()(const EquationSet& s) const {
        std::string out;
        for (std::size_t i = 0; i < s.equations.size(); ++i) {
            if (i) out += ", ";
            out += sym::to_answer_string(s.equations[i].lhs) + " = " + sym::to_answer_string(s.equations[i].rhs);
        }
        return out;
    }
    std::string operator()(const FunctionDef& f) const {
        return std::string{f.name, '(', f.param, ')'} + " = " + sym::to_answer_string(f.body);
    }
};

Expr substitute_env(const Expr& e, const Env& env, char skip = 0) {
    if (e.is_number()) return e;
    Expr out = e;
    for (char c : sym::free_symbols(e)) {
        if (c == skip) continue;
        if (const Expr* v = env.symbol(c)) out = sym::substitute(out, c, *v);
    }
    return out;
}

}  // namespace

std::string render(const Value& v) { return std::visit(Renderer{}, v); }

bool Env::empty() const noexcept {
    auto set = [](const auto& o) { return o.has_value(); };
    return std::none_of(symbols.begin(), symbols.end(), set) &&
           std::none_of(functions.begin(), functions.end(), set);
}

bool Env::has_functions() const noexcept {
    return std::any_of(functions.begin(), functions.end(), [](const auto& o) { return o.has_value(); });
}

const Expr* Env::symbol(char c) const noexcept {
    if (c < 'a' || c > 'z') return nullptr;
    const auto& slot = symbols[c - 'a'];
    return slot ? &*slot : nullptr;
}

const FunctionDef* Env::function(char c) const noexcept {
    if (c < 'a' || c > 'z') return nullptr;
    const auto& slot = functions[c - 'a'];
    return slot ? &*slot : nullptr;
}

Value apply_env(const Value& v, const Env& env) {
    if (std::none_of(env.symbols.begin(), env.symbols.end(), [](const auto& o) { return o.has_value(); })) {
        return v;
    }
    struct Visitor {
        const Env& env;
        Value operator()(const Expr& e) const { return substitute_env(e, env); }
        Value operator()(const Text& t) const { return t; }
        Value operator()(const ExprList& l) const {
            ExprList out;
            for (const auto& e : l.items) out.items.push_back(substitute_env(e, env));
            return out;
        }
        Value operator()(const EquationSet& s) const {
            EquationSet out;
            for (const auto& eq : s.equations) {
                out.equations.push_back({substitute_env(eq.lhs, env), substitute_env(eq.rhs, env)});
            }
            return out;
        }
        Value operator()(const FunctionDef& f) const {
            return FunctionDef{f.name, f.param, substitute_env(f.body, env, f.param)};
        }
    };
    return std::visit(Visitor{env}, v);
}

}  // namespace abducto::dsl
