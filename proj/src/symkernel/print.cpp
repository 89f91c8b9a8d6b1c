#include "abducto/symkernel/print.hpp"

#include <vector>

#include "abducto/symkernel/algebra.hpp"

namespace abducto::sym {

namespace {

std::string print_base(const Expr& b) {
    if (b.is_symbol()) return std::string(1, b.name());
    std::string s = to_answer_string(b);
    if (b.is_sum() || b.is_product() || b.is_power() ||
        (b.is_number() && (b.number() < 0 || !b.is_integer()))) {
        return "(" + s + ")";
    }
    return s;
}

// base**n for n >= 1
std::string print_positive_power(const Expr& base, const Integer& n) {
    if (n == 1) return print_base(base);
    return print_base(base) + "**" + n.get_str();
}

// Unsigned rendering of coeff*factors with |coeff| taken; sign handled by caller.
std::string print_magnitude(const Rational& coeff, std::span<const Expr> factors) {
    std::vector<std::string> num;
    std::vector<std::string> den;
    const Integer p = abs(coeff.get_num());
    const Integer q = coeff.get_den();
    if (p != 1) num.push_back(p.get_str());
    if (q != 1) den.push_back(q.get_str());
    for (const auto& f : factors) {
        if (f.is_power()) {
            const Integer n = f.exponent().number().get_num();
            if (n < 0) {
                den.push_back(print_positive_power(f.base(), -n));
            } else {
                num.push_back(print_positive_power(f.base(), n));
            }
        } else {
            num.push_back(print_base(f));
        }
    }
    auto join = [](const std::vector<std::string>& parts) {
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out += '*';
            out += parts[i];
        }
        return out;
    };
    std::string out = num.empty() ? "1" : join(num);
    if (den.size() == 1) {
        out += "/" + den.front();
    } else if (den.size() > 1) {
        out += "/(" + join(den) + ")";
    }
    return out;
}

// Returns (negative, magnitude) for one Sum term or standalone non-sum expression.
std::pair<bool, std::string> print_term(const Expr& t) {
    if (t.is_number()) {
        const Rational& q = t.number();
        Rational m = abs(q);
        return {q < 0, m.get_den() == 1 ? m.get_num().get_str() : m.get_str()};
    }
    auto [coeff, rest] = split_coefficient(t);
    if (rest.is_power() && coeff == 1) {
        // Bare negative powers print the way a reader would write them:
        // 1/x for exponent -1, x**(-2) otherwise.
        const Integer n = rest.exponent().number().get_num();
        if (n == -1) return {false, "1/" + print_base(rest.base())};
        if (n < 0) return {false, print_base(rest.base()) + "**(" + n.get_str() + ")"};
    }
    std::span<const Expr> factors =
        rest.is_product() ? rest.operands() : std::span<const Expr>(&rest, 1);
    return {coeff < 0, print_magnitude(coeff, factors)};
}

}  // namespace

std::string to_answer_string(const Expr& e) {
    if (!e.is_sum()) {
        auto [negative, body] = print_term(e);
        return negative ? "-" + body : body;
    }
    std::string out;
    bool first = true;
    for (const auto& t : e.operands()) {
        auto [negative, body] = print_term(t);
        if (first) {
            out = negative ? "-" + body : body;
            first = false;
        } else {
            out += negative ? " - " : " + ";
            out += body;
        }
    }
    return out;
}

}  // namespace abducto::sym
