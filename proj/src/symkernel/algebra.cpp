#include "abducto/symkernel/algebra.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "abducto/symkernel/error.hpp"

namespace abducto::sym {

namespace {

const Expr& one() {
    static const Expr e = Expr::integer(1);
    return e;
}

const Expr& minus_one() {
    static const Expr e = Expr::integer(-1);
    return e;
}

long small_exponent(const Integer& n) {
    if (abs(n) > limits::kMaxSymbolicExponent) {
        raise(KernelErrc::ResourceLimit, "exponent magnitude exceeds " +
                                               std::to_string(limits::kMaxSymbolicExponent));
    }
    return n.get_si();
}

// Symbol exponent vector of a coefficient-free term, used for term ordering.
struct MonomialKey {
    long degree = 0;
    std::vector<std::pair<char, long>> exponents;  // ascending by symbol
};

MonomialKey monomial_key(const Expr& rest) {
    MonomialKey key;
    auto visit = [&key](const Expr& f) {
        if (f.is_symbol()) {
            key.exponents.emplace_back(f.name(), 1);
        } else if (f.is_power() && f.base().is_symbol()) {
            key.exponents.emplace_back(f.base().name(), f.exponent().number().get_num().get_si());
        }
    };
    if (rest.is_product()) {
        for (const auto& f : rest.operands()) visit(f);
    } else if (!rest.is_number()) {
        visit(rest);
    }
    for (const auto& [s, n] : key.exponents) key.degree += n;
    return key;
}

struct OrderedTerm {
    Expr term;
    Expr rest;
    MonomialKey key;
};

// Negative when a sorts before b.
int term_order(const OrderedTerm& a, const OrderedTerm& b) {
    if (a.key.degree != b.key.degree) return a.key.degree > b.key.degree ? -1 : 1;
    const auto& ea = a.key.exponents;
    const auto& eb = b.key.exponents;
    std::size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
        const char sa = i < ea.size() ? ea[i].first : '~';
        const char sb = j < eb.size() ? eb[j].first : '~';
        long xa = 0, xb = 0;
        if (sa == sb) {
            xa = ea[i++].second;
            xb = eb[j++].second;
        } else if (sa < sb) {
            xa = ea[i++].second;
        } else {
            xb = eb[j++].second;
        }
        if (xa != xb) return xa > xb ? -1 : 1;
    }
    const bool ca = a.rest.is_number();
    const bool cb = b.rest.is_number();
    if (ca != cb) return ca ? 1 : -1;  // literal last among equal keys
    return compare(a.rest, b.rest);
}

Expr make_term(const Rational& coeff, const Expr& rest) {
    if (rest.is_number()) return Expr::rational(coeff * rest.number());
    if (coeff == 1) return rest;
    std::vector<Expr> factors;
    factors.push_back(Expr::rational(coeff));
    if (rest.is_product()) {
        for (const auto& f : rest.operands()) factors.push_back(f);
    } else {
        factors.push_back(rest);
    }
    return Expr::make_product(std::move(factors));
}

Expr pow_integer(const Expr& base, const Integer& n);

// Product of factors none of which is a Sum (products are flattened here).
Expr mul_simple(std::span<const Expr> factors) {
    Rational coeff(1);
    std::vector<std::pair<Expr, Integer>> bases;
    auto absorb = [&](const Expr& f) {
        if (f.is_number()) {
            coeff *= f.number();
        } else if (f.is_power()) {
            bases.emplace_back(f.base(), f.exponent().number().get_num());
        } else {
            bases.emplace_back(f, Integer(1));
        }
    };
    for (const auto& f : factors) {
        if (f.is_product()) {
            for (const auto& g : f.operands()) absorb(g);
        } else {
            absorb(f);
        }
    }
    if (coeff == 0) return Expr();
    std::sort(bases.begin(), bases.end(),
              [](const auto& x, const auto& y) { return compare(x.first, y.first) < 0; });
    std::vector<Expr> out;
    std::vector<Expr> expand_later;
    for (std::size_t i = 0; i < bases.size();) {
        Integer n = bases[i].second;
        std::size_t j = i + 1;
        while (j < bases.size() && compare(bases[j].first, bases[i].first) == 0) {
            n += bases[j].second;
            ++j;
        }
        const Expr& b = bases[i].first;
        if (n != 0) {
            if (b.is_sum() && n > 0) {
                expand_later.push_back(pow_integer(b, n));
            } else if (n == 1) {
                out.push_back(b);
            } else {
                out.push_back(Expr::make_power(b, Expr::integer(small_exponent(n))));
            }
        }
        i = j;
    }
    Expr result;
    if (out.empty()) {
        result = Expr::rational(coeff);
    } else if (coeff == 1 && out.size() == 1) {
        result = out.front();
    } else {
        if (coeff != 1) out.insert(out.begin(), Expr::rational(coeff));
        result = Expr::make_product(std::move(out));
    }
    if (expand_later.empty()) return result;
    expand_later.push_back(result);
    return mul_all(expand_later);
}

}  // namespace

std::pair<Rational, Expr> split_coefficient(const Expr& term) {
    if (term.is_number()) return {term.number(), one()};
    if (term.is_product()) {
        auto fs = term.operands();
        if (fs.front().is_number()) {
            if (fs.size() == 2) return {fs.front().number(), fs[1]};
            return {fs.front().number(),
                    Expr::make_product(std::vector<Expr>(fs.begin() + 1, fs.end()))};
        }
    }
    return {Rational(1), term};
}

Expr add_all(std::span<const Expr> terms) {
    Rational constant(0);
    std::vector<std::pair<Expr, Rational>> items;
    auto absorb = [&](const Expr& t) {
        if (t.is_number()) {
            constant += t.number();
        } else {
            auto [c, rest] = split_coefficient(t);
            items.emplace_back(std::move(rest), std::move(c));
        }
    };
    for (const auto& t : terms) {
        if (t.is_sum()) {
            for (const auto& u : t.operands()) absorb(u);
        } else {
            absorb(t);
        }
    }
    if (items.empty()) return Expr::rational(constant);

    std::sort(items.begin(), items.end(),
              [](const auto& x, const auto& y) { return compare(x.first, y.first) < 0; });
    std::vector<OrderedTerm> ordered;
    ordered.reserve(items.size() + 1);
    for (std::size_t i = 0; i < items.size();) {
        Rational c = items[i].second;
        std::size_t j = i + 1;
        while (j < items.size() && compare(items[j].first, items[i].first) == 0) {
            c += items[j].second;
            ++j;
        }
        if (c != 0) {
            ordered.push_back({make_term(c, items[i].first), items[i].first,
                               monomial_key(items[i].first)});
        }
        i = j;
    }
    if (constant != 0) ordered.push_back({Expr::rational(constant), one(), MonomialKey{}});
    if (ordered.size() > limits::kMaxTerms) raise(KernelErrc::ResourceLimit, "too many terms");
    if (ordered.empty()) return Expr();
    if (ordered.size() == 1) return ordered.front().term;
    std::sort(ordered.begin(), ordered.end(),
              [](const OrderedTerm& x, const OrderedTerm& y) { return term_order(x, y) < 0; });
    std::vector<Expr> out;
    out.reserve(ordered.size());
    for (auto& t : ordered) out.push_back(std::move(t.term));
    return Expr::make_sum(std::move(out));
}

Expr mul_all(std::span<const Expr> factors) {
    std::vector<Expr> plain;
    std::vector<Expr> sums;
    for (const auto& f : factors) {
        if (f.is_zero()) return Expr();
        if (f.is_sum()) {
            sums.push_back(f);
        } else {
            plain.push_back(f);
        }
    }
    Expr acc = mul_simple(plain);
    if (sums.empty()) return acc;
    for (const auto& s : sums) {
        std::span<const Expr> left =
            acc.is_sum() ? acc.operands() : std::span<const Expr>(&acc, 1);
        const std::size_t n = left.size() * s.operands().size();
        if (n > limits::kMaxTerms * 4) raise(KernelErrc::ResourceLimit, "expansion too large");
        std::vector<Expr> products;
        products.reserve(n);
        for (const auto& a : left) {
            for (const auto& b : s.operands()) {
                const Expr pair[2] = {a, b};
                products.push_back(mul_simple(pair));
            }
        }
        acc = add_all(products);
        if (acc.is_zero()) return acc;
    }
    return acc;
}

Expr add(const Expr& a, const Expr& b) {
    const Expr terms[2] = {a, b};
    return add_all(terms);
}

Expr mul(const Expr& a, const Expr& b) {
    const Expr factors[2] = {a, b};
    return mul_all(factors);
}

Expr neg(const Expr& a) { return mul(minus_one(), a); }

Expr sub(const Expr& a, const Expr& b) { return add(a, neg(b)); }

Expr div(const Expr& a, const Expr& b) {
    if (b.is_zero()) raise(KernelErrc::DivisionByZero, "division by zero");
    return mul(a, pow(b, -1));
}

namespace {

std::size_t bit_length(const Rational& q) {
    return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

Expr pow_integer(const Expr& base, const Integer& n) {
    if (n == 0) return one();
    if (n == 1) return base;
    switch (base.kind()) {
        case Expr::Kind::Integer:
        case Expr::Kind::Rational: {
            if (base.is_zero()) {
                if (n < 0) raise(KernelErrc::DivisionByZero, "zero raised to a negative power");
                return Expr();
            }
            const Rational& q = base.number();
            const bool unit = abs(q.get_num()) == 1 && q.get_den() == 1;
            if (unit) {
                return (q.get_num() < 0 && mpz_odd_p(n.get_mpz_t())) ? minus_one() : one();
            }
            if (abs(n) > limits::kMaxNumericBits ||
                bit_length(q) * Integer(abs(n)).get_ui() > limits::kMaxNumericBits) {
                raise(KernelErrc::ResourceLimit, "numeric power too large");
            }
            const unsigned long e = Integer(abs(n)).get_ui();
            Integer num, den;
            mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), e);
            mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), e);
            if (n < 0) std::swap(num, den);
            return Expr::rational(Rational(num, den));
        }
        case Expr::Kind::Symbol:
            return Expr::make_power(base, Expr::integer(small_exponent(n)));
        case Expr::Kind::Power: {
            const Integer m = base.exponent().number().get_num() * n;
            return pow_integer(base.base(), m);
        }
        case Expr::Kind::Product: {
            std::vector<Expr> parts;
            for (const auto& f : base.operands()) parts.push_back(pow_integer(f, n));
            return mul_all(parts);
        }
        case Expr::Kind::Sum: {
            const long e = small_exponent(n);
            if (e < 0) return Expr::make_power(base, Expr::integer(e));
            Expr result = one();
            Expr square = base;
            for (unsigned long k = static_cast<unsigned long>(e); k != 0; k >>= 1) {
                if (k & 1u) result = mul(result, square);
                if (k > 1) square = mul(square, square);
            }
            return result;
        }
    }
    return base;
}

}  // namespace

Expr pow(const Expr& base, const Expr& n) {
    if (!n.is_integer()) raise(KernelErrc::UnsupportedExponent, "exponent must be an integer literal");
    return pow_integer(base, n.number().get_num());
}

Expr pow(const Expr& base, long n) { return pow_integer(base, Integer(n)); }

Expr canonicalize(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Integer:
        case Expr::Kind::Rational:
        case Expr::Kind::Symbol:
            return e;
        case Expr::Kind::Sum: {
            std::vector<Expr> kids;
            for (const auto& t : e.operands()) kids.push_back(canonicalize(t));
            return add_all(kids);
        }
        case Expr::Kind::Product: {
            std::vector<Expr> kids;
            for (const auto& f : e.operands()) kids.push_back(canonicalize(f));
            return mul_all(kids);
        }
        case Expr::Kind::Power:
            return pow(canonicalize(e.base()), canonicalize(e.exponent()));
    }
    return e;
}

namespace {

bool contains_symbol(const Expr& e, char sym) {
    switch (e.kind()) {
        case Expr::Kind::Integer:
        case Expr::Kind::Rational:
            return false;
        case Expr::Kind::Symbol:
            return e.name() == sym;
        case Expr::Kind::Power:
            return contains_symbol(e.base(), sym);
        case Expr::Kind::Sum:
        case Expr::Kind::Product:
            for (const auto& k : e.operands()) {
                if (contains_symbol(k, sym)) return true;
            }
            return false;
    }
    return false;
}

void collect_symbols(const Expr& e, std::set<char>& out) {
    if (e.is_symbol()) {
        out.insert(e.name());
    } else if (e.is_power()) {
        collect_symbols(e.base(), out);
    } else {
        for (const auto& k : e.operands()) collect_symbols(k, out);
    }
}

Expr substitute_rec(const Expr& e, char sym, const Expr& value) {
    switch (e.kind()) {
        case Expr::Kind::Integer:
        case Expr::Kind::Rational:
            return e;
        case Expr::Kind::Symbol:
            return e.name() == sym ? value : e;
        case Expr::Kind::Power:
            return pow(substitute_rec(e.base(), sym, value), e.exponent());
        case Expr::Kind::Sum:
        case Expr::Kind::Product: {
            std::vector<Expr> kids;
            kids.reserve(e.operands().size());
            for (const auto& k : e.operands()) kids.push_back(substitute_rec(k, sym, value));
            return e.is_sum() ? add_all(kids) : mul_all(kids);
        }
    }
    return e;
}

Expr diff_once(const Expr& e, char sym) {
    switch (e.kind()) {
        case Expr::Kind::Integer:
        case Expr::Kind::Rational:
            return Expr();
        case Expr::Kind::Symbol:
            return e.name() == sym ? one() : Expr();
        case Expr::Kind::Sum: {
            std::vector<Expr> parts;
            for (const auto& t : e.operands()) parts.push_back(diff_once(t, sym));
            return add_all(parts);
        }
        case Expr::Kind::Product: {
            auto fs = e.operands();
            std::vector<Expr> parts;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                if (!contains_symbol(fs[i], sym)) continue;
                std::vector<Expr> factors(fs.begin(), fs.end());
                factors[i] = diff_once(fs[i], sym);
                parts.push_back(mul_all(factors));
            }
            return add_all(parts);
        }
        case Expr::Kind::Power: {
            if (!contains_symbol(e.base(), sym)) return Expr();
            const Integer n = e.exponent().number().get_num();
            const Expr factors[3] = {Expr::integer(n), pow_integer(e.base(), n - 1),
                                     diff_once(e.base(), sym)};
            return mul_all(factors);
        }
    }
    return Expr();
}

}  // namespace

Expr substitute(const Expr& e, char sym, const Expr& value) {
    if (!contains_symbol(e, sym)) return e;
    return substitute_rec(e, sym, value);
}

Expr diff(const Expr& e, char sym, long order) {
    if (order < 1) raise(KernelErrc::UnsupportedExpression, "derivative order must be positive");
    Expr d = e;
    for (long k = 0; k < order; ++k) {
        if (d.is_number()) return Expr();
        d = diff_once(d, sym);
    }
    return d;
}

std::set<char> free_symbols(const Expr& e) {
    std::set<char> out;
    collect_symbols(e, out);
    return out;
}

long degree(const Expr& e, char sym) {
    if (e.is_zero()) raise(KernelErrc::UnsupportedExpression, "degree of the zero polynomial");
    long best = 0;
    std::span<const Expr> terms = e.is_sum() ? e.operands() : std::span<const Expr>(&e, 1);
    for (const auto& t : terms) {
        std::span<const Expr> fs = t.is_product() ? t.operands() : std::span<const Expr>(&t, 1);
        long d = 0;
        for (const auto& f : fs) {
            if (f.is_symbol() && f.name() == sym) {
                d += 1;
            } else if (f.is_power() && contains_symbol(f.base(), sym)) {
                const long n = f.exponent().number().get_num().get_si();
                if (!f.base().is_symbol() || n < 0) {
                    raise(KernelErrc::UnsupportedExpression, "not a polynomial");
                }
                d += n;
            }
        }
        best = std::max(best, d);
    }
    return best;
}

namespace {

std::pair<Expr, Expr> fraction(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Integer:
        case Expr::Kind::Rational:
            return {Expr::integer(e.number().get_num()), Expr::integer(e.number().get_den())};
        case Expr::Kind::Symbol:
            return {e, one()};
        case Expr::Kind::Power: {
            const Integer n = e.exponent().number().get_num();
            if (n < 0) return {one(), pow_integer(e.base(), -n)};
            return {e, one()};
        }
        case Expr::Kind::Product: {
            std::vector<Expr> num, den;
            for (const auto& f : e.operands()) {
                if (f.is_number()) {
                    num.push_back(Expr::integer(f.number().get_num()));
                    den.push_back(Expr::integer(f.number().get_den()));
                } else if (f.is_power() && f.exponent().number() < 0) {
                    den.push_back(pow_integer(f.base(), -f.exponent().number().get_num()));
                } else {
                    num.push_back(f);
                }
            }
            return {mul_all(num), mul_all(den)};
        }
        case Expr::Kind::Sum:
            break;
    }
    raise(KernelErrc::UnsupportedExpression, "numerator/denominator of a sum");
}

}  // namespace

Expr numer(const Expr& e) { return fraction(e).first; }

Expr denom(const Expr& e) { return fraction(e).second; }

Expr evaluate_arith(const Expr& e) {
    Expr c = canonicalize(e);
    if (!c.is_number()) raise(KernelErrc::FreeSymbolPresent, "expression has free symbols");
    return c;
}

}  // namespace abducto::sym
