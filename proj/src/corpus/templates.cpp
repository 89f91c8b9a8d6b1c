#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>

#include "abducto/corpus/corpus.hpp"
#include "abducto/dsl/executor.hpp"
#include "abducto/symkernel/algebra.hpp"
#include "abducto/symkernel/numbers.hpp"
#include "abducto/symkernel/parse.hpp"
#include "abducto/symkernel/print.hpp"
#include "abducto/tokenizer/tokenizer.hpp"

namespace abducto::corpus {

using sym::Expr;
using sym::Integer;

namespace {

class Draw {
public:
    Draw(std::mt19937_64& rng, Difficulty d) : rng_(rng), d_(d) {}

    // Range-governed magnitude: [lo, hi] for interpolation, (hi, 2*hi] for
    // extrapolation, negated with probability 1/2 when signed.
    long num(long lo, long hi, bool is_signed = false) {
        long v = d_ == Difficulty::Interpolation ? uniform(lo, hi) : uniform(hi + 1, 2 * hi);
        ratio_ = std::max(ratio_, static_cast<double>(v) / static_cast<double>(hi));
        if (is_signed && coin()) v = -v;
        return v;
    }

    // Structural choice, identical in both difficulties.
    long pick(long lo, long hi) { return uniform(lo, hi); }
    bool coin() { return uniform(0, 1) == 1; }

    template <typename T>
    const T& one_of(const std::vector<T>& xs) {
        return xs[static_cast<std::size_t>(uniform(0, static_cast<long>(xs.size()) - 1))];
    }

    // Distinct variable letters.
    std::vector<char> letters(std::size_t n) {
        static const std::string pool = "abcdfghjkmnpqrstuvwxyz";
        std::string p = pool;
        std::shuffle(p.begin(), p.end(), rng_);
        return {p.begin(), p.begin() + static_cast<long>(n)};
    }

    double ratio() const { return ratio_; }

private:
    long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

    std::mt19937_64& rng_;
    Difficulty d_;
    double ratio_ = 0.0;
};

// A question plus its hidden program written over slot ordinals ($0, $1, ...).
struct Draft {
    std::string question;
    std::string answer;
    std::string program;
    std::size_t slots = 0;
};

using Maker = std::function<Draft(Draw&)>;

std::string S(const Expr& e) { return sym::to_answer_string(e); }
std::string S(long v) { return std::to_string(v); }
Expr I(long v) { return Expr::integer(v); }
Expr V(char c) { return Expr::symbol(c); }
std::string L(char c) { return std::string(1, c); }

// Kernel value of expression text.
std::string eval_text(const std::string& text) { return S(sym::parse_expr(text)); }

// Sum of c_k * x**k with a nonzero leading coefficient.
Expr polynomial(Draw& d, char x, long min_degree, long max_degree, long bound) {
    const long deg = d.pick(min_degree, max_degree);
    Expr out = I(0);
    for (long k = 0; k <= deg; ++k) {
        if (k != deg && d.pick(0, 2) == 0) continue;
        out = sym::add(out, sym::mul(I(d.num(1, bound, true)), sym::pow(V(x), k)));
    }
    return out;
}

std::string paren_if_negative(long v) { return v < 0 ? "(" + S(v) + ")" : S(v); }

Draft arith_mixed(Draw& d) {
    const long a = d.num(1, 50, true);
    const long b = d.num(1, 50, true);
    switch (d.pick(0, 5)) {
        case 0:
            return {"What is " + S(a) + " minus " + S(b) + "?", S(I(a - b)), "$0 $1 argc2 sub", 2};
        case 1:
            return {"Calculate " + S(a) + " divided by " + S(b) + ".", S(Expr::rational(a, b)), "$0 $1 argc2 div", 2};
        case 2:
            return {"What is the product of " + S(a) + " and " + S(b) + "?", S(I(a * b)), "$0 $1 argc2 mul", 2};
        case 3:
            return {"Subtract " + S(b) + " from " + S(a) + ".", S(I(a - b)), "$1 $0 argc2 sub", 2};
        case 4: {
            const std::string e = S(a) + (d.coin() ? " + " : " - ") + S(std::abs(b)) + "*" + S(d.num(1, 50));
            return {"What is " + e + "?", eval_text(e), "$0", 1};
        }
        default: {
            const long m = std::abs(a) + 20;
            const long n = d.pick(2, 19);
            return {"What is the remainder when " + S(m) + " is divided by " + S(n) + "?",
                    S(I(m % n)), "$0 $1 argc2 mod", 2};
        }
    }
}

// Fraction p/q in lowest terms with the given denominator.
std::string fraction_over(Draw& d, long q) {
    long p;
    do {
        p = d.pick(1, 2 * q);
    } while (std::gcd(p, q) != 1);
    if (d.pick(0, 3) == 0) p = -p;
    return S(p) + "/" + S(q);
}

Draft numbers_lcm(Draw& d) {
    const long f = d.num(2, 30);
    long g1 = d.num(1, 30);
    long g2 = d.num(1, 30);
    if (g1 == g2) g2 += 1;
    const long p = f * g1;
    const long q = f * g2;
    const std::string ans = sym::lcm(Integer(p), Integer(q)).get_str();
    switch (d.pick(0, 3)) {
        case 0:
        case 1: {
            const std::string verb = d.coin() ? "Calculate" : "Find";
            return {verb + " the common denominator of " + fraction_over(d, p) + " and " + fraction_over(d, q) + ".",
                    ans, "$1 argc1 denom $0 argc1 denom argc2 lcm", 2};
        }
        case 2:
            return {"What is the lowest common multiple of " + S(p) + " and " + S(q) + "?", ans, "$0 $1 argc2 lcm", 2};
        default:
            return {"Calculate the least common multiple of " + S(p) + " and " + S(q) + ".", ans, "$0 $1 argc2 lcm", 2};
    }
}

Draft numbers_gcd(Draw& d) {
    const long f = d.num(2, 40);
    const long m = f * d.num(1, 30);
    const long n = f * d.num(1, 30);
    const std::string ans = sym::gcd(Integer(m), Integer(n)).get_str();
    static const std::vector<std::string> lead = {"Calculate the greatest common divisor of ",
                                                  "What is the highest common factor of ",
                                                  "What is the greatest common factor of "};
    const std::string& l = d.one_of(lead);
    const std::string end = l.starts_with("What") ? "?" : ".";
    return {l + S(m) + " and " + S(n) + end, ans, "$0 $1 argc2 gcd", 2};
}

Draft polynomial_eval(Draw& d) {
    const auto names = d.letters(5);
    switch (d.pick(0, 2)) {
        case 0: {
            const Expr p = polynomial(d, names[0], 1, 3, 10);
            const long v = d.num(1, 10, true);
            return {"Evaluate " + S(p) + " at " + S(v) + ".", S(sym::substitute(p, names[0], I(v))),
                    "$0 $1 argc2 evaluate", 2};
        }
        case 1: {
            const char f = names[0], x = names[1];
            const Expr p = polynomial(d, x, 1, 3, 10);
            const long v = d.num(1, 10, true);
            const std::string ask = d.coin() ? "What is " + L(f) + "(" + S(v) + ")?" : "Calculate " + L(f) + "(" + S(v) + ").";
            return {"Let " + L(f) + "(" + L(x) + ") = " + S(p) + ". " + ask, S(sym::substitute(p, x, I(v))),
                    "$0 argc1 define $1", 2};
        }
        default: {
            const char q = names[0], r = names[1], m = names[2], c = names[3], t = names[4];
            const Expr p1 = polynomial(d, m, 1, 3, 10);
            const Expr p2 = polynomial(d, c, 1, 3, 10);
            const long alpha = d.num(1, 20, true);
            const long beta = d.num(1, 20, true);
            const std::string call = S(alpha) + "*" + L(q) + "(" + L(t) + ")" + (beta < 0 ? " - " : " + ") +
                                     S(std::abs(beta)) + "*" + L(r) + "(" + L(t) + ")";
            const Expr value = sym::add(sym::mul(I(alpha), sym::substitute(p1, m, V(t))),
                                        sym::mul(I(beta), sym::substitute(p2, c, V(t))));
            return {"Let " + L(q) + "(" + L(m) + ") = " + S(p1) + ". Let " + L(r) + "(" + L(c) + ") = " + S(p2) +
                        ". What is " + call + "?",
                    S(value), "$0 argc1 define $1 argc1 define $2", 3};
        }
    }
}

Draft calculus_differentiate(Draw& d) {
    const auto names = d.letters(2);
    const char x = names[0], y = names[1];
    switch (d.pick(0, 3)) {
        case 0: {
            Expr p = polynomial(d, x, 2, 5, 10);
            if (d.coin()) {
                p = sym::add(p, sym::mul(I(d.num(1, 10, true)), sym::mul(sym::pow(V(x), d.pick(1, 3)), V(y))));
            }
            return {"Differentiate " + S(p) + " with respect to " + L(x) + ".", S(sym::diff(p, x)),
                    "$0 $1 argc2 diff", 2};
        }
        case 1: {
            const Expr p = polynomial(d, x, 2, 5, 10);
            return {"What is the derivative of " + S(p) + "?", S(sym::diff(p, x)), "$0 argc1 diff", 1};
        }
        default: {
            const long order = d.pick(2, 3);
            const Expr p = polynomial(d, x, order, 5, 10);
            const std::string ord = order == 2 ? "second" : "third";
            const std::string text = d.coin() ? "Find the " + ord + " derivative of " + S(p) + " wrt " + L(x) + "."
                                              : "What is the " + ord + " derivative of " + S(p) + " wrt " + L(x) + "?";
            return {text, S(sym::diff(p, x, order)), "$1 $2 $0 argc3 diff", 3};
        }
    }
}

Draft polynomial_expand(Draw& d) {
    const char x = d.letters(1)[0];
    auto linear = [&] { return S(sym::add(sym::mul(I(d.num(1, 10, true)), V(x)), I(d.num(1, 10, true)))); };
    std::string e;
    switch (d.pick(0, 2)) {
        case 0:
            e = "(" + linear() + ")*(" + linear() + ")";
            break;
        case 1:
            e = "(" + linear() + ")**2 " + (d.coin() ? "+ " : "- ") + S(d.num(1, 10)) + "*" + L(x);
            break;
        default:
            e = S(d.num(1, 10, true)) + "*(" + linear() + ")*(" + linear() + ")";
            break;
    }
    return {"Expand " + e + ".", eval_text(e), "$0 argc1 expand", 1};
}

Draft linear_1d(Draw& d) {
    const auto names = d.letters(2);
    const char t = names[0], k = names[1];
    const long t0 = d.num(1, 20, true);
    switch (d.pick(0, 2)) {
        case 0: {
            const long a = d.num(1, 20, true);
            const long b = d.num(1, 50, true);
            const std::string lhs = S(sym::add(sym::mul(I(a), V(t)), I(b)));
            return {"Solve " + lhs + " = " + S(a * t0 + b) + " for " + L(t) + ".", S(t0), "$0 argc1 solve", 2};
        }
        case 1: {
            long a = d.num(1, 20, true);
            const long b = d.num(1, 20, true);
            if (a == b) a += 1;
            const std::string lhs = S(sym::mul(I(a), V(t)));
            const std::string rhs = S(sym::add(sym::mul(I(b), V(t)), I((a - b) * t0)));
            return {"Solve " + lhs + " = " + rhs + " for " + L(t) + ".", S(t0), "$0 argc1 solve", 2};
        }
        default: {
            const long k0 = d.num(1, 20, true);
            long a1, b1, a2, b2;
            do {
                a1 = d.pick(-6, 6);
                b1 = d.pick(-6, 6);
                a2 = d.pick(-6, 6);
                b2 = d.pick(-6, 6);
            } while (a1 * b2 - a2 * b1 == 0 || a1 == 0 || b2 == 0);
            auto side = [&](long a, long b) { return S(sym::add(sym::mul(I(a), V(t)), sym::mul(I(b), V(k)))); };
            const std::string eqs = side(a1, b1) + " = " + S(a1 * t0 + b1 * k0) + ", " + side(a2, b2) + " = " +
                                    S(a2 * t0 + b2 * k0);
            return {"Solve " + eqs + " for " + L(t) + ".", S(t0), "$0 $1 argc2 solve", 2};
        }
    }
}

Draft base_conversion(Draw& d) {
    if (d.coin()) {
        const long n = d.num(10, 1000, d.pick(0, 4) == 0);
        const long b = d.pick(2, 9);
        return {"What is " + S(n) + " in base " + S(b) + "?", sym::to_base(Integer(n), static_cast<int>(b)),
                "$0 $1 argc2 to_base", 2};
    }
    for (;;) {
        const long n = d.num(16, 1000);
        const long b = d.pick(2, 16);
        const std::string digits = sym::to_base(Integer(n), static_cast<int>(b));
        if (!std::any_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) continue;
        return {"Convert " + digits + " from base " + S(b) + " to base 10.", S(n), "$0 $1 argc2 from_base", 3};
    }
}

Draft number_round(Draw& d) {
    const long whole = d.num(1, 1000, true);
    const long places = d.pick(3, 6);
    long scale = 1;
    for (long i = 0; i < places; ++i) scale *= 10;
    const long frac = d.pick(1, scale - 1);
    std::string fs = S(frac);
    fs = std::string(static_cast<std::size_t>(places) - fs.size(), '0') + fs;
    const std::string x = S(whole) + "." + fs;
    const auto value = sym::parse_expr(x).number();
    switch (d.pick(0, 2)) {
        case 0: {
            const long k = d.pick(1, 3);
            return {"Round " + x + " to " + S(k) + (k == 1 ? " decimal place." : " decimal places."),
                    sym::round_to(value, k), "$0 $1 argc2 round", 2};
        }
        case 1:
            return {"Round " + x + " to the nearest integer.", sym::round_to(value, 0), "$0 argc1 round", 1};
        default: {
            const long k = d.pick(1, 3);
            return {"What is " + x + " rounded to " + S(k) + (k == 1 ? " decimal place?" : " decimal places?"),
                    sym::round_to(value, k), "$0 $1 argc2 round", 2};
        }
    }
}

Draft numbers_sort(Draw& d) {
    std::vector<long> xs;
    const long n = d.pick(3, 6);
    while (static_cast<long>(xs.size()) < n) {
        const long v = d.num(1, 100, true);
        if (std::find(xs.begin(), xs.end(), v) == xs.end()) xs.push_back(v);
    }
    std::string list;
    for (std::size_t i = 0; i < xs.size(); ++i) list += (i ? ", " : "") + S(xs[i]);
    std::vector<long> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    auto join = [](const std::vector<long>& v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + S(v[i]);
        return out;
    };
    switch (d.pick(0, 3)) {
        case 0:
            return {"Sort " + list + " in increasing order.", join(sorted), "$0 argc1 sort", 1};
        case 1: {
            std::reverse(sorted.begin(), sorted.end());
            return {"Sort " + list + " in decreasing order.", join(sorted), "$0 argc1 sort_desc", 1};
        }
        case 2:
            return {"What is the biggest value in " + list + "?", S(sorted.back()), "$0 argc1 max", 1};
        default:
            return {"What is the smallest value in " + list + "?", S(sorted.front()), "$0 argc1 min", 1};
    }
}

struct Binding {
    std::string text;
    std::string program;
};

// "Let u = ..." or "Suppose k*u = m." binding u to u0 != 0.
Binding bind_part(Draw& d, char u, long& u0) {
    if (d.coin()) {
        std::string e;
        do {
            const long a = d.num(1, 50, true);
            const long b = d.num(1, 50);
            e = S(a) + (d.coin() ? " + " : " - ") + S(b);
        } while (sym::parse_expr(e).is_zero());
        u0 = sym::parse_expr(e).number().get_num().get_si();
        return {"Let " + L(u) + " = " + e + ".", "$0 argc1 define"};
    }
    do {
        u0 = d.num(1, 20, true);
    } while (u0 == 0);
    const long k = d.num(1, 9, true);
    const long b = d.pick(0, 1) ? d.num(1, 30, true) : 0;
    const std::string lhs = S(sym::add(sym::mul(I(k), V(u)), I(b)));
    return {"Suppose " + lhs + " = " + S(k * u0 + b) + ".", "$0 argc1 solve"};
}

Draft compose_2(Draw& d) {
    const auto names = d.letters(2);
    const char u = names[0], t = names[1];
    long u0 = 0;
    const Binding first = bind_part(d, u, u0);
    const long n = d.num(2, 40);
    switch (d.pick(0, 4)) {
        case 0:
            return {first.text + " Calculate the greatest common divisor of " + L(u) + " and " + S(n) + ".",
                    sym::gcd(Integer(u0), Integer(n)).get_str(), first.program + " $1 $2 argc2 gcd", 3};
        case 1:
            return {first.text + " What is the lowest common multiple of " + L(u) + " and " + S(n) + "?",
                    sym::lcm(Integer(u0), Integer(n)).get_str(), first.program + " $1 $2 argc2 lcm", 3};
        case 2: {
            const long t0 = d.num(1, 20, true);
            const long b = d.num(1, 30, true);
            return {first.text + " Solve " + L(u) + "*" + L(t) + (b < 0 ? " - " : " + ") + S(std::abs(b)) + " = " +
                        S(u0 * t0 + b) + " for " + L(t) + ".",
                    S(t0), first.program + " $1 argc1 solve", 3};
        }
        case 3:
            return {first.text + " What is " + L(u) + " divided by " + S(n) + "?", S(Expr::rational(u0, n)),
                    first.program + " $1 $2 argc2 div", 3};
        default:
            return {first.text + " Calculate " + L(u) + " minus " + S(n) + ".", S(I(u0 - n)),
                    first.program + " $1 $2 argc2 sub", 3};
    }
}

Draft compose_3(Draw& d) {
    const auto names = d.letters(3);
    const char v = names[0], x = names[1], u = names[2];
    long v0, x0, a, c, dd;
    do {
        v0 = d.num(1, 30, true);
        x0 = d.num(1, 30, true);
        a = d.num(1, 9, true);
        c = d.num(1, 9, true);
        dd = d.pick(-5, 5);
    } while (dd == 0 || a - c * dd == 0);
    const long b = c * x0 - a * v0;
    const long e = x0 - dd * v0;
    const std::string system = S(sym::add(sym::mul(I(a), V(v)), I(b))) + " = " + S(sym::mul(I(c), V(x))) + ", " +
                               L(x) + " = " + S(sym::add(sym::mul(I(dd), V(v)), I(e)));
    long u0 = 0;
    std::string let;
    do {
        const long p = d.num(1, 80, true);
        const long q = d.num(1, 40);
        let = S(p) + (d.coin() ? " + " : " - ") + S(q);
        u0 = sym::parse_expr(let).number().get_num().get_si();
    } while (u0 == 0);
    const std::string head = "Suppose " + system + ". Let " + L(u) + " = " + let + ". ";
    const std::string prefix = "$0 argc1 solve $1 argc1 define ";
    switch (d.pick(0, 2)) {
        case 0: {
            const long p = d.num(2, 12);
            long q = d.num(2, 1000, true);
            const long r = d.num(1, 10);
            const Expr tail = sym::sub(Expr::rational(v0, q), Expr::rational(r, u0));
            const std::string ans = sym::lcm(Integer(p), sym::denom(tail).number().get_num()).get_str();
            return {head + "Find the common denominator of 1/" + S(p) + " and " + L(v) + "/" + paren_if_negative(q) +
                        " - " + S(r) + "/" + L(u) + ".",
                    ans, prefix + "$2 argc1 denom $3 argc1 denom argc2 lcm", 4};
        }
        case 1:
            return {head + "Calculate the greatest common divisor of " + L(v) + " and " + L(u) + ".",
                    sym::gcd(Integer(v0), Integer(u0)).get_str(), prefix + "$2 $3 argc2 gcd", 4};
        default: {
            const long k = d.num(2, 9, true);
            const std::string e = S(k) + "*" + L(v) + " - " + L(u);
            return {head + "What is " + e + "?", S(I(k * v0 - u0)), prefix + "$2", 3};
        }
    }
}

Draft compose_remainder(Draw& d) {
    const auto names = d.letters(1);
    const char u = names[0];
    long u0 = 0;
    Binding first;
    do {
        first = bind_part(d, u, u0);
    } while (u0 <= 0);
    const long n = d.pick(2, 9);
    return {first.text + " What is the remainder when " + L(u) + " is divided by " + S(n) + "?",
            sym::mod(Integer(u0), Integer(n)).get_str(), first.program + " $1 $2 argc2 mod", 3};
}

Draft compose_poly_eval(Draw& d) {
    const auto names = d.letters(3);
    const char u = names[0], f = names[1], x = names[2];
    long u0 = 0;
    const Binding first = bind_part(d, u, u0);
    const Expr body = sym::add(polynomial(d, x, 1, 2, 9), sym::mul(V(u), sym::pow(V(x), d.pick(1, 2))));
    const long v = d.num(1, 6, true);
    const Expr value = sym::substitute(sym::substitute(body, u, I(u0)), x, I(v));
    const std::string ask = d.coin() ? "What is " + L(f) + "(" + S(v) + ")?" : "Calculate " + L(f) + "(" + S(v) + ").";
    return {first.text + " Let " + L(f) + "(" + L(x) + ") = " + S(body) + ". " + ask, S(value),
            first.program + " $1 argc1 define $2", 3};
}

Draft compose_diff(Draw& d) {
    const auto names = d.letters(2);
    const char u = names[0], x = names[1];
    long u0 = 0;
    const Binding first = bind_part(d, u, u0);
    const Expr e = sym::add(sym::mul(V(u), sym::pow(V(x), d.pick(2, 4))), polynomial(d, x, 1, 3, 9));
    const Expr answer = sym::diff(sym::substitute(e, u, I(u0)), x);
    return {first.text + " Differentiate " + S(e) + " with respect to " + L(x) + ".", S(answer),
            first.program + " $1 $2 argc2 diff", 3};
}

struct TemplateDef {
    TemplateInfo info;
    Maker make;
};

const std::vector<TemplateDef>& table() {
    static const std::vector<TemplateDef> t = {
        {{"arith_mixed", "two-operand arithmetic in words, mixed expressions, remainders"}, arith_mixed},
        {{"numbers_lcm", "common denominators and least common multiples"}, numbers_lcm},
        {{"numbers_gcd", "greatest common divisors"}, numbers_gcd},
        {{"polynomial_eval", "evaluate polynomials and defined functions"}, polynomial_eval},
        {{"calculus_differentiate", "first and higher derivatives of polynomials"}, calculus_differentiate},
        {{"polynomial_expand", "expand products of linear factors"}, polynomial_expand},
        {{"linear_1d", "linear equations and two-variable systems"}, linear_1d},
        {{"base_conversion", "convert integers to and from other bases"}, base_conversion},
        {{"number_round", "round decimals"}, number_round},
        {{"numbers_sort", "sort lists, largest and smallest values"}, numbers_sort},
        {{"compose_2", "a binding followed by a simple question"}, compose_2},
        {{"compose_3", "linear system, binding, then a question over both"}, compose_3},
        {{"compose_remainder", "a binding, then a remainder"}, compose_remainder},
        {{"compose_poly_eval", "a binding used inside a function definition"}, compose_poly_eval},
        {{"compose_diff", "a binding used as a coefficient, then a derivative"}, compose_diff},
    };
    return t;
}

const TemplateDef* find(std::string_view name) {
    for (const auto& t : table()) {
        if (t.info.name == name) return &t;
    }
    return nullptr;
}

std::string bind_slots(const std::string& skeleton, const tok::TokenizedProblem& p) {
    std::string out;
    for (std::size_t i = 0; i < skeleton.size(); ++i) {
        if (skeleton[i] != '$') {
            out += skeleton[i];
            continue;
        }
        std::size_t k = 0;
        while (i + 1 < skeleton.size() && std::isdigit(static_cast<unsigned char>(skeleton[i + 1]))) {
            k = k * 10 + static_cast<std::size_t>(skeleton[++i] - '0');
        }
        out += "pos" + std::to_string(p.slots.at(k).first_raw);
    }
    return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::string_view name) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : name) h = (h ^ c) * 1099511628211ull;
    return seed * 0x9e3779b97f4a7c15ull ^ h;
}

}  // namespace

std::span<const TemplateInfo> templates() {
    static const std::vector<TemplateInfo> infos = [] {
        std::vector<TemplateInfo> out;
        for (const auto& t : table()) out.push_back(t.info);
        return out;
    }();
    return infos;
}

bool is_template(std::string_view name) { return find(name) != nullptr; }

std::vector<Problem> generate(std::string_view module, Difficulty difficulty, std::uint64_t seed, std::size_t n) {
    const TemplateDef* t = find(module);
    if (!t) throw std::invalid_argument("unknown template: " + std::string(module));
    std::mt19937_64 rng(mix_seed(seed, module));
    const auto& registry = dsl::Registry::builtin();
    std::vector<Problem> out;
    out.reserve(n);
    while (out.size() < n) {
        Draw draw(rng, difficulty);
        const Draft draft = t->make(draw);
        auto tokens = tok::tokenize(draft.question);
        if (tokens.slots.size() != draft.slots) {
            throw std::logic_error("template " + std::string(module) + " produced " +
                                   std::to_string(tokens.slots.size()) + " slots: " + draft.question);
        }
        Problem p;
        p.question = draft.question;
        p.answer = draft.answer;
        p.module = std::string(module);
        p.difficulty = difficulty;
        p.range_ratio = draw.ratio();
        p.hidden_program = dsl::parse_program(bind_slots(draft.program, tokens), registry);
        const auto result = dsl::execute(*p.hidden_program, tokens, registry);
        if (!result.ok() || *result.value != p.answer) {
            throw std::logic_error("hidden program disagrees with the answer for: " + p.question + " (" +
                                   (result.ok() ? *result.value : std::string(dsl::to_string(result.error))) +
                                   " vs " + p.answer + ")");
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Problem> generate_mix(std::span<const std::string> modules, Difficulty difficulty, std::uint64_t seed,
                                  std::size_t n) {
    if (modules.empty()) return {};
    std::vector<std::vector<Problem>> per;
    for (std::size_t m = 0; m < modules.size(); ++m) {
        const std::size_t count = n / modules.size() + (m < n % modules.size() ? 1 : 0);
        per.push_back(generate(modules[m], difficulty, seed, count));
    }
    std::vector<Problem> out;
    out.reserve(n);
    for (std::size_t i = 0; out.size() < n; ++i) {
        auto& bucket = per[i % modules.size()];
        const std::size_t k = i / modules.size();
        if (k < bucket.size()) out.push_back(std::move(bucket[k]));
    }
    return out;
}

}  // namespace abducto::corpus
