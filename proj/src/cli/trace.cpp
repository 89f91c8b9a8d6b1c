#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "abducto/cli/cli.hpp"
#include "abducto/symkernel/algebra.hpp"
#include "abducto/symkernel/error.hpp"
#include "abducto/symkernel/linear.hpp"
#include "abducto/symkernel/numbers.hpp"
#include "abducto/symkernel/print.hpp"

namespace abducto::cli {

namespace {

using sym::Expr;
using sym::Integer;
using sym::Rational;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    long num(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
    char var() { return "xyz"[num(0, 2)]; }

    Expr coefficient() {
        if (num(0, 3) == 0) {
            long den = num(2, 9);
            return Expr::rational(num(-9, 9), den);
        }
        return Expr::integer(num(-12, 12));
    }

    // Polynomial in up to two variables with a handful of terms.
    Expr poly() {
        Expr out = Expr::integer(0);
        for (long t = 0, n = num(1, 4); t < n; ++t) {
            Expr term = coefficient();
            for (long f = 0, m = num(0, 2); f < m; ++f) term = sym::mul(term, sym::pow(Expr::symbol(var()), num(1, 3)));
            out = sym::add(out, term);
        }
        return out;
    }

    Integer integer(long lo, long hi) { return Integer(num(lo, hi)); }

private:
    std::mt19937_64 rng_;
};

std::string S(const Expr& e) { return sym::to_answer_string(e); }
std::string S(const Integer& n) { return n.get_str(); }

}  // namespace

std::string emit_trace(std::uint64_t seed, std::size_t count) {
    Gen g(seed);
    using Args = std::vector<std::string>;
    // Each entry draws arguments and returns the printed result.
    struct Call {
        const char* op;
        std::function<std::string(Gen&, Args&)> run;
    };
    const std::vector<Call> calls = {
        {"add", [](Gen& g, Args& a) { Expr x = g.poly(), y = g.poly(); a = {S(x), S(y)}; return S(sym::add(x, y)); }},
        {"sub", [](Gen& g, Args& a) { Expr x = g.poly(), y = g.poly(); a = {S(x), S(y)}; return S(sym::sub(x, y)); }},
        {"mul", [](Gen& g, Args& a) { Expr x = g.poly(), y = g.poly(); a = {S(x), S(y)}; return S(sym::mul(x, y)); }},
        {"div", [](Gen& g, Args& a) {
             Expr x = g.poly(), y = g.num(0, 2) ? g.coefficient() : Expr::symbol(g.var());
             a = {S(x), S(y)};
             return S(sym::div(x, y));
         }},
        {"pow", [](Gen& g, Args& a) {
             Expr x = g.poly();
             long n = g.num(0, 3);
             a = {S(x), std::to_string(n)};
             return S(sym::pow(x, n));
         }},
        {"diff", [](Gen& g, Args& a) {
             Expr x = g.poly();
             char v = g.var();
             long n = g.num(1, 3);
             a = {S(x), std::string(1, v), std::to_string(n)};
             return S(sym::diff(x, v, n));
         }},
        {"subs", [](Gen& g, Args& a) {
             Expr x = g.poly(), val = g.num(0, 1) ? g.coefficient() : g.poly();
             char v = g.var();
             a = {S(x), std::string(1, v), S(val)};
             return S(sym::substitute(x, v, val));
         }},
        {"gcd", [](Gen& g, Args& a) {
             Integer x = g.integer(-5000, 5000), y = g.integer(-5000, 5000);
             a = {S(x), S(y)};
             return S(sym::gcd(x, y));
         }},
        {"lcm", [](Gen& g, Args& a) {
             Integer x = g.integer(-5000, 5000), y = g.integer(-5000, 5000);
             a = {S(x), S(y)};
             return S(sym::lcm(x, y));
         }},
        {"denom", [](Gen& g, Args& a) {
             Expr x = Expr::rational(g.num(-2000, 2000), g.num(1, 2000));
             a = {S(x)};
             return S(sym::denom(x));
         }},
        {"numer", [](Gen& g, Args& a) {
             Expr x = Expr::rational(g.num(-2000, 2000), g.num(1, 2000));
             a = {S(x)};
             return S(sym::numer(x));
         }},
        {"round", [](Gen& g, Args& a) {
             Expr x = Expr::rational(g.num(-200000, 200000), g.num(1, 999));
             long p = g.num(0, 4);
             a = {S(x), std::to_string(p)};
             return sym::round_to(x.number(), p);
         }},
        {"to_base", [](Gen& g, Args& a) {
             Integer n = g.integer(-100000, 100000);
             int b = static_cast<int>(g.num(2, 36));
             a = {S(n), std::to_string(b)};
             return sym::to_base(n, b);
         }},
        {"from_base", [](Gen& g, Args& a) {
             int b = static_cast<int>(g.num(2, 36));
             std::string digits = sym::to_base(g.integer(0, 100000), b);
             a = {digits, std::to_string(b)};
             return S(sym::from_base(digits, b));
         }},
        {"factorint", [](Gen& g, Args& a) {
             Integer n = g.integer(1, 200000);
             a = {S(n)};
             std::string out = "{";
             for (const auto& [p, e] : sym::factorint(n)) {
                 if (out.size() > 1) out += ", ";
                 out += p.get_str() + ": " + std::to_string(e);
             }
             return out + "}";
         }},
        {"is_prime", [](Gen& g, Args& a) {
             Integer n = g.integer(-10, 100000);
             a = {S(n)};
             return std::string(sym::is_prime(n) ? "True" : "False");
         }},
        {"solve", [](Gen& g, Args& a) {
             // a1*x + b1*y = c1, a2*x + b2*y = c2
             std::vector<std::pair<Expr, Expr>> eqs;
             for (int i = 0; i < 2; ++i) {
                 Expr lhs = sym::add(sym::mul(Expr::integer(g.num(-9, 9)), Expr::symbol('x')),
                                     sym::mul(Expr::integer(g.num(-9, 9)), Expr::symbol('y')));
                 eqs.emplace_back(lhs, Expr::integer(g.num(-50, 50)));
             }
             a = {S(eqs[0].first) + " = " + S(eqs[0].second), S(eqs[1].first) + " = " + S(eqs[1].second)};
             const auto sol = sym::solve_linear(sym::LinearSystem::from_equations(eqs));
             std::string out;
             for (const auto& [v, e] : sol) {
                 if (!out.empty()) out += ", ";
                 out += std::string(1, v) + " = " + S(e);
             }
             return out;
         }},
    };

    std::string out;
    for (std::size_t i = 0; i < count; ++i) {
        const Call& c = calls[static_cast<std::size_t>(g.num(0, static_cast<long>(calls.size()) - 1))];
        Args args;
        nlohmann::ordered_json j;
        j["id"] = i;
        j["op"] = c.op;
        try {
            const std::string r = c.run(g, args);
            j["args"] = args;
            j["result"] = r;
        } catch (const sym::KernelError& e) {
            j["args"] = args;
            j["result"] = nullptr;
            j["error"] = std::string(sym::to_string(e.code()));
        }
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace abducto::cli
