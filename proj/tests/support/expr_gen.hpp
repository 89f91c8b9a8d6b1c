#pragma once

// Test-side generators and oracles for kernel properties. Nothing here calls
// into the kernel's algebra: trees are built with the raw make_* constructors
// and numeric evaluation is a plain double walk.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "abducto/symkernel/expr.hpp"

namespace abducto::testing {

using sym::Expr;

class ExprGen {
public:
    explicit ExprGen(std::uint64_t seed, std::vector<char> symbols = {'x', 'y', 'z'})
        : rng_(seed), symbols_(std::move(symbols)) {}

    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
    }

    Expr leaf() {
        switch (integer(0, 3)) {
            case 0:
                return Expr::integer(integer(-9, 9));
            case 1: {
                const long den = static_cast<long>(integer(2, 7));
                return Expr::rational(static_cast<long>(integer(-9, 9)), den);
            }
            default:
                return Expr::symbol(symbols_[integer(0, static_cast<std::int64_t>(symbols_.size()) - 1)]);
        }
    }

    // Raw (non-canonical) tree; powers use exponents 0..3 and, when
    // allow_negative, -1 on symbol bases.
    Expr tree(int depth, bool allow_negative = false) {
        if (depth <= 0 || integer(0, 4) == 0) return leaf();
        switch (integer(0, 2)) {
            case 0: {
                std::vector<Expr> kids;
                for (int i = 0, n = static_cast<int>(integer(2, 3)); i < n; ++i) {
                    kids.push_back(tree(depth - 1, allow_negative));
                }
                return Expr::make_sum(std::move(kids));
            }
            case 1: {
                std::vector<Expr> kids;
                for (int i = 0, n = static_cast<int>(integer(2, 3)); i < n; ++i) {
                    kids.push_back(tree(depth - 1, allow_negative));
                }
                return Expr::make_product(std::move(kids));
            }
            default: {
                if (allow_negative && integer(0, 3) == 0) {
                    return Expr::make_power(
                        Expr::symbol(symbols_[integer(0, static_cast<std::int64_t>(symbols_.size()) - 1)]),
                        Expr::integer(-static_cast<long>(integer(1, 2))));
                }
                return Expr::make_power(tree(depth - 1, allow_negative),
                                        Expr::integer(static_cast<long>(integer(0, 3))));
            }
        }
    }

    // Raw univariate polynomial sum of c_k * sym**k, degree <= max_degree.
    Expr polynomial(char sym, int max_degree, std::vector<long>* coeffs_out = nullptr) {
        std::vector<Expr> terms;
        std::vector<long> coeffs;
        const int deg = static_cast<int>(integer(0, max_degree));
        for (int k = 0; k <= deg; ++k) {
            const long c = static_cast<long>(integer(-5, 5));
            coeffs.push_back(c);
            terms.push_back(Expr::make_product(
                {Expr::integer(c), Expr::make_power(Expr::symbol(sym), Expr::integer(k))}));
        }
        if (coeffs_out) *coeffs_out = coeffs;
        return Expr::make_sum(std::move(terms));
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
    std::vector<char> symbols_;
};

// Double-precision evaluation of any tree (raw or canonical) with every
// symbol bound to `value`.
inline double eval_double(const Expr& e, double value) {
    switch (e.kind()) {
        case Expr::Kind::Integer:
        case Expr::Kind::Rational:
            return e.number().get_d();
        case Expr::Kind::Symbol:
            return value;
        case Expr::Kind::Sum: {
            double s = 0;
            for (const auto& t : e.operands()) s += eval_double(t, value);
            return s;
        }
        case Expr::Kind::Product: {
            double p = 1;
            for (const auto& f : e.operands()) p *= eval_double(f, value);
            return p;
        }
        case Expr::Kind::Power:
            return std::pow(eval_double(e.base(), value), eval_double(e.exponent(), value));
    }
    return 0;
}

// Euclid on machine integers.
inline std::int64_t euclid_gcd(std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        const std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Trial division on machine integers.
inline std::vector<std::pair<std::int64_t, int>> trial_division(std::int64_t n) {
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

}  // namespace abducto::testing
