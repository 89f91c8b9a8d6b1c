#include "abducto/symkernel/numbers.hpp"

#include <algorithm>

#include "abducto/symkernel/error.hpp"

namespace abducto::sym {

namespace {

const Integer& factor_cap() {
    static const Integer cap("1000000000000");
    return cap;
}

void require_tractable(const Integer& n) {
    if (abs(n) > factor_cap()) raise(KernelErrc::ResourceLimit, "integer too large to factor");
}

}  // namespace

Integer gcd(const Integer& a, const Integer& b) {
    if (a == 0 && b == 0) raise(KernelErrc::UndefinedForZero, "gcd(0, 0)");
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Integer lcm(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0) raise(KernelErrc::UndefinedForZero, "lcm with a zero argument");
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

Integer mod(const Integer& a, const Integer& b) {
    if (b == 0) raise(KernelErrc::DivisionByZero, "modulo by zero");
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Integer floordiv(const Integer& a, const Integer& b) {
    if (b == 0) raise(KernelErrc::DivisionByZero, "floor division by zero");
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Integer factorial(const Integer& n) {
    if (n < 0) raise(KernelErrc::NonPositive, "factorial of a negative number");
    if (n > 1000) raise(KernelErrc::ResourceLimit, "factorial argument too large");
    Integer out;
    mpz_fac_ui(out.get_mpz_t(), n.get_ui());
    return out;
}

Integer floor(const Rational& q) {
    Integer out;
    mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

Integer ceiling(const Rational& q) {
    Integer out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

std::string round_to(const Rational& q, long places) {
    if (places < 0 || places > 30) raise(KernelErrc::UnsupportedExpression, "places must be 0..30");
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
    // |q| * scale rounded half up, sign restored afterwards.
    const Rational scaled = abs(q) * Rational(scale);
    Integer twice = 2 * scaled.get_num() + scaled.get_den();
    Integer rounded;
    mpz_fdiv_q(rounded.get_mpz_t(), twice.get_mpz_t(), Integer(2 * scaled.get_den()).get_mpz_t());

    std::string digits = rounded.get_str();
    std::string out;
    if (places == 0) {
        out = digits;
    } else {
        if (digits.size() <= static_cast<std::size_t>(places)) {
            digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
        }
        std::string whole = digits.substr(0, digits.size() - places);
        std::string frac = digits.substr(digits.size() - places);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        out = frac.empty() ? whole : whole + "." + frac;
    }
    if (q < 0 && rounded != 0) out.insert(out.begin(), '-');
    return out;
}

std::string to_base(const Integer& n, int base) {
    if (base < 2 || base > 36) raise(KernelErrc::InvalidBase, "base must be 2..36");
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > limits::kMaxNumericBits) {
        raise(KernelErrc::ResourceLimit, "integer too large for base conversion");
    }
    // mpz_get_str uses 0-9a-z for |base| <= 36.
    return n.get_str(base);
}

Integer from_base(const std::string& digits, int base) {
    if (base < 2 || base > 36) raise(KernelErrc::InvalidBase, "base must be 2..36");
    std::size_t i = 0;
    bool negative = false;
    if (!digits.empty() && digits[0] == '-') {
        negative = true;
        i = 1;
    }
    if (i == digits.size()) raise(KernelErrc::InvalidBase, "no digits");
    if (digits.size() > limits::kMaxLiteralDigits) raise(KernelErrc::ResourceLimit, "too many digits");
    Integer value(0);
    for (; i < digits.size(); ++i) {
        const char c = digits[i];
        int d = -1;
        if (c >= '0' && c <= '9') d = c - '0';
        if (c >= 'a' && c <= 'z') d = c - 'a' + 10;
        if (c >= 'A' && c <= 'Z') d = c - 'A' + 10;
        if (d < 0 || d >= base) {
            raise(KernelErrc::InvalidBase, std::string("digit '") + c + "' invalid in base " +
                                               std::to_string(base));
        }
        value = value * base + d;
    }
    return negative ? Integer(-value) : value;
}

std::vector<Expr> sort_values(std::vector<Expr> xs, bool ascending) {
    for (const auto& x : xs) {
        if (!x.is_number()) raise(KernelErrc::NonNumeric, "sort requires numeric values");
    }
    std::stable_sort(xs.begin(), xs.end(), [ascending](const Expr& a, const Expr& b) {
        return ascending ? a.number() < b.number() : a.number() > b.number();
    });
    return xs;
}

std::vector<std::pair<Integer, unsigned>> factorint(const Integer& n) {
    if (n < 1) raise(KernelErrc::NonPositive, "factorint requires a positive integer");
    require_tractable(n);
    std::vector<std::pair<Integer, unsigned>> out;
    unsigned long long m = mpz_get_ui(n.get_mpz_t());
    static_assert(sizeof(unsigned long) >= 8, "64-bit unsigned long expected");
    for (unsigned long long p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e) out.emplace_back(Integer(static_cast<unsigned long>(p)), e);
    }
    if (m > 1) out.emplace_back(Integer(static_cast<unsigned long>(m)), 1u);
    return out;
}

bool is_prime(const Integer& n) {
    if (n < 2) return false;
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 4096) raise(KernelErrc::ResourceLimit, "integer too large");
    // Deterministic outcome: GMP runs BPSW plus fixed-seed Miller-Rabin rounds.
    return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

std::vector<Integer> divisors(const Integer& n) {
    if (n < 1) raise(KernelErrc::NonPositive, "divisors requires a positive integer");
    std::vector<Integer> out{Integer(1)};
    for (const auto& [p, e] : factorint(n)) {
        const std::size_t existing = out.size();
        Integer power(1);
        for (unsigned k = 0; k < e; ++k) {
            power *= p;
            for (std::size_t i = 0; i < existing; ++i) out.push_back(out[i] * power);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace abducto::sym
