#include "abducto/symkernel/expr.hpp"

#include <algorithm>
#include <functional>

#include "abducto/symkernel/error.hpp"

namespace abducto::sym {

struct Expr::Node {
    Kind kind;
    Rational value;  // Integer / Rational
    char sym = 0;    // Symbol
    std::vector<Expr> kids;  // Sum terms, Product factors, Power {base, exponent}
    std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_rational(const Rational& q) {
    std::size_t h = std::hash<long>{}(mpz_get_si(q.get_num_mpz_t()));
    h = mix(h, mpz_size(q.get_num_mpz_t()));
    h = mix(h, std::hash<long>{}(mpz_get_si(q.get_den_mpz_t())));
    return h;
}

int kind_rank(Expr::Kind k) {
    switch (k) {
        case Expr::Kind::Integer:
        case Expr::Kind::Rational:
            return 0;
        case Expr::Kind::Symbol:
            return 1;
        case Expr::Kind::Power:
            return 2;
        case Expr::Kind::Product:
            return 3;
        case Expr::Kind::Sum:
            return 4;
    }
    return 5;
}

std::shared_ptr<const Expr::Node> make_number_node(const Rational& v) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = v.get_den() == 1 ? Expr::Kind::Integer : Expr::Kind::Rational;
    n->value = v;
    n->hash = mix(17, hash_rational(v));
    return n;
}

const std::shared_ptr<const Expr::Node>& zero_node() {
    static const std::shared_ptr<const Expr::Node> node = make_number_node(Rational(0));
    return node;
}
}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr Expr::integer(const Integer& value) {
    if (value == 0) return Expr();
    return Expr(make_number_node(Rational(value)));
}

Expr Expr::integer(long value) { return integer(Integer(value)); }

Expr Expr::rational(const Rational& value) {
    Rational v = value;
    v.canonicalize();
    if (v == 0) return Expr();
    return Expr(make_number_node(v));
}

Expr Expr::rational(long num, long den) {
    if (den == 0) raise(KernelErrc::DivisionByZero, "rational literal with zero denominator");
    return rational(Rational(num, den));
}

Expr Expr::symbol(char name) {
    if (name < 'a' || name > 'z') raise(KernelErrc::MalformedExpression, "symbol must be a-z");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Symbol;
    n->sym = name;
    n->hash = mix(29, static_cast<std::size_t>(name));
    return Expr(n);
}

namespace {
std::shared_ptr<Expr::Node> compound(Expr::Kind kind, std::vector<Expr> kids) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = kind;
    std::size_t h = static_cast<std::size_t>(kind) * 1000003u;
    for (const auto& k : kids) h = mix(h, k.hash());
    n->hash = h;
    n->kids = std::move(kids);
    return n;
}
}  // namespace

Expr Expr::make_sum(std::vector<Expr> terms) { return Expr(compound(Kind::Sum, std::move(terms))); }

Expr Expr::make_product(std::vector<Expr> factors) {
    return Expr(compound(Kind::Product, std::move(factors)));
}

Expr Expr::make_power(Expr base, Expr exponent) {
    std::vector<Expr> kids;
    kids.reserve(2);
    kids.push_back(std::move(base));
    kids.push_back(std::move(exponent));
    return Expr(compound(Kind::Power, std::move(kids)));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }

bool Expr::is_number() const noexcept {
    return node_->kind == Kind::Integer || node_->kind == Kind::Rational;
}

bool Expr::is_integer() const noexcept { return node_->kind == Kind::Integer; }

bool Expr::is_zero() const noexcept { return is_integer() && node_->value == 0; }

bool Expr::is_one() const noexcept { return is_integer() && node_->value == 1; }

const Rational& Expr::number() const noexcept { return node_->value; }

char Expr::name() const noexcept { return node_->sym; }

std::span<const Expr> Expr::operands() const noexcept {
    if (node_->kind == Kind::Sum || node_->kind == Kind::Product) return node_->kids;
    return {};
}

const Expr& Expr::base() const noexcept { return node_->kids[0]; }

const Expr& Expr::exponent() const noexcept { return node_->kids[1]; }

std::size_t Expr::hash() const noexcept { return node_->hash; }

int compare(const Expr& a, const Expr& b) noexcept {
    if (a.same_node(b)) return 0;
    const int ra = kind_rank(a.kind());
    const int rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case Expr::Kind::Integer:
        case Expr::Kind::Rational: {
            const int c = cmp(a.number(), b.number());
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case Expr::Kind::Symbol:
            return a.name() < b.name() ? -1 : (a.name() > b.name() ? 1 : 0);
        case Expr::Kind::Power: {
            if (int c = compare(a.base(), b.base())) return c;
            return compare(a.exponent(), b.exponent());
        }
        case Expr::Kind::Sum:
        case Expr::Kind::Product: {
            auto xs = a.operands();
            auto ys = b.operands();
            const std::size_t n = std::min(xs.size(), ys.size());
            for (std::size_t i = 0; i < n; ++i) {
                if (int c = compare(xs[i], ys[i])) return c;
            }
            if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

}  // namespace abducto::sym
