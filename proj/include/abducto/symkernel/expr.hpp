#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace abducto::sym {

using Integer = mpz_class;
using Rational = mpq_class;

// Size caps that keep every kernel call bounded. Garbage programs produced by
// search routinely ask for things like 13728**13728; those fail with
// KernelErrc::ResourceLimit instead of stalling a worker.
namespace limits {
inline constexpr std::size_t kMaxTerms = 2048;
inline constexpr long kMaxSymbolicExponent = 256;
inline constexpr std::size_t kMaxNumericBits = 1u << 14;
inline constexpr std::size_t kMaxLiteralDigits = 2000;
}  // namespace limits

// Immutable expression tree. Copies share structure; every node is frozen once
// built, so Expr values may be read concurrently from any number of threads.
//
// The make_* constructors build raw, possibly non-canonical trees. All algebra
// entry points (add, mul, pow, parse_expr, ...) return canonical trees; see
// canonicalize() in algebra.hpp for the normal form.
class Expr {
public:
    enum class Kind : std::uint8_t { Integer, Rational, Symbol, Sum, Product, Power };

    Expr();  // IntegerLit(0)

    static Expr integer(const Integer& value);
    static Expr integer(long value);
    // Reduces the fraction; a denominator of 1 yields an Integer node.
    static Expr rational(const Rational& value);
    static Expr rational(long num, long den);
    static Expr symbol(char name);

    static Expr make_sum(std::vector<Expr> terms);
    static Expr make_product(std::vector<Expr> factors);
    static Expr make_power(Expr base, Expr exponent);

    Kind kind() const noexcept;
    bool is_number() const noexcept;
    bool is_integer() const noexcept;
    bool is_symbol() const noexcept { return kind() == Kind::Symbol; }
    bool is_sum() const noexcept { return kind() == Kind::Sum; }
    bool is_product() const noexcept { return kind() == Kind::Product; }
    bool is_power() const noexcept { return kind() == Kind::Power; }
    bool is_zero() const noexcept;
    bool is_one() const noexcept;

    // Numeric value; precondition is_number().
    const Rational& number() const noexcept;
    // Precondition is_symbol().
    char name() const noexcept;
    // Sum terms or Product factors; empty for other kinds.
    std::span<const Expr> operands() const noexcept;
    // Precondition is_power().
    const Expr& base() const noexcept;
    const Expr& exponent() const noexcept;

    std::size_t hash() const noexcept;
    bool same_node(const Expr& other) const noexcept { return node_ == other.node_; }

    struct Node;  // defined in expr.cpp

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// Structural total order. Numbers < symbols < powers < products < sums; numbers
// by value, symbols by name, compound nodes lexicographically by children.
int compare(const Expr& a, const Expr& b) noexcept;

inline bool operator==(const Expr& a, const Expr& b) noexcept {
    return a.same_node(b) || (a.hash() == b.hash() && compare(a, b) == 0);
}
inline bool operator<(const Expr& a, const Expr& b) noexcept { return compare(a, b) < 0; }

struct ExprHash {
    std::size_t operator()(const Expr& e) const noexcept { return e.hash(); }
};

}  // namespace abducto::sym
