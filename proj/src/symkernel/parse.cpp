#include "abducto/symkernel/parse.hpp"

#include <cctype>
#include <string>

#include "abducto/symkernel/algebra.hpp"
#include "abducto/symkernel/error.hpp"

namespace abducto::sym {

namespace {

class Parser {
public:
    Parser(std::string_view text, const CallResolver* resolver)
        : text_(text), resolver_(resolver) {}

    Expr parse() {
        skip_space();
        if (pos_ == text_.size()) fail("empty expression");
        Expr e = expression();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        raise(KernelErrc::MalformedExpression,
              why + " at offset " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool peek_pow() {
        skip_space();
        return pos_ + 1 < text_.size() && text_[pos_] == '*' && text_[pos_ + 1] == '*';
    }

    Expr expression() {
        std::vector<Expr> terms;
        terms.push_back(term());
        for (;;) {
            if (peek('+')) {
                ++pos_;
                terms.push_back(term());
            } else if (peek('-')) {
                ++pos_;
                terms.push_back(neg(term()));
            } else {
                break;
            }
        }
        return terms.size() == 1 ? terms.front() : add_all(terms);
    }

    Expr term() {
        Expr acc = unary();
        for (;;) {
            if (peek_pow()) fail("misplaced '**'");
            if (peek('*')) {
                ++pos_;
                acc = mul(acc, unary());
            } else if (peek('/')) {
                ++pos_;
                acc = div(acc, unary());
            } else {
                return acc;
            }
        }
    }

    Expr unary() {
        if (peek('-')) {
            ++pos_;
            return neg(unary());
        }
        if (peek('+')) {
            ++pos_;
            return unary();
        }
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (peek_pow()) {
            pos_ += 2;
            Expr exponent = unary();
            return pow(base, exponent);
        }
        return base;
    }

    Expr atom() {
        skip_space();
        if (pos_ == text_.size()) fail("missing operand");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            if (peek(')')) fail("empty parentheses");
            Expr inner = expression();
            if (!peek(')')) fail("unbalanced parentheses");
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (c >= 'a' && c <= 'z') return symbol_or_call();
        fail("unsupported token '" + std::string(1, c) + "'");
    }

    Expr number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string digits(text_.substr(start, pos_ - start));
        std::string fraction;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            const std::size_t fstart = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            fraction = std::string(text_.substr(fstart, pos_ - fstart));
            if (digits.empty() && fraction.empty()) fail("lone '.'");
        }
        if (digits.size() + fraction.size() > limits::kMaxLiteralDigits) {
            raise(KernelErrc::ResourceLimit, "numeric literal too long");
        }
        if (pos_ < text_.size() &&
            (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '(')) {
            fail("implicit multiplication is not supported");
        }
        Integer whole(digits.empty() ? std::string("0") : digits, 10);
        if (fraction.empty()) return Expr::integer(whole);
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, fraction.size());
        Integer frac(fraction, 10);
        return Expr::rational(Rational(whole * scale + frac, scale));
    }

    Expr symbol_or_call() {
        const char name = text_[pos_++];
        if (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
            fail("multi-letter identifiers are not symbols");
        }
        if (pos_ < text_.size() && text_[pos_] == '(') {
            if (resolver_ == nullptr) fail("function call syntax");
            ++pos_;
            Expr arg = expression();
            if (!peek(')')) fail("unbalanced parentheses");
            ++pos_;
            auto value = (*resolver_)(name, arg);
            if (!value) fail(std::string("unknown function '") + name + "'");
            return *value;
        }
        return Expr::symbol(name);
    }

    std::string_view text_;
    const CallResolver* resolver_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text, nullptr).parse(); }

Expr parse_expr(std::string_view text, const CallResolver& resolver) {
    return Parser(text, &resolver).parse();
}

}  // namespace abducto::sym
