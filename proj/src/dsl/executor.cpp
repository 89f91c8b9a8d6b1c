#include "abducto/dsl/executor.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <new>
#include <stdexcept>

#include "abducto/symkernel/algebra.hpp"
#include "abducto/symkernel/parse.hpp"

namespace abducto::dsl {

using sym::KernelErrc;
using sym::KernelError;

namespace {

// Thrown by the resolver while pre-parsing without an environment.
struct NeedsEnv {};

constexpr std::array<std::pair<std::string_view, int>, 20> kOrdinalNumbers = {{
    {"first", 1},       {"second", 2},     {"third", 3},        {"fourth", 4},
    {"fifth", 5},       {"sixth", 6},      {"seventh", 7},      {"eighth", 8},
    {"ninth", 9},       {"tenth", 10},     {"eleventh", 11},    {"twelfth", 12},
    {"thirteenth", 13}, {"fourteenth", 14}, {"fifteenth", 15},  {"sixteenth", 16},
    {"seventeenth", 17}, {"eighteenth", 18}, {"nineteenth", 19}, {"twentieth", 20},
}};

std::optional<Expr> ordinal_value(std::string_view text) {
    std::string w(text);
    for (auto& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (const auto& [name, n] : kOrdinalNumbers) {
        if (w == name) return Expr::integer(static_cast<long>(n));
    }
    if (w == "square" || w == "double") return Expr::integer(2L);
    if (w == "cube" || w == "triple") return Expr::integer(3L);
    if (w == "half") return Expr::rational(1, 2);
    if (w == "quarter") return Expr::rational(1, 4);
    return std::nullopt;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_top_level(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == sep && depth == 0) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(s.substr(start)));
    return out;
}

bool is_letter(char c) { return c >= 'a' && c <= 'z'; }

// Digit strings in other bases ("1a3") do not parse as expressions; they are
// kept as text for from_base.
bool looks_like_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c); }) &&
           std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

sym::CallResolver resolver_for(const Env& env) {
    return [&env](char name, const Expr& arg) -> std::optional<Expr> {
        const FunctionDef* f = env.function(name);
        if (!f) return std::nullopt;
        return sym::substitute(f->body, f->param, arg);
    };
}

Expr parse_piece(std::string_view piece, const sym::CallResolver& resolve) {
    if (piece.empty()) sym::raise(KernelErrc::MalformedExpression, "empty item");
    return sym::parse_expr(piece, resolve);
}

Value parse_raw(std::string_view text, const sym::CallResolver& resolve) {
    text = trim(text);
    if (auto n = ordinal_value(text)) return *n;

    const auto pieces = split_top_level(text, ',');
    const bool has_eq = std::any_of(pieces.begin(), pieces.end(),
                                    [](std::string_view p) { return p.find('=') != std::string_view::npos; });
    if (has_eq) {
        if (pieces.size() == 1) {
            // f(x) = body
            std::string_view p = pieces[0];
            if (p.size() > 5 && is_letter(p[0]) && p[1] == '(' && is_letter(p[2]) && p[3] == ')') {
                std::string_view rest = trim(p.substr(4));
                if (!rest.empty() && rest.front() == '=') {
                    return FunctionDef{p[0], p[2], parse_piece(trim(rest.substr(1)), resolve)};
                }
            }
        }
        EquationSet set;
        for (std::string_view p : pieces) {
            const auto sides = split_top_level(p, '=');
            if (sides.size() != 2) sym::raise(KernelErrc::MalformedExpression, "expected one '='");
            set.equations.push_back({parse_piece(sides[0], resolve), parse_piece(sides[1], resolve)});
        }
        return set;
    }
    if (pieces.size() > 1) {
        ExprList list;
        for (std::string_view p : pieces) list.items.push_back(parse_piece(p, resolve));
        return list;
    }
    try {
        return parse_piece(text, resolve);
    } catch (const KernelError& e) {
        if (e.code() == KernelErrc::MalformedExpression && looks_like_digits(text)) return Text{std::string(text)};
        throw;
    }
}

ExecFailure to_failure(const KernelError& e) {
    if (e.code() == KernelErrc::MalformedExpression) return {ExecErrc::ParseFailure, e.code()};
    return {ExecErrc::Kernel, e.code()};
}

}  // namespace

std::string_view to_string(ExecErrc code) noexcept {
    switch (code) {
        case ExecErrc::Kernel: return "Kernel";
        case ExecErrc::ParseFailure: return "ParseFailure";
        case ExecErrc::BindFailure: return "BindFailure";
        case ExecErrc::TypeMismatch: return "TypeMismatch";
        case ExecErrc::StackUnderflow: return "StackUnderflow";
        case ExecErrc::FuelExhausted: return "FuelExhausted";
        case ExecErrc::EmptyStack: return "EmptyStack";
    }
    return "?";
}

Value parse_slot(std::string_view text, const Env& env) {
    return apply_env(parse_raw(text, resolver_for(env)), env);
}

BoundProblem::BoundProblem(tok::TokenizedProblem problem) : problem_(std::move(problem)) {
    parsed_.resize(problem_.tokens.size());
    const sym::CallResolver needs_env = [](char, const Expr&) -> std::optional<Expr> { throw NeedsEnv{}; };
    for (const auto& slot : problem_.slots) {
        for (std::size_t i = slot.first_raw; i <= slot.last_raw; ++i) {
            Parsed& p = parsed_[i];
            p.text = i == slot.first_raw ? slot.text : problem_.tokens[i].stripped;
            try {
                p.value = parse_raw(p.text, needs_env);
                p.state = Parsed::State::Ok;
            } catch (const NeedsEnv&) {
                p.state = Parsed::State::NeedsEnv;
            } catch (const KernelError& e) {
                const ExecFailure f = to_failure(e);
                p.state = Parsed::State::Failed;
                p.error = f.code;
                p.kernel = f.kernel;
            }
        }
    }
}

Value BoundProblem::value_at(std::size_t i, const Env& env) const {
    if (i >= parsed_.size()) throw ExecFailure{ExecErrc::BindFailure};
    const Parsed& p = parsed_[i];
    switch (p.state) {
        case Parsed::State::Word:
            throw ExecFailure{ExecErrc::ParseFailure};
        case Parsed::State::Ok:
            return apply_env(p.value, env);
        case Parsed::State::Failed:
            throw ExecFailure{p.error, p.kernel};
        case Parsed::State::NeedsEnv:
            try {
                return parse_slot(p.text, env);
            } catch (const KernelError& e) {
                throw to_failure(e);
            }
    }
    throw ExecFailure{ExecErrc::ParseFailure};
}

Machine::Machine(const BoundProblem& problem, const Registry& registry, std::size_t fuel)
    : problem_(&problem), registry_(&registry), fuel_(fuel) {
    stack_.reserve(8);
}

bool Machine::run(std::span<const Operator> ops, std::size_t base) {
    for (std::size_t j = 0; j < ops.size() && !failure_; ++j) {
        const std::size_t index = base + j;
        const Operator& op = ops[j];
        if (fuel_ == 0) {
            failure_.emplace(ExecFailure{ExecErrc::FuelExhausted}, index);
            break;
        }
        --fuel_;
        try {
            switch (op.kind) {
                case Operator::Kind::Pos:
                    stack_.push_back(problem_->value_at(op.value, env_));
                    break;
                case Operator::Kind::Argc:
                    pending_argc_ = op.value;
                    break;
                case Operator::Kind::Math: {
                    if (!pending_argc_ || stack_.size() < *pending_argc_ || op.value >= registry_->size()) {
                        throw ExecFailure{ExecErrc::StackUnderflow};
                    }
                    const std::size_t k = *pending_argc_;
                    pending_argc_.reset();
                    const OpEntry& entry = registry_->at(op.value);
                    Value result = entry.fn(std::span<const Value>(stack_.data() + stack_.size() - k, k), env_);
                    stack_.resize(stack_.size() - k);
                    stack_.push_back(std::move(result));
                    break;
                }
                case Operator::Kind::Convert: {
                    if (stack_.empty() || pending_argc_ || op.value >= registry_->size()) {
                        throw ExecFailure{ExecErrc::StackUnderflow};
                    }
                    const OpEntry& entry = registry_->at(op.value);
                    Value result = entry.fn(std::span<const Value>(&stack_.back(), 1), env_);
                    stack_.back() = std::move(result);
                    break;
                }
            }
        } catch (const ExecFailure& f) {
            failure_.emplace(f, index);
        } catch (const KernelError& e) {
            failure_.emplace(to_failure(e), index);
        } catch (const std::bad_alloc&) {
            failure_.emplace(ExecFailure{ExecErrc::Kernel, KernelErrc::ResourceLimit}, index);
        } catch (const std::length_error&) {
            failure_.emplace(ExecFailure{ExecErrc::Kernel, KernelErrc::ResourceLimit}, index);
        }
        if (trace_ && !failure_) trace_(TraceStep{index, &op, top()});
    }
    return !failure_;
}

ExecOutcome Machine::outcome() const {
    ExecOutcome out;
    if (failure_) {
        out.error = failure_->first.code;
        out.kernel = failure_->first.kernel;
        out.failing_index = failure_->second;
        return out;
    }
    if (stack_.empty() || pending_argc_) {
        out.error = stack_.empty() ? ExecErrc::EmptyStack : ExecErrc::StackUnderflow;
        return out;
    }
    out.value = render(stack_.back());
    return out;
}

ExecOutcome execute(const Program& p, const BoundProblem& problem, const Registry& registry, std::size_t fuel) {
    Machine m(problem, registry, fuel);
    m.run(p.ops);
    ExecOutcome out = m.outcome();
    if (!out.ok() && !m.failed()) out.failing_index = p.ops.size();
    return out;
}

ExecOutcome execute(const Program& p, const tok::TokenizedProblem& problem, const Registry& registry,
                    std::size_t fuel) {
    return execute(p, BoundProblem(problem), registry, fuel);
}

}  // namespace abducto::dsl
