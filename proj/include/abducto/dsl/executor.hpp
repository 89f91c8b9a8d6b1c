#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abducto/dsl/program.hpp"
#include "abducto/dsl/registry.hpp"
#include "abducto/dsl/value.hpp"
#include "abducto/symkernel/error.hpp"
#include "abducto/tokenizer/tokenizer.hpp"

namespace abducto::dsl {

inline constexpr std::size_t kDefaultFuel = 512;

enum class ExecErrc {
    Kernel,          // see ExecOutcome::kernel
    ParseFailure,    // Pos on a word token or on text that is not an expression
    BindFailure,     // Pos index past the last token
    TypeMismatch,    // e.g. arithmetic on a list
    StackUnderflow,  // only reachable by unvalidated programs
    FuelExhausted,
    EmptyStack,
};

std::string_view to_string(ExecErrc code) noexcept;

struct ExecOutcome {
    std::optional<std::string> value;  // rendered stack top on success
    ExecErrc error = ExecErrc::EmptyStack;
    sym::KernelErrc kernel = sym::KernelErrc::MalformedExpression;
    std::size_t failing_index = 0;

    bool ok() const noexcept { return value.has_value(); }
};

// A tokenized problem with every Expression token pre-parsed, so executing a
// program never re-parses slot text unless definitions from the environment
// have to be resolved. Immutable after construction.
class BoundProblem {
public:
    explicit BoundProblem(tok::TokenizedProblem problem);

    const tok::TokenizedProblem& problem() const noexcept { return problem_; }
    std::size_t token_count() const noexcept { return problem_.tokens.size(); }

    // Value of Pos(i) under env. Throws ExecFailure{ParseFailure|BindFailure|Kernel}.
    Value value_at(std::size_t i, const Env& env) const;

private:
    struct Parsed {
        enum class State : std::uint8_t { Word, Ok, Failed, NeedsEnv } state = State::Word;
        Value value;
        ExecErrc error = ExecErrc::ParseFailure;
        sym::KernelErrc kernel = sym::KernelErrc::MalformedExpression;
        std::string text;
    };
    tok::TokenizedProblem problem_;
    std::vector<Parsed> parsed_;
};

struct ExecFailure {
    ExecErrc code;
    sym::KernelErrc kernel = sym::KernelErrc::MalformedExpression;
};

// Parses slot text into a Value: ordinal words become integers; top-level
// commas separate items; any '=' makes an equation set, and "f(x) = body" a
// function definition. Function applications resolve through env.
Value parse_slot(std::string_view text, const Env& env);

// One step of the executor, observed by --explain.
struct TraceStep {
    std::size_t index;
    const Operator* op;
    const Value* top;  // stack top after the step
};
using TraceFn = std::function<void(const TraceStep&)>;

// Resumable interpreter state. Running program pieces one after another on the
// same Machine is equivalent to running their concatenation, which lets
// curriculum search extend partial programs without re-executing prefixes.
class Machine {
public:
    Machine(const BoundProblem& problem, const Registry& registry, std::size_t fuel = kDefaultFuel);

    // Executes ops; `base` is the index of ops[0] in the whole program. Returns
    // false once the machine has failed (further runs are no-ops).
    bool run(std::span<const Operator> ops, std::size_t base = 0);
    ExecOutcome outcome() const;

    bool failed() const noexcept { return failure_.has_value(); }
    std::size_t depth() const noexcept { return stack_.size(); }
    const Env& env() const noexcept { return env_; }
    const Value* top() const noexcept { return stack_.empty() ? nullptr : &stack_.back(); }
    void set_trace(TraceFn fn) { trace_ = std::move(fn); }

private:
    const BoundProblem* problem_;
    const Registry* registry_;
    std::size_t fuel_;
    std::vector<Value> stack_;
    Env env_;
    std::optional<std::pair<ExecFailure, std::size_t>> failure_;
    std::optional<unsigned> pending_argc_;
    TraceFn trace_;
};

// Never throws on account of the program; every failure is an ExecOutcome
// without a value, carrying the index of the failing operator.
ExecOutcome execute(const Program& p, const BoundProblem& problem, const Registry& registry,
                    std::size_t fuel = kDefaultFuel);
ExecOutcome execute(const Program& p, const tok::TokenizedProblem& problem, const Registry& registry,
                    std::size_t fuel = kDefaultFuel);

}  // namespace abducto::dsl
