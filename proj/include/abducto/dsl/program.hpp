#pragma once

#include <compare>
#include <optional>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace abducto::dsl {

class Registry;

using OpId = std::uint32_t;

struct Operator {
    enum class Kind : std::uint8_t { Pos, Argc, Math, Convert };

    Kind kind = Kind::Pos;
    std::uint32_t value = 0;  // raw token index, argc k, or registry id

    static Operator pos(std::uint32_t i) { return {Kind::Pos, i}; }
    static Operator argc(std::uint32_t k) { return {Kind::Argc, k}; }
    static Operator math(OpId id) { return {Kind::Math, id}; }
    static Operator convert(OpId id) { return {Kind::Convert, id}; }

    friend auto operator<=>(const Operator&, const Operator&) = default;
};

struct Program {
    std::vector<Operator> ops;

    std::size_t size() const noexcept { return ops.size(); }
    bool empty() const noexcept { return ops.empty(); }
    friend auto operator<=>(const Program&, const Program&) = default;
};

enum class ProgramErrc { UnknownOperator, MalformedToken };

class ProgramError : public std::runtime_error {
public:
    ProgramError(ProgramErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ProgramErrc code() const noexcept { return code_; }

private:
    ProgramErrc code_;
};

// "pos7 argc1 denom ..." <-> Program. Tokens are split on whitespace runs; the
// printed form uses single spaces. Empty text is MalformedToken.
Program parse_program(std::string_view text, const Registry& registry);
std::string print_program(const Program& p, const Registry& registry);

enum class ValidationErrc {
    StackUnderflow,      // argc k with fewer than k values, or convert on an empty stack
    ArgcWithoutMath,     // argc not immediately followed by a math operator
    MathWithoutArgc,     // math operator not immediately preceded by argc
    InadmissibleArity,   // k is not an arity of the math operator
    UnknownOperator,     // registry id out of range, or kind mismatch
    EmptyFinalStack,     // nothing left to print
};

struct ValidationError {
    std::size_t index = 0;
    ValidationErrc code = ValidationErrc::StackUnderflow;
};

std::string_view to_string(ValidationErrc code) noexcept;

// nullopt when the program is well formed.
std::optional<ValidationError> validate(const Program& p, const Registry& registry);

}  // namespace abducto::dsl
