#include "abducto/dsl/program.hpp"

#include <cctype>
#include <charconv>

#include "abducto/dsl/registry.hpp"

namespace abducto::dsl {

namespace {

std::optional<std::uint32_t> parse_index(std::string_view digits) {
    if (digits.empty() || (digits.size() > 1 && digits.front() == '0')) return std::nullopt;
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
    return v;
}

Operator parse_token(std::string_view tok, const Registry& registry) {
    if (tok.starts_with("pos") && tok.size() > 3 && std::isdigit(static_cast<unsigned char>(tok[3]))) {
        auto i = parse_index(tok.substr(3));
        if (!i) throw ProgramError(ProgramErrc::MalformedToken, "bad position: " + std::string(tok));
        return Operator::pos(*i);
    }
    if (tok.starts_with("argc") && tok.size() > 4 && std::isdigit(static_cast<unsigned char>(tok[4]))) {
        auto k = parse_index(tok.substr(4));
        if (!k || *k > 3) throw ProgramError(ProgramErrc::MalformedToken, "bad argc: " + std::string(tok));
        return Operator::argc(*k);
    }
    auto id = registry.find(tok);
    if (!id) throw ProgramError(ProgramErrc::UnknownOperator, "unknown operator: " + std::string(tok));
    return registry.at(*id).kind == OpKind::Math ? Operator::math(*id) : Operator::convert(*id);
}

}  // namespace

Program parse_program(std::string_view text, const Registry& registry) {
    Program p;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == text.size()) break;
        const std::size_t b = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        p.ops.push_back(parse_token(text.substr(b, i - b), registry));
    }
    if (p.ops.empty()) throw ProgramError(ProgramErrc::MalformedToken, "empty program");
    return p;
}

std::string print_program(const Program& p, const Registry& registry) {
    std::string out;
    for (const auto& op : p.ops) {
        if (!out.empty()) out += ' ';
        switch (op.kind) {
            case Operator::Kind::Pos:
                out += "pos" + std::to_string(op.value);
                break;
            case Operator::Kind::Argc:
                out += "argc" + std::to_string(op.value);
                break;
            case Operator::Kind::Math:
            case Operator::Kind::Convert:
                out += registry.at(op.value).name;
                break;
        }
    }
    return out;
}

std::string_view to_string(ValidationErrc code) noexcept {
    switch (code) {
        case ValidationErrc::StackUnderflow: return "StackUnderflow";
        case ValidationErrc::ArgcWithoutMath: return "ArgcWithoutMath";
        case ValidationErrc::MathWithoutArgc: return "MathWithoutArgc";
        case ValidationErrc::InadmissibleArity: return "InadmissibleArity";
        case ValidationErrc::UnknownOperator: return "UnknownOperator";
        case ValidationErrc::EmptyFinalStack: return "EmptyFinalStack";
    }
    return "?";
}

std::optional<ValidationError> validate(const Program& p, const Registry& registry) {
    std::size_t depth = 0;
    const auto& ops = p.ops;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const Operator& op = ops[i];
        switch (op.kind) {
            case Operator::Kind::Pos:
                ++depth;
                break;
            case Operator::Kind::Argc: {
                if (i + 1 == ops.size() || ops[i + 1].kind != Operator::Kind::Math) {
                    return ValidationError{i, ValidationErrc::ArgcWithoutMath};
                }
                if (ops[i + 1].value >= registry.size() || registry.at(ops[i + 1].value).kind != OpKind::Math) {
                    return ValidationError{i + 1, ValidationErrc::UnknownOperator};
                }
                if (depth < op.value) return ValidationError{i, ValidationErrc::StackUnderflow};
                if (!registry.at(ops[i + 1].value).admits(op.value)) {
                    return ValidationError{i, ValidationErrc::InadmissibleArity};
                }
                depth = depth - op.value + 1;
                ++i;  // the math operator is consumed with its argc
                break;
            }
            case Operator::Kind::Math:
                return ValidationError{i, ValidationErrc::MathWithoutArgc};
            case Operator::Kind::Convert:
                if (op.value >= registry.size() || registry.at(op.value).kind != OpKind::Convert) {
                    return ValidationError{i, ValidationErrc::UnknownOperator};
                }
                if (depth == 0) return ValidationError{i, ValidationErrc::StackUnderflow};
                break;
        }
    }
    if (depth == 0) return ValidationError{ops.size(), ValidationErrc::EmptyFinalStack};
    return std::nullopt;
}

}  // namespace abducto::dsl
