#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace abducto::sym {

enum class KernelErrc {
    MalformedExpression,
    DivisionByZero,
    UnsupportedExponent,
    UnsupportedExpression,
    UndefinedForZero,
    SingularSystem,
    NonLinear,
    FreeSymbolPresent,
    InvalidBase,
    NonPositive,
    NonNumeric,
    // Result would exceed the kernel's size caps (term count, bit length, exponent).
    ResourceLimit,
};

std::string_view to_string(KernelErrc code) noexcept;

class KernelError : public std::runtime_error {
public:
    KernelError(KernelErrc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    KernelErrc code() const noexcept { return code_; }

private:
    KernelErrc code_;
};

[[noreturn]] void raise(KernelErrc code, const std::string& detail = {});

}  // namespace abducto::sym
