#include "abducto/symkernel/error.hpp"

namespace abducto::sym {

std::string_view to_string(KernelErrc code) noexcept {
    switch (code) {
        case KernelErrc::MalformedExpression: return "MalformedExpression";
        case KernelErrc::DivisionByZero: return "DivisionByZero";
        case KernelErrc::UnsupportedExponent: return "UnsupportedExponent";
        case KernelErrc::UnsupportedExpression: return "UnsupportedExpression";
        case KernelErrc::UndefinedForZero: return "UndefinedForZero";
        case KernelErrc::SingularSystem: return "SingularSystem";
        case KernelErrc::NonLinear: return "NonLinear";
        case KernelErrc::FreeSymbolPresent: return "FreeSymbolPresent";
        case KernelErrc::InvalidBase: return "InvalidBase";
        case KernelErrc::NonPositive: return "NonPositive";
        case KernelErrc::NonNumeric: return "NonNumeric";
        case KernelErrc::ResourceLimit: return "ResourceLimit";
    }
    return "Unknown";
}

void raise(KernelErrc code, const std::string& detail) {
    std::string what(to_string(code));
    if (!detail.empty()) what += ": " + detail;
    throw KernelError(code, what);
}

}  // namespace abducto::sym
