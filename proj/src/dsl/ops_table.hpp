#pragma once

#include <vector>

#include "abducto/dsl/registry.hpp"

namespace abducto::dsl {

// Operators in registry-id order, docstrings empty.
std::vector<OpEntry> builtin_operators();

}  // namespace abducto::dsl
