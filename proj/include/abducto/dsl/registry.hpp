#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "abducto/dsl/program.hpp"
#include "abducto/dsl/value.hpp"

namespace abducto::dsl {

enum class OpKind : std::uint8_t { Math, Convert };

using OpFn = Value (*)(std::span<const Value> args, Env& env);

struct OpEntry {
    std::string name;
    OpKind kind = OpKind::Math;
    std::uint8_t arities = 0;  // bit k set when argc k is admissible
    std::string docstring;
    OpFn fn = nullptr;

    bool admits(unsigned k) const noexcept { return k < 8 && ((arities >> k) & 1u); }
    std::vector<int> arity_list() const;
};

class RegistryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The operator table. Names and kernel bindings are fixed in code; docstrings
// come from a line-delimited JSON corpus of {opId, arities, docstring}
// records, which must cover every operator with matching arities.
class Registry {
public:
    // Docstrings from the file named by $ABDUCTO_REGISTRY when set, otherwise
    // the bundled data/docstrings.jsonl. Throws RegistryError if the
    // override file is unreadable or inconsistent.
    static const Registry& builtin();
    static Registry from_docstrings(std::string_view jsonl);
    static Registry from_docstring_file(const std::string& path);
    static std::string_view bundled_docstrings();

    std::optional<OpId> find(std::string_view name) const;
    const OpEntry& at(OpId id) const { return entries_.at(id); }
    std::size_t size() const noexcept { return entries_.size(); }
    std::span<const OpEntry> entries() const noexcept { return entries_; }

    // Test and tooling hook; not for use once the registry is shared.
    void set_docstring(OpId id, std::string text) { entries_.at(id).docstring = std::move(text); }

    // Serializes the current docstrings in the corpus format, one record per
    // operator in id order.
    std::string export_docstrings() const;

private:
    Registry();
    std::vector<OpEntry> entries_;
};

}  // namespace abducto::dsl
