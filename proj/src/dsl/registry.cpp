#include "abducto/dsl/registry.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ops_table.hpp"

namespace abducto::dsl {

std::string_view bundled_docstrings_text();  // generated from data/docstrings.jsonl

std::vector<int> OpEntry::arity_list() const {
    std::vector<int> out;
    for (unsigned k = 0; k < 8; ++k) {
        if (admits(k)) out.push_back(static_cast<int>(k));
    }
    return out;
}

Registry::Registry() : entries_(builtin_operators()) {}

std::string_view Registry::bundled_docstrings() { return bundled_docstrings_text(); }

Registry Registry::from_docstrings(std::string_view jsonl) {
    Registry r;
    std::set<OpId> seen;
    std::size_t line_no = 0;
    std::istringstream in{std::string(jsonl)};
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw RegistryError("docstring corpus line " + std::to_string(line_no) + ": " + e.what());
        }
        const auto& name = rec.value("opId", std::string{});
        const auto id = r.find(name);
        if (!id) throw RegistryError("docstring corpus names unknown operator '" + name + "'");
        const auto& doc = rec.value("docstring", std::string{});
        if (doc.empty()) throw RegistryError("empty docstring for '" + name + "'");
        std::vector<int> arities;
        if (rec.contains("arities")) arities = rec["arities"].get<std::vector<int>>();
        if (arities != r.entries_[*id].arity_list()) {
            throw RegistryError("arities for '" + name + "' disagree with the registry");
        }
        r.entries_[*id].docstring = doc;
        seen.insert(*id);
    }
    for (OpId id = 0; id < r.entries_.size(); ++id) {
        if (!seen.count(id)) throw RegistryError("no docstring for '" + r.entries_[id].name + "'");
    }
    return r;
}

Registry Registry::from_docstring_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RegistryError("cannot read docstring corpus: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_docstrings(ss.str());
}

const Registry& Registry::builtin() {
    static const Registry r = [] {
        if (const char* path = std::getenv("ABDUCTO_REGISTRY"); path && *path) return from_docstring_file(path);
        return from_docstrings(bundled_docstrings());
    }();
    return r;
}

std::optional<OpId> Registry::find(std::string_view name) const {
    for (OpId id = 0; id < entries_.size(); ++id) {
        if (entries_[id].name == name) return id;
    }
    return std::nullopt;
}

std::string Registry::export_docstrings() const {
    std::string out;
    for (const auto& e : entries_) {
        nlohmann::json rec = {{"opId", e.name}, {"arities", e.arity_list()}, {"docstring", e.docstring}};
        out += rec.dump() + "\n";
    }
    return out;
}

}  // namespace abducto::dsl
