#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "abducto/dsl/program.hpp"

namespace abducto::corpus {

enum class Difficulty { Interpolation, Extrapolation };

std::string_view to_string(Difficulty d) noexcept;
std::optional<Difficulty> difficulty_from_string(std::string_view s) noexcept;

struct Problem {
    std::string question;
    std::string answer;
    std::string module;
    Difficulty difficulty = Difficulty::Interpolation;
    // Known only to the generator; never read by search.
    std::optional<dsl::Program> hidden_program;
    // Largest |parameter| / interpolation bound over the range-governed
    // parameters: at most 1 for interpolation, above 1 for extrapolation.
    double range_ratio = 0.0;
};

struct TemplateInfo {
    std::string_view name;
    std::string_view summary;
};

// The desk-scale template modules, in a fixed order.
std::span<const TemplateInfo> templates();
bool is_template(std::string_view name);

// Deterministic in (module, difficulty, seed, n). Every problem's hidden
// program is executed during generation and must reproduce the kernel-computed
// answer; a mismatch throws std::logic_error. Unknown module names throw
// std::invalid_argument.
std::vector<Problem> generate(std::string_view module, Difficulty difficulty, std::uint64_t seed, std::size_t n);

// Round-robin over the modules, n problems in total.
std::vector<Problem> generate_mix(std::span<const std::string> modules, Difficulty difficulty, std::uint64_t seed,
                                  std::size_t n);

enum class DatasetErrc { OddLineCount, EmptyLine, Io };

class DatasetError : public std::runtime_error {
public:
    DatasetError(DatasetErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    DatasetErrc code() const noexcept { return code_; }

private:
    DatasetErrc code_;
};

// Alternating question / answer lines, no separators. A final newline is
// optional on load and always written on save. Loaded problems have an empty
// module name and no hidden program.
std::vector<Problem> load_dataset_file(const std::string& path);
void save_dataset_file(std::span<const Problem> problems, const std::string& path);
std::vector<Problem> parse_dataset(std::string_view text);
std::string format_dataset(std::span<const Problem> problems);

// One JSON object per line: {question, answer, module, difficulty}.
std::string format_manifest(std::span<const Problem> problems);
std::vector<Problem> parse_manifest(std::string_view text);

// 1 iff the strings are byte-identical.
int score(std::string_view predicted, std::string_view answer) noexcept;

}  // namespace abducto::corpus
