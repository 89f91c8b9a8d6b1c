#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abducto/dsl/program.hpp"
#include "abducto/dsl/registry.hpp"
#include "abducto/tokenizer/tokenizer.hpp"

namespace abducto::gen {

// One abduced pair as the generator sees it.
struct TrainingExample {
    std::string question;
    std::string answer;
    dsl::Program program;
};

// A program generator with two output channels: ranked candidate programs,
// and a direct answer used when no program runs. Implementations must keep
// propose_* deterministic for a fixed fitted state and safe to call
// concurrently; fit is exclusive.
class GeneratorModel {
public:
    virtual ~GeneratorModel() = default;

    // Replaces the model state. An empty span yields the empty model.
    virtual void fit(std::span<const TrainingExample> examples) = 0;

    // At most k distinct programs, each valid under validate().
    virtual std::vector<dsl::Program> propose_programs(const tok::TokenizedProblem& problem,
                                                       std::size_t k) const = 0;

    virtual std::optional<std::string> propose_answer(const tok::TokenizedProblem& problem) const = 0;
};

enum class Channel { Program, Answer, None };

struct SolveResult {
    std::string answer;                  // "" when neither channel produced anything
    std::optional<dsl::Program> program;  // set when the program channel won
    Channel channel = Channel::None;
    std::size_t programs_tried = 0;
};

// Runs the top-k proposals in rank order; the first successful execution
// wins, then the answer channel, then "".
SolveResult solve(const tok::TokenizedProblem& problem, const GeneratorModel& model, const dsl::Registry& registry,
                  std::size_t k = 8, std::size_t fuel = 512);

}  // namespace abducto::gen
