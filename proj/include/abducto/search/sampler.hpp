#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "abducto/dsl/program.hpp"
#include "abducto/dsl/registry.hpp"
#include "abducto/search/warmup.hpp"
#include "abducto/tokenizer/tokenizer.hpp"

namespace abducto::search {

inline constexpr std::size_t kDefaultMaxProgramLen = 12;

using Rng = std::mt19937_64;

class Unsampleable : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Relative weights of the three step kinds. Push and stop depend on the
// current stack depth d; op weight is scaled by the probability mass of the
// operators that fit at depth d.
struct StepWeights {
    double push_empty = 1.0;   // d = 1
    double push_deep = 0.4;    // d >= 2, divided by d - 1
    double op = 1.5;
    double stop_single = 0.8;  // d = 1
    double stop_deep = 0.1;    // d >= 2
};

// Draws one statically valid program of at most max_len operators. Positions
// are uniform over slot starts, the operator comes from dist restricted to
// those that fit, and argc is uniform over the operator's admissible arities
// that the stack can supply.
dsl::Program sample_program(const OperatorDistribution& dist, const tok::TokenizedProblem& problem,
                            const dsl::Registry& registry, Rng& rng, std::size_t max_len = kDefaultMaxProgramLen,
                            const StepWeights& weights = {});

// Same, over an explicit list of Pos indices.
dsl::Program sample_program(const OperatorDistribution& dist, const std::vector<std::uint32_t>& positions,
                            const dsl::Registry& registry, Rng& rng, std::size_t max_len = kDefaultMaxProgramLen,
                            const StepWeights& weights = {});

// Order-sensitive key for dedup; equal iff the programs are equal.
std::string program_key(const dsl::Program& p);

// splitmix64 finalizer, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace abducto::search
