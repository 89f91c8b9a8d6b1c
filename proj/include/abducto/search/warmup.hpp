#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "abducto/dsl/registry.hpp"
#include "abducto/tokenizer/tokenizer.hpp"

namespace abducto::search {

inline constexpr double kDefaultTemperature = 0.5;
inline constexpr double kProbabilityFloor = 1e-4;

// Probability per registry id.
struct OperatorDistribution {
    std::vector<double> probs;
    double temperature = kDefaultTemperature;
};

// Scores question text against every operator's docstring; one value per
// registry id. Swap in another implementation to change the vectorization.
class TextSimilarity {
public:
    virtual ~TextSimilarity() = default;
    virtual std::vector<double> similarities(std::string_view text) const = 0;
};

// Bag-of-words TF-IDF cosine over lowercase alphabetic words of two or more
// letters. Document frequencies come from the docstrings alone; idf uses the
// smoothed form log((1 + N) / (1 + df)) + 1.
class TfIdfSimilarity final : public TextSimilarity {
public:
    explicit TfIdfSimilarity(const dsl::Registry& registry);
    std::vector<double> similarities(std::string_view text) const override;

    static std::vector<std::string> words(std::string_view text);

private:
    std::unordered_map<std::string, double> idf_;
    std::vector<std::unordered_map<std::string, double>> docs_;  // unit-length tf-idf vectors
};

// softmax(score / temperature), then p = (1 - n*floor) * softmax + floor so that
// every operator keeps at least `floor` and the total stays 1.
OperatorDistribution warmup_distribution(const tok::TokenizedProblem& problem, const TextSimilarity& sim,
                                         double temperature = kDefaultTemperature,
                                         double floor = kProbabilityFloor);
OperatorDistribution warmup_distribution(const tok::TokenizedProblem& problem, const dsl::Registry& registry,
                                         double temperature = kDefaultTemperature);

OperatorDistribution uniform_distribution(std::size_t n);

}  // namespace abducto::search
