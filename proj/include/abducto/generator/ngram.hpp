#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "abducto/generator/model.hpp"

namespace abducto::gen {

// Lowercased Word tokens in order, e.g. "find the common denominator of and".
std::string signature_text(const tok::TokenizedProblem& problem);
std::uint64_t signature_hash(std::string_view signature) noexcept;

// Retrieval plus operator trigrams.
//
// A solved program is stored as a skeleton whose Pos operators hold slot
// ordinals instead of token indices; proposing for a new question re-binds
// ordinal j to the question's j-th slot. Skeletons from questions with the
// same signature rank first, then skeletons
// from signatures whose word sets have Jaccard similarity >= 0.5. Within a
// signature, skeletons are ranked by how many of the family's stored
// questions they reproduce, then length, then frequency. The
// remaining proposals are rollouts from interpolated trigram counts over the
// skeleton tokens, conditioned on the signature, with add-`smoothing` mass on
// every token the grammar allows next.
//
// Model file (JSON): {"format": "abducto-ngram", "version": 1,
// "smoothing": <double>, "examples": [{"question", "answer", "program"}]}.
// Loading refits from the stored examples.
class NgramGenerator final : public GeneratorModel {
public:
    explicit NgramGenerator(const dsl::Registry& registry = dsl::Registry::builtin(), double smoothing = 0.1,
                            std::size_t max_len = 12);

    void fit(std::span<const TrainingExample> examples) override;
    std::vector<dsl::Program> propose_programs(const tok::TokenizedProblem& problem, std::size_t k) const override;
    std::optional<std::string> propose_answer(const tok::TokenizedProblem& problem) const override;

    std::size_t example_count() const noexcept { return examples_.size(); }
    std::size_t skeleton_count() const noexcept;

    std::string to_json() const;
    static NgramGenerator from_json(std::string_view text, const dsl::Registry& registry = dsl::Registry::builtin());
    void save(const std::string& path) const;
    static NgramGenerator load(const std::string& path, const dsl::Registry& registry = dsl::Registry::builtin());

private:
    struct Skeleton {
        dsl::Program program;  // Pos values are slot ordinals
        std::size_t slots_needed = 0;
        std::size_t count = 0;
        std::size_t support = 0;
    };
    struct Family {
        std::string signature;
        std::vector<std::string> words;  // sorted, unique
        std::vector<Skeleton> skeletons;  // ranked
        std::vector<std::size_t> members;  // example indices
    };

    static constexpr std::size_t kSupportSample = 64;

    using Counts = std::unordered_map<std::uint64_t, double>;

    void rollouts(const tok::TokenizedProblem& problem, std::uint64_t sig, std::size_t k,
                  std::vector<dsl::Program>& out) const;

    const dsl::Registry* registry_;
    double smoothing_;
    std::size_t max_len_;
    std::vector<TrainingExample> examples_;
    std::vector<std::vector<std::string>> example_words_;
    std::unordered_map<std::string, std::size_t> exact_;  // question -> example index
    std::unordered_map<std::uint64_t, Family> families_;
    std::vector<std::uint64_t> family_order_;  // first-seen order
    Counts tri_sig_;
    Counts tri_;
    Counts bi_;
};

}  // namespace abducto::gen
