#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "abducto/corpus/corpus.hpp"
#include "abducto/dsl/executor.hpp"
#include "abducto/generator/model.hpp"
#include "abducto/search/sampler.hpp"
#include "abducto/search/warmup.hpp"

namespace abducto::search {

struct AbductionConfig {
    std::size_t budget_first = 2000;  // N_w: unique programs per problem, iteration 1
    std::size_t budget_next = 200;    // N_n: later iterations
    std::size_t iterations = 5;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    double temperature = kDefaultTemperature;
    std::size_t max_program_len = kDefaultMaxProgramLen;
    std::size_t fuel = dsl::kDefaultFuel;

    std::size_t proposals = 8;      // generator candidates per problem or part
    std::size_t beam_width = 4;     // curriculum states kept per part
    std::size_t part_samples = 48;  // sampled candidates per non-final part
    double raw_draw_factor = 20.0;  // raw draws are capped at factor * budget
    bool guided = true;             // false: uniform operator distribution
    bool curriculum = true;
    bool use_generator = true;
    StepWeights weights;

    // Throws std::invalid_argument. budget_next may be 0 (later iterations are
    // then no-ops); otherwise budget_first >= budget_next >= 1.
    void validate() const;
};

struct SolvedPair {
    std::size_t problem_id = 0;  // index into the corpus
    dsl::Program program;
    std::string program_text;
    std::size_t iteration = 0;
    std::size_t samples_spent = 0;
};

// Keyed by problem id; the first pair stored for a problem is kept.
class SolvedSet {
public:
    bool insert(SolvedPair pair);
    bool contains(std::size_t problem_id) const { return pairs_.count(problem_id) != 0; }
    const SolvedPair* find(std::size_t problem_id) const;
    std::size_t size() const noexcept { return pairs_.size(); }
    bool empty() const noexcept { return pairs_.empty(); }
    std::vector<const SolvedPair*> pairs() const;  // ascending id

    // Line-delimited {problem_id, program_text, iteration, samples_spent},
    // ascending id.
    std::string serialize() const;
    static SolvedSet parse(std::string_view text, const dsl::Registry& registry);

    friend bool operator==(const SolvedSet& a, const SolvedSet& b);

private:
    std::map<std::size_t, SolvedPair> pairs_;
};

struct IterationStats {
    std::string method = "abduction";
    std::size_t iteration = 0;
    std::size_t problems_searched = 0;
    std::size_t unique_samples = 0;  // executed programs
    std::size_t raw_samples = 0;     // draws, duplicates included
    double per_question_searches = 0.0;  // unique_samples / problems_searched
    double per_question_raw = 0.0;
    std::size_t new_hits = 0;
    std::size_t solved_total = 0;
    std::size_t corpus_size = 0;
    double hit_ratio = 0.0;             // new_hits / problems_searched
    double cumulative_hit_ratio = 0.0;  // solved_total / corpus_size
};

std::string format_stats_table(std::span<const IterationStats> rows);
std::string format_stats_jsonl(std::span<const IterationStats> rows);
// "iteration cumulative_hit_ratio" per line, for external plotting.
std::string format_hit_ratio_dat(std::span<const IterationStats> rows);

bool check_consistency(const dsl::Program& p, const dsl::BoundProblem& problem, std::string_view answer,
                       const dsl::Registry& registry, std::size_t fuel = dsl::kDefaultFuel);
bool check_consistency(const dsl::Program& p, const corpus::Problem& problem, const dsl::Registry& registry,
                       std::size_t fuel = dsl::kDefaultFuel);

struct SearchResult {
    std::optional<dsl::Program> program;
    std::size_t unique = 0;
    std::size_t raw = 0;
};

using SeenSet = std::unordered_set<std::string>;

// Samples until a consistent program turns up or `budget` unique programs
// have been executed. `seen` carries dedup state across calls on one problem.
SearchResult flat_search(const dsl::BoundProblem& problem, std::string_view answer, const OperatorDistribution& dist,
                         const dsl::Registry& registry, Rng& rng, std::size_t budget, const AbductionConfig& cfg,
                         SeenSet& seen);

// Solves a multi-part problem part by part. Non-final parts must bind new
// symbols or functions in the environment; later parts read them through their
// slots. Candidates per part are the generator's proposals (when gen is
// non-null) followed by warm-up samples. Throws std::invalid_argument when the
// question has fewer than two parts.
SearchResult curriculum_search(const dsl::BoundProblem& problem, std::string_view answer,
                               const gen::GeneratorModel* gen, const TextSimilarity& sim,
                               const dsl::Registry& registry, Rng& rng, std::size_t budget,
                               const AbductionConfig& cfg);

struct AbductionResult {
    SolvedSet solved;
    std::vector<IterationStats> stats;
};

using IterationCallback = std::function<void(const IterationStats&)>;

// Iteration 1: warm-up search on single-part problems, fit, then curriculum
// and warm-up search on multi-part problems, fit. Later iterations: generator
// proposals, curriculum, then warm-up search, all within budget_next, and a
// refit. Results do not depend on the worker count.
AbductionResult run_abduction(std::span<const corpus::Problem> corpus, gen::GeneratorModel& gen,
                              const AbductionConfig& cfg, const dsl::Registry& registry = dsl::Registry::builtin(),
                              const IterationCallback& on_iteration = {});

// One iteration of uniform sampling with budget_first per problem; no
// generator, no curriculum.
AbductionResult run_random_baseline(std::span<const corpus::Problem> corpus, const AbductionConfig& cfg,
                                    const dsl::Registry& registry = dsl::Registry::builtin());

std::vector<gen::TrainingExample> training_examples(const SolvedSet& solved,
                                                    std::span<const corpus::Problem> corpus);

// Ids of stored pairs that do not re-execute to their problem's answer.
std::vector<std::size_t> verify_solved(const SolvedSet& solved, std::span<const corpus::Problem> corpus,
                                       const dsl::Registry& registry, std::size_t fuel = dsl::kDefaultFuel);

}  // namespace abducto::search
