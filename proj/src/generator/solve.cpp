#include "abducto/dsl/executor.hpp"
#include "abducto/generator/model.hpp"

namespace abducto::gen {

SolveResult solve(const tok::TokenizedProblem& problem, const GeneratorModel& model, const dsl::Registry& registry,
                  std::size_t k, std::size_t fuel) {
    SolveResult r;
    const dsl::BoundProblem bound(problem);
    for (auto& p : model.propose_programs(problem, k)) {
        ++r.programs_tried;
        auto out = dsl::execute(p, bound, registry, fuel);
        if (out.value) {
            r.answer = std::move(*out.value);
            r.program = std::move(p);
            r.channel = Channel::Program;
            return r;
        }
    }
    if (auto a = model.propose_answer(problem)) {
        r.answer = std::move(*a);
        r.channel = Channel::Answer;
    }
    return r;
}

}  // namespace abducto::gen
