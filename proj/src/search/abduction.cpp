#include "abducto/search/abduction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "abducto/symkernel/print.hpp"

namespace abducto::search {

using dsl::BoundProblem;
using dsl::Operator;
using dsl::Program;

void AbductionConfig::validate() const {
    if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
    if (budget_first < 1) throw std::invalid_argument("budget-first must be at least 1");
    if (budget_next > budget_first) throw std::invalid_argument("budget-next must not exceed budget-first");
    if (workers < 1) throw std::invalid_argument("workers must be at least 1");
    if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
    if (max_program_len < 1) throw std::invalid_argument("max-program-len must be at least 1");
    if (fuel < 1) throw std::invalid_argument("fuel must be at least 1");
    if (!(raw_draw_factor >= 1.0)) throw std::invalid_argument("raw draw factor must be at least 1");
}

// ---------------------------------------------------------------- SolvedSet

bool SolvedSet::insert(SolvedPair pair) {
    const auto id = pair.problem_id;
    return pairs_.emplace(id, std::move(pair)).second;
}

const SolvedPair* SolvedSet::find(std::size_t problem_id) const {
    auto it = pairs_.find(problem_id);
    return it == pairs_.end() ? nullptr : &it->second;
}

std::vector<const SolvedPair*> SolvedSet::pairs() const {
    std::vector<const SolvedPair*> out;
    out.reserve(pairs_.size());
    for (const auto& [id, p] : pairs_) out.push_back(&p);
    return out;
}

std::string SolvedSet::serialize() const {
    std::string out;
    for (const auto& [id, p] : pairs_) {
        nlohmann::ordered_json j;
        j["problem_id"] = p.problem_id;
        j["program_text"] = p.program_text;
        j["iteration"] = p.iteration;
        j["samples_spent"] = p.samples_spent;
        out += j.dump();
        out += '\n';
    }
    return out;
}

SolvedSet SolvedSet::parse(std::string_view text, const dsl::Registry& registry) {
    SolvedSet s;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        SolvedPair p;
        p.problem_id = j.at("problem_id").get<std::size_t>();
        p.program_text = j.at("program_text").get<std::string>();
        p.program = dsl::parse_program(p.program_text, registry);
        p.iteration = j.at("iteration").get<std::size_t>();
        p.samples_spent = j.at("samples_spent").get<std::size_t>();
        if (!s.insert(std::move(p))) throw std::invalid_argument("duplicate problem_id in solved set");
    }
    return s;
}

bool operator==(const SolvedSet& a, const SolvedSet& b) {
    if (a.pairs_.size() != b.pairs_.size()) return false;
    for (auto ia = a.pairs_.begin(), ib = b.pairs_.begin(); ia != a.pairs_.end(); ++ia, ++ib) {
        if (ia->first != ib->first || ia->second.program != ib->second.program ||
            ia->second.iteration != ib->second.iteration || ia->second.samples_spent != ib->second.samples_spent) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- reports

std::string format_stats_table(std::span<const IterationStats> rows) {
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-16s %9s %22s %10s %14s\n", "method", "iteration", "per-question searches",
                  "hit ratio", "cumulative");
    out += buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-16s %9zu %22.2f %9.2f%% %13.2f%%\n", r.method.c_str(), r.iteration,
                      r.per_question_searches, 100.0 * r.hit_ratio, 100.0 * r.cumulative_hit_ratio);
        out += buf;
    }
    return out;
}

std::string format_stats_jsonl(std::span<const IterationStats> rows) {
    std::string out;
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["method"] = r.method;
        j["iteration"] = r.iteration;
        j["problems_searched"] = r.problems_searched;
        j["unique_samples"] = r.unique_samples;
        j["raw_samples"] = r.raw_samples;
        j["per_question_searches"] = r.per_question_searches;
        j["per_question_raw"] = r.per_question_raw;
        j["new_hits"] = r.new_hits;
        j["solved_total"] = r.solved_total;
        j["corpus_size"] = r.corpus_size;
        j["hit_ratio"] = r.hit_ratio;
        j["cumulative_hit_ratio"] = r.cumulative_hit_ratio;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string format_hit_ratio_dat(std::span<const IterationStats> rows) {
    std::string out = "# method iteration cumulative_hit_ratio\n";
    char buf[96];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s %zu %.6f\n", r.method.c_str(), r.iteration, r.cumulative_hit_ratio);
        out += buf;
    }
    return out;
}

// ---------------------------------------------------------------- search

bool check_consistency(const Program& p, const BoundProblem& problem, std::string_view answer,
                       const dsl::Registry& registry, std::size_t fuel) {
    const auto out = dsl::execute(p, problem, registry, fuel);
    return out.value && corpus::score(*out.value, answer) == 1;
}

bool check_consistency(const Program& p, const corpus::Problem& problem, const dsl::Registry& registry,
                       std::size_t fuel) {
    return check_consistency(p, BoundProblem(tok::tokenize(problem.question)), problem.answer, registry, fuel);
}

namespace {

std::size_t raw_cap(std::size_t budget, const AbductionConfig& cfg) {
    return static_cast<std::size_t>(std::ceil(static_cast<double>(budget) * cfg.raw_draw_factor));
}

std::vector<std::uint32_t> slot_positions(const tok::TokenizedProblem& p, std::size_t lo, std::size_t hi) {
    std::vector<std::uint32_t> out;
    for (const auto& s : p.slots) {
        if (s.first_raw >= lo && s.first_raw <= hi) out.push_back(static_cast<std::uint32_t>(s.first_raw));
    }
    return out;
}

}  // namespace

SearchResult flat_search(const BoundProblem& problem, std::string_view answer, const OperatorDistribution& dist,
                         const dsl::Registry& registry, Rng& rng, std::size_t budget, const AbductionConfig& cfg,
                         SeenSet& seen) {
    SearchResult r;
    const auto positions = slot_positions(problem.problem(), 0, problem.token_count());
    if (positions.empty() || budget == 0) return r;
    const std::size_t cap = raw_cap(budget, cfg);
    while (r.unique < budget && r.raw < cap) {
        Program p = sample_program(dist, positions, registry, rng, cfg.max_program_len, cfg.weights);
        ++r.raw;
        if (!seen.insert(program_key(p)).second) continue;
        ++r.unique;
        if (check_consistency(p, problem, answer, registry, cfg.fuel)) {
            r.program = std::move(p);
            return r;
        }
    }
    return r;
}

namespace {

Program offset_program(const Program& p, std::uint32_t by) {
    Program out = p;
    for (auto& op : out.ops) {
        if (op.kind == Operator::Kind::Pos) op.value += by;
    }
    return out;
}

std::size_t binding_count(const dsl::Env& env) {
    std::size_t n = 0;
    for (const auto& s : env.symbols) n += s.has_value();
    for (const auto& f : env.functions) n += f.has_value();
    return n;
}

std::string env_key(const dsl::Env& env) {
    std::string k;
    for (std::size_t i = 0; i < 26; ++i) {
        if (env.symbols[i]) k += std::string(1, static_cast<char>('a' + i)) + "=" + sym::to_answer_string(*env.symbols[i]) + ";";
        if (env.functions[i]) k += dsl::render(*env.functions[i]) + ";";
    }
    return k;
}

struct Part {
    std::size_t first = 0;
    std::size_t last = 0;
    tok::TokenizedProblem sub;
    std::vector<std::uint32_t> positions;  // global Pos indices of the part's slots
    OperatorDistribution dist;
};

struct BeamState {
    dsl::Machine machine;
    Program prefix;
};

}  // namespace

SearchResult curriculum_search(const BoundProblem& problem, std::string_view answer, const gen::GeneratorModel* gen,
                               const TextSimilarity& sim, const dsl::Registry& registry, Rng& rng,
                               std::size_t budget, const AbductionConfig& cfg) {
    const auto& tp = problem.problem();
    const auto spans = tok::part_spans(tp);
    if (spans.size() < 2) throw std::invalid_argument("curriculum search needs at least two parts");
    SearchResult r;
    if (budget == 0) return r;
    const std::size_t cap = raw_cap(budget, cfg);

    std::vector<Part> parts;
    for (const auto& s : spans) {
        Part part;
        part.first = s.first_raw;
        part.last = s.last_raw;
        std::string text;
        for (std::size_t i = s.first_raw; i <= s.last_raw; ++i) {
            if (i > s.first_raw) text += ' ';
            text += tp.tokens[i].raw;
        }
        part.sub = tok::tokenize(text);
        part.positions = slot_positions(tp, s.first_raw, s.last_raw);
        part.dist = warmup_distribution(part.sub, sim, cfg.temperature);
        parts.push_back(std::move(part));
    }

    auto proposals_for = [&](const Part& part) {
        std::vector<Program> out;
        if (!gen || part.positions.empty()) return out;
        for (auto& p : gen->propose_programs(part.sub, cfg.proposals)) {
            out.push_back(offset_program(p, static_cast<std::uint32_t>(part.first)));
        }
        return out;
    };

    std::vector<BeamState> beam;
    beam.push_back({dsl::Machine(problem, registry, cfg.fuel), Program{}});

    for (std::size_t pi = 0; pi + 1 < parts.size(); ++pi) {
        const Part& part = parts[pi];
        if (part.positions.empty()) return r;  // nothing to bind from
        std::vector<Program> cands = proposals_for(part);
        SeenSet seen;
        for (const auto& c : cands) seen.insert(program_key(c));
        for (std::size_t i = 0; i < cfg.part_samples && r.raw < cap; ++i) {
            Program p = sample_program(part.dist, part.positions, registry, rng, cfg.max_program_len, cfg.weights);
            ++r.raw;
            if (seen.insert(program_key(p)).second) cands.push_back(std::move(p));
        }
        std::vector<BeamState> next;
        SeenSet env_seen;
        for (const auto& state : beam) {
            const std::size_t before = binding_count(state.machine.env());
            for (const auto& c : cands) {
                if (r.unique >= budget || next.size() >= cfg.beam_width) break;
                ++r.unique;
                BeamState s = state;
                if (!s.machine.run(c.ops, s.prefix.size())) continue;
                if (binding_count(s.machine.env()) <= before) continue;
                if (!env_seen.insert(env_key(s.machine.env())).second) continue;
                s.prefix.ops.insert(s.prefix.ops.end(), c.ops.begin(), c.ops.end());
                next.push_back(std::move(s));
            }
        }
        if (next.empty()) return r;
        beam = std::move(next);
    }

    // Final part: proposals first, then fresh samples, round-robin over states.
    const Part& last = parts.back();
    if (last.positions.empty()) return r;
    std::vector<SeenSet> seen(beam.size());
    auto try_final = [&](std::size_t si, const Program& c) -> bool {
        if (!seen[si].insert(program_key(c)).second) return false;
        ++r.unique;
        dsl::Machine m = beam[si].machine;
        m.run(c.ops, beam[si].prefix.size());
        const auto out = m.outcome();
        if (out.value && corpus::score(*out.value, answer) == 1) {
            Program full = beam[si].prefix;
            full.ops.insert(full.ops.end(), c.ops.begin(), c.ops.end());
            r.program = std::move(full);
            return true;
        }
        return false;
    };
    const auto proposals = proposals_for(last);
    for (std::size_t si = 0; si < beam.size(); ++si) {
        for (const auto& c : proposals) {
            if (r.unique >= budget) return r;
            if (try_final(si, c)) return r;
        }
    }
    while (r.unique < budget && r.raw < cap) {
        for (std::size_t si = 0; si < beam.size() && r.unique < budget && r.raw < cap; ++si) {
            Program p = sample_program(last.dist, last.positions, registry, rng, cfg.max_program_len, cfg.weights);
            ++r.raw;
            if (try_final(si, p)) return r;
        }
    }
    return r;
}

// ---------------------------------------------------------------- driver

namespace {

template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t count = std::min(workers, n);
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for (std::size_t w = 0; w < count; ++w) {
        pool.emplace_back([&] {
            try {
                for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

enum Phase : std::uint64_t { kFlat = 1, kCompositional = 2, kLater = 3 };

struct Attempt {
    bool searched = false;
    std::optional<Program> program;
    std::size_t unique = 0;
    std::size_t raw = 0;
};

bool shorter(const Program& a, const Program& b, const dsl::Registry& registry) {
    if (a.size() != b.size()) return a.size() < b.size();
    return dsl::print_program(a, registry) < dsl::print_program(b, registry);
}

class Driver {
public:
    Driver(std::span<const corpus::Problem> corpus, gen::GeneratorModel* gen, const AbductionConfig& cfg,
           const dsl::Registry& registry)
        : corpus_(corpus), gen_(gen), cfg_(cfg), registry_(registry), sim_(registry) {
        bound_.reserve(corpus.size());
        for (const auto& p : corpus) bound_.emplace_back(tok::tokenize(p.question));
        multipart_.resize(corpus.size());
        dists_.resize(corpus.size());
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            multipart_[i] = tok::part_spans(bound_[i].problem()).size() >= 2;
            dists_[i] = cfg.guided ? warmup_distribution(bound_[i].problem(), sim_, cfg.temperature)
                                   : uniform_distribution(registry.size());
        }
    }

    AbductionResult run(const IterationCallback& cb) {
        AbductionResult res;
        for (std::size_t it = 1; it <= cfg_.iterations; ++it) {
            std::vector<Attempt> attempts(corpus_.size());
            const std::size_t before = res.solved.size();
            if (it == 1) {
                run_phase(res.solved, attempts, it, kFlat, [&](std::size_t i) { return !multipart_[i]; });
                commit(res.solved, attempts, it);
                refit(res.solved);
                run_phase(res.solved, attempts, it, kCompositional, [&](std::size_t i) { return multipart_[i]; });
            } else {
                run_phase(res.solved, attempts, it, kLater, [](std::size_t) { return true; });
            }
            commit(res.solved, attempts, it);
            refit(res.solved);

            IterationStats st;
            st.iteration = it;
            st.corpus_size = corpus_.size();
            for (const auto& a : attempts) {
                st.problems_searched += a.searched;
                st.unique_samples += a.unique;
                st.raw_samples += a.raw;
            }
            st.new_hits = res.solved.size() - before;
            st.solved_total = res.solved.size();
            if (st.problems_searched) {
                st.per_question_searches = static_cast<double>(st.unique_samples) / st.problems_searched;
                st.per_question_raw = static_cast<double>(st.raw_samples) / st.problems_searched;
                st.hit_ratio = static_cast<double>(st.new_hits) / st.problems_searched;
            }
            st.cumulative_hit_ratio = corpus_.empty() ? 0.0 : static_cast<double>(st.solved_total) / corpus_.size();
            if (!cfg_.guided) st.method = "random-baseline";
            if (cb) cb(st);
            res.stats.push_back(st);
        }
        return res;
    }

private:
    template <class Pred>
    void run_phase(const SolvedSet& solved, std::vector<Attempt>& attempts, std::size_t it, Phase phase, Pred&& want) {
        const std::size_t budget = it == 1 ? cfg_.budget_first : cfg_.budget_next;
        std::vector<std::size_t> todo;
        for (std::size_t i = 0; i < corpus_.size(); ++i) {
            if (!solved.contains(i) && !attempts[i].program && want(i)) todo.push_back(i);
        }
        parallel_for(todo.size(), cfg_.workers, [&](std::size_t t) {
            const std::size_t i = todo[t];
            Rng rng(mix_seed(mix_seed(mix_seed(cfg_.seed, it), phase), i));
            attempts[i] = attempt(i, phase, budget, rng);
        });
    }

    Attempt attempt(std::size_t i, Phase phase, std::size_t budget, Rng& rng) const {
        Attempt a;
        a.searched = true;
        const auto& bp = bound_[i];
        const std::string& answer = corpus_[i].answer;
        SeenSet seen;
        auto spend = [&](const SearchResult& r) {
            a.unique += r.unique;
            a.raw += r.raw;
        };
        if (phase == kLater && gen_ && cfg_.use_generator) {
            // The proposal batch is checked in full; the shortest hit is kept.
            for (auto& p : gen_->propose_programs(bp.problem(), cfg_.proposals)) {
                if (a.unique >= budget) break;
                ++a.raw;
                if (!seen.insert(program_key(p)).second) continue;
                ++a.unique;
                if (check_consistency(p, bp, answer, registry_, cfg_.fuel) &&
                    (!a.program || shorter(p, *a.program, registry_))) {
                    a.program = std::move(p);
                }
            }
            if (a.program) return a;
        }
        if (multipart_[i] && cfg_.curriculum && phase != kFlat) {
            const auto* g = cfg_.use_generator ? gen_ : nullptr;
            auto r = curriculum_search(bp, answer, g, sim_, registry_, rng, budget - a.unique, cfg_);
            spend(r);
            if (r.program) {
                a.program = std::move(r.program);
                return a;
            }
        }
        auto r = flat_search(bp, answer, dists_[i], registry_, rng, budget - a.unique, cfg_, seen);
        spend(r);
        a.program = std::move(r.program);
        return a;
    }

    void commit(SolvedSet& solved, const std::vector<Attempt>& attempts, std::size_t it) {
        for (std::size_t i = 0; i < attempts.size(); ++i) {
            const auto& a = attempts[i];
            if (!a.program || solved.contains(i)) continue;
            SolvedPair p{i, *a.program, dsl::print_program(*a.program, registry_), it, a.unique};
            solved.insert(std::move(p));
        }
    }

    void refit(const SolvedSet& solved) {
        if (!gen_ || !cfg_.use_generator) return;
        const auto ex = training_examples(solved, corpus_);
        gen_->fit(ex);
    }

    std::span<const corpus::Problem> corpus_;
    gen::GeneratorModel* gen_;
    AbductionConfig cfg_;
    const dsl::Registry& registry_;
    TfIdfSimilarity sim_;
    std::vector<BoundProblem> bound_;
    std::vector<bool> multipart_;
    std::vector<OperatorDistribution> dists_;
};

}  // namespace

AbductionResult run_abduction(std::span<const corpus::Problem> corpus, gen::GeneratorModel& gen,
                              const AbductionConfig& cfg, const dsl::Registry& registry,
                              const IterationCallback& on_iteration) {
    cfg.validate();
    Driver d(corpus, &gen, cfg, registry);
    return d.run(on_iteration);
}

AbductionResult run_random_baseline(std::span<const corpus::Problem> corpus, const AbductionConfig& cfg,
                                    const dsl::Registry& registry) {
    AbductionConfig c = cfg;
    c.iterations = 1;
    c.guided = false;
    c.curriculum = false;
    c.use_generator = false;
    c.validate();
    Driver d(corpus, nullptr, c, registry);
    return d.run({});
}

std::vector<gen::TrainingExample> training_examples(const SolvedSet& solved,
                                                    std::span<const corpus::Problem> corpus) {
    std::vector<gen::TrainingExample> out;
    out.reserve(solved.size());
    for (const auto* p : solved.pairs()) {
        if (p->problem_id >= corpus.size()) continue;
        out.push_back({corpus[p->problem_id].question, corpus[p->problem_id].answer, p->program});
    }
    return out;
}

std::vector<std::size_t> verify_solved(const SolvedSet& solved, std::span<const corpus::Problem> corpus,
                                       const dsl::Registry& registry, std::size_t fuel) {
    std::vector<std::size_t> bad;
    for (const auto* p : solved.pairs()) {
        if (p->problem_id >= corpus.size() ||
            !check_consistency(p->program, corpus[p->problem_id], registry, fuel)) {
            bad.push_back(p->problem_id);
        }
    }
    return bad;
}

}  // namespace abducto::search
