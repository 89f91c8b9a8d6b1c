// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "abducto/cli/cli.hpp"
#include "abducto/corpus/corpus.hpp"
#include "abducto/dsl/executor.hpp"
#include "abducto/generator/ngram.hpp"
#include "abducto/search/abduction.hpp"
#include "abducto/symkernel/algebra.hpp"
#include "abducto/symkernel/linear.hpp"
#include "abducto/symkernel/numbers.hpp"
#include "abducto/symkernel/parse.hpp"
#include "abducto/symkernel/print.hpp"
#include "support/expr_gen.hpp"

using namespace abducto;
namespace fs = std::filesystem;

namespace {

// Pinned thresholds.
constexpr double kGoldenSeconds = 1.0;
constexpr double kKernelSeconds = 60.0;
constexpr double kFuzzSeconds = 300.0;
constexpr double kDerivativeRelErr = 1e-6;
constexpr double kGuidedOverRandom = 1.2;
constexpr std::size_t kFuzzPrograms = 100000;
constexpr std::size_t kKernelTrials = 10000;
constexpr std::size_t kCorpusSize = 2000;
constexpr std::size_t kSeeds = 5;
constexpr std::size_t kHeldOut = 500;

const char* const kLcmQuestion = "Calculate the common denominator of 25/13728 and 121/1248.";
const char* const kWorked = "pos7 argc1 denom pos5 argc1 denom argc2 lcm";

const dsl::Registry& reg() { return dsl::Registry::builtin(); }

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
    std::printf("%s %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<std::string> all_modules() {
    std::vector<std::string> out;
    for (const auto& t : corpus::templates()) out.emplace_back(t.name);
    return out;
}

// Runs fn and turns an escaped exception into a failure line.
void criterion(const char* name, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        report(name, false, std::string("exception: ") + e.what());
    }
}

void golden() {
    const auto start = Clock::now();
    const auto out = dsl::execute(dsl::parse_program(kWorked, reg()), tok::tokenize(kLcmQuestion), reg());
    const double secs = since(start);
    const std::string got = out.value.value_or("<none>");
    report("golden-executor", got == "13728" && secs < kGoldenSeconds, fmt("%s in %.4f s", got.c_str(), secs));
}

void kernel_suite() {
    using namespace sym;
    using testing::ExprGen;
    const auto start = Clock::now();
    std::size_t bad_fixpoint = 0, bad_idem = 0, bad_ring = 0, bad_gcd = 0, bad_diff = 0, bad_solve = 0;
    std::size_t checked_trees = 0, checked_systems = 0;

    ExprGen g(20240601);
    for (std::size_t i = 0; i < kKernelTrials; ++i) {
        Expr c;
        try {
            c = canonicalize(g.tree(4, i % 3 == 0));
        } catch (const KernelError&) {
            continue;
        }
        ++checked_trees;
        bad_idem += !(canonicalize(c) == c);
        const std::string s = to_answer_string(c);
        const Expr back = parse_expr(s);
        bad_fixpoint += !(back == c && to_answer_string(back) == s);
    }

    for (std::size_t i = 0; i < kKernelTrials; ++i) {
        const Expr a = canonicalize(g.tree(3));
        const Expr b = canonicalize(g.tree(3));
        const Expr c = canonicalize(g.tree(2));
        bad_ring += !(add(a, b) == add(b, a)) || !(mul(a, b) == mul(b, a)) ||
                    !(mul(a, add(b, c)) == add(mul(a, b), mul(a, c))) || !add(a, neg(a)).is_zero();
    }

    for (std::size_t i = 0; i < kKernelTrials; ++i) {
        const Integer a(static_cast<long>(g.integer(-1000000, 1000000) | 1));
        const Integer b(static_cast<long>(g.integer(1, 1000000)));
        bad_gcd += !(gcd(a, b) * lcm(a, b) == abs(a * b));
    }

    // Central differences on polynomials and products of polynomials; the
    // error is relative to max(1, |f'(x)|).
    double worst = 0;
    for (std::size_t i = 0; i < kKernelTrials; ++i) {
        Expr f = canonicalize(g.polynomial('x', 6));
        if (i % 2) f = mul(f, canonicalize(g.polynomial('x', 3)));
        const double x = static_cast<double>(g.integer(-150, 150)) / 100.0;
        const double h = 1e-5;
        const double fd = (testing::eval_double(f, x + h) - testing::eval_double(f, x - h)) / (2 * h);
        const double d = testing::eval_double(diff(f, 'x'), x);
        const double err = std::abs(d - fd) / std::max(1.0, std::abs(d));
        worst = std::max(worst, err);
        bad_diff += err > kDerivativeRelErr;
    }

    // Random square systems; singular ones are skipped.
    const std::vector<char> names = {'a', 'b', 'c'};
    for (std::size_t i = 0; i < kKernelTrials / 10; ++i) {
        const std::size_t n = 2 + i % 2;
        std::vector<std::pair<Expr, Expr>> eqs;
        for (std::size_t r = 0; r < n; ++r) {
            std::vector<Expr> terms;
            for (std::size_t j = 0; j < n; ++j) {
                terms.push_back(Expr::make_product(
                    {Expr::integer(static_cast<long>(g.integer(-9, 9))), Expr::symbol(names[j])}));
            }
            terms.push_back(Expr::integer(static_cast<long>(g.integer(-50, 50))));
            eqs.emplace_back(canonicalize(Expr::make_sum(std::move(terms))),
                             Expr::integer(static_cast<long>(g.integer(-50, 50))));
        }
        std::map<char, Expr> sol;
        try {
            sol = solve_linear(LinearSystem::from_equations(eqs));
        } catch (const KernelError&) {
            continue;
        }
        ++checked_systems;
        for (const auto& [lhs, rhs] : eqs) {
            Expr l = lhs;
            for (const auto& [s, v] : sol) l = substitute(l, s, v);
            bad_solve += !(l == rhs);
        }
    }

    const double secs = since(start);
    const bool ok = bad_fixpoint + bad_idem + bad_ring + bad_gcd + bad_diff + bad_solve == 0 &&
                    checked_trees > kKernelTrials / 2 && checked_systems > kKernelTrials / 20 &&
                    secs < kKernelSeconds;
    report("kernel-suite", ok,
           fmt("trees %zu (fixpoint %zu, idempotence %zu bad), ring %zu bad, gcd*lcm %zu bad, "
               "derivative %zu bad (worst %.2e), systems %zu (%zu bad), %.1f s",
               checked_trees, bad_fixpoint, bad_idem, bad_ring, bad_gcd, bad_diff, worst, checked_systems, bad_solve,
               secs));
}

// Random validated program over the whole registry, tracking stack depth.
dsl::Program random_program(std::mt19937_64& rng, std::size_t tokens, std::size_t max_len) {
    dsl::Program p;
    std::size_t depth = 0;
    const auto& entries = reg().entries();
    while (p.size() < max_len) {
        if (depth == 0 || rng() % 3 == 0) {
            p.ops.push_back(dsl::Operator::pos(static_cast<std::uint32_t>(rng() % (tokens + 2))));
            ++depth;
            continue;
        }
        const auto id = static_cast<dsl::OpId>(rng() % entries.size());
        const auto& e = entries[id];
        if (e.kind == dsl::OpKind::Convert) {
            p.ops.push_back(dsl::Operator::convert(id));
            continue;
        }
        if (p.size() + 2 > max_len) break;
        std::vector<int> ks;
        for (int k : e.arity_list())
            if (static_cast<std::size_t>(k) <= depth) ks.push_back(k);
        if (ks.empty()) continue;
        const int k = ks[rng() % ks.size()];
        p.ops.push_back(dsl::Operator::argc(static_cast<std::uint32_t>(k)));
        p.ops.push_back(dsl::Operator::math(id));
        depth = depth - static_cast<std::size_t>(k) + 1;
        if (rng() % 5 == 0) break;
    }
    if (depth == 0) p.ops.push_back(dsl::Operator::pos(0));
    return p;
}

void executor_fuzz() {
    const auto start = Clock::now();
    const auto modules = all_modules();
    std::vector<dsl::BoundProblem> problems;
    for (auto d : {corpus::Difficulty::Interpolation, corpus::Difficulty::Extrapolation}) {
        for (const auto& p : corpus::generate_mix(modules, d, 77, 300)) problems.emplace_back(tok::tokenize(p.question));
    }
    std::mt19937_64 rng(4242);
    std::size_t invalid = 0, escaped = 0, values = 0, nones = 0;
    for (std::size_t i = 0; i < kFuzzPrograms; ++i) {
        const auto& bp = problems[rng() % problems.size()];
        const dsl::Program p = random_program(rng, bp.token_count(), 1 + rng() % 12);
        if (dsl::validate(p, reg())) {
            ++invalid;
            continue;
        }
        try {
            const auto out = dsl::execute(p, bp, reg());
            (out.ok() ? values : nones)++;
        } catch (...) {
            ++escaped;
        }
    }
    const double secs = since(start);
    report("executor-totality-fuzz", invalid == 0 && escaped == 0 && values + nones == kFuzzPrograms &&
                                         secs < kFuzzSeconds,
           fmt("%zu programs: %zu values, %zu none, %zu escaped, %zu invalid, %.1f s", kFuzzPrograms, values, nones,
               escaped, invalid, secs));
}

struct SeedRun {
    std::vector<corpus::Problem> corpus;
    search::AbductionResult guided;
    search::AbductionResult random;
    double pre_fit = 0, post_fit = 0;
};

double accuracy(const gen::GeneratorModel& m, std::span<const corpus::Problem> ps) {
    std::size_t right = 0;
    for (const auto& p : ps) right += corpus::score(gen::solve(tok::tokenize(p.question), m, reg()).answer, p.answer);
    return ps.empty() ? 0.0 : static_cast<double>(right) / static_cast<double>(ps.size());
}

std::vector<SeedRun> table2_runs() {
    const auto modules = all_modules();
    std::vector<SeedRun> runs;
    for (std::size_t s = 0; s < kSeeds; ++s) {
        const auto start = Clock::now();
        SeedRun r;
        r.corpus = corpus::generate_mix(modules, corpus::Difficulty::Interpolation, 1000 + s, kCorpusSize);
        search::AbductionConfig cfg;
        cfg.budget_first = 2000;
        cfg.budget_next = 200;
        cfg.iterations = 5;
        cfg.seed = s;
        gen::NgramGenerator model(reg());
        r.guided = search::run_abduction(r.corpus, model, cfg, reg());
        r.random = search::run_random_baseline(r.corpus, cfg, reg());

        const auto held_out = corpus::generate_mix(modules, corpus::Difficulty::Interpolation, 5000 + s, kHeldOut);
        gen::NgramGenerator empty(reg());
        empty.fit({});
        r.pre_fit = accuracy(empty, held_out);
        r.post_fit = accuracy(model, held_out);

        std::fprintf(stderr, "seed %zu:", s);
        for (const auto& st : r.guided.stats) std::fprintf(stderr, " %.4f", st.cumulative_hit_ratio);
        std::fprintf(stderr, " | random %.4f | held-out %.4f -> %.4f | %.1f s\n",
                     r.random.stats.front().cumulative_hit_ratio, r.pre_fit, r.post_fit, since(start));
        runs.push_back(std::move(r));
    }
    return runs;
}

void soundness(const std::vector<SeedRun>& runs) {
    std::size_t pairs = 0, bad = 0;
    for (const auto& r : runs) {
        for (const auto* result : {&r.guided, &r.random}) {
            for (const auto* p : result->solved.pairs()) {
                ++pairs;
                const auto& prob = r.corpus.at(p->problem_id);
                const auto out = dsl::execute(p->program, tok::tokenize(prob.question), reg());
                bad += !(out.value && corpus::score(*out.value, prob.answer) == 1);
            }
            bad += search::verify_solved(result->solved, r.corpus, reg()).size();
        }
    }
    report("abduction-soundness", pairs > 0 && bad == 0, fmt("%zu pairs re-executed, %zu inconsistent", pairs, bad));
}

void table2(const std::vector<SeedRun>& runs) {
    bool monotone = true;
    std::vector<double> mean(5, 0.0);
    double random_mean = 0;
    for (const auto& r : runs) {
        const auto& st = r.guided.stats;
        for (std::size_t i = 1; i < st.size(); ++i) monotone &= st[i].cumulative_hit_ratio >= st[i - 1].cumulative_hit_ratio;
        monotone &= st.size() == mean.size();
        for (std::size_t i = 0; i < st.size() && i < mean.size(); ++i) mean[i] += st[i].cumulative_hit_ratio / runs.size();
        random_mean += r.random.stats.front().cumulative_hit_ratio / runs.size();
    }
    report("table2-a-nondecreasing", monotone,
           fmt("mean cumulative %.4f %.4f %.4f %.4f %.4f", mean[0], mean[1], mean[2], mean[3], mean[4]));
    report("table2-b-iteration2-gain", mean[1] > mean[0], fmt("%.4f -> %.4f", mean[0], mean[1]));
    const double ratio = random_mean > 0 ? mean[0] / random_mean : INFINITY;
    report("table2-c-guided-vs-random", ratio >= kGuidedOverRandom,
           fmt("guided %.4f / random %.4f = %.3f (need >= %.1f)", mean[0], random_mean, ratio, kGuidedOverRandom));
}

void learning_effect(const std::vector<SeedRun>& runs) {
    double pre = 0, post = 0;
    for (const auto& r : runs) {
        pre += r.pre_fit / runs.size();
        post += r.post_fit / runs.size();
    }
    report("generator-learning-effect", post > pre,
           fmt("held-out accuracy %.4f before fit, %.4f after (mean of %zu seeds)", pre, post, runs.size()));
}

class RiggedModel final : public gen::GeneratorModel {
public:
    void fit(std::span<const gen::TrainingExample>) override {}
    std::vector<dsl::Program> propose_programs(const tok::TokenizedProblem&, std::size_t) const override {
        return {dsl::parse_program("pos0", reg()), dsl::parse_program("pos1 argc1 denom", reg())};
    }
    std::optional<std::string> propose_answer(const tok::TokenizedProblem&) const override { return "answer-42"; }
};

void fallback() {
    RiggedModel m;
    std::ostringstream a, b;
    cli::answer_question(kLcmQuestion, m, a);
    cli::answer_question(kLcmQuestion, m, b);
    report("fallback-answer-channel", a.str() == "answer-42\n" && a.str() == b.str(),
           fmt("printed \"%s\"", a.str().substr(0, a.str().find('\n')).c_str()));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int tool(std::vector<std::string> args) {
    args.insert(args.begin(), "abducto");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

void reproducibility() {
    const auto root = fs::temp_directory_path() / "abducto_acceptance_repro";
    fs::remove_all(root);
    const auto data = root / "data";
    int rc = tool({"generate", "--templates", "all", "--seed", "31", "--count", "300", "--out", data.string()});
    const auto dataset = (data / "dataset.txt").string();
    auto search = [&](const std::string& name, const std::string& workers) {
        const auto out = root / name;
        return tool({"search", "--dataset", dataset, "--out", out.string(), "--seed", "9", "--workers", workers,
                     "--iterations", "3", "--budget-first", "500", "--budget-next", "50", "--baseline", "none"});
    };
    rc |= search("w1a", "1") | search("w1b", "1") | search("w4", "4");
    const auto a = slurp(root / "w1a" / "solved.jsonl");
    const auto b = slurp(root / "w1b" / "solved.jsonl");
    const auto c = slurp(root / "w4" / "solved.jsonl");
    const auto sa = search::SolvedSet::parse(a, reg());
    const auto sc = search::SolvedSet::parse(c, reg());
    const bool ok = rc == 0 && !a.empty() && a == b && sa == sc;
    report("reproducibility", ok,
           fmt("%zu pairs; single-worker runs %s; 4-worker run %s", sa.size(),
               a == b ? "byte-identical" : "DIFFER", sa == sc ? "set-equal" : "DIFFERS"));
    fs::remove_all(root);
}

}  // namespace

int main() {
    const auto start = Clock::now();
    criterion("golden-executor", golden);
    criterion("kernel-suite", kernel_suite);
    criterion("executor-totality-fuzz", executor_fuzz);
    criterion("table2", [] {
        const auto runs = table2_runs();
        soundness(runs);
        table2(runs);
        learning_effect(runs);
    });
    criterion("fallback-answer-channel", fallback);
    criterion("reproducibility", reproducibility);
    std::printf("%d failed, %.1f s total\n", failures, since(start));
    return failures;
}
