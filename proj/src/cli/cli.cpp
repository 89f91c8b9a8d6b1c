#include "abducto/cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "abducto/corpus/corpus.hpp"
#include "abducto/dsl/executor.hpp"
#include "abducto/generator/ngram.hpp"
#include "abducto/search/abduction.hpp"

#ifndef ABDUCTO_VERSION
#define ABDUCTO_VERSION "0.0.0"
#endif

namespace abducto::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex(std::uint64_t v) {
    std::ostringstream o;
    o << std::hex << v;
    return o.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("cannot write " + path.string());
}

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir);
    return fs::path(dir);
}

const dsl::Registry& registry() {
    try {
        return dsl::Registry::builtin();
    } catch (const std::exception& e) {
        throw UsageError(std::string("registry: ") + e.what());
    }
}

ordered_json registry_json() {
    const auto& r = registry();
    const char* path = std::getenv("ABDUCTO_REGISTRY");
    return {{"source", path && *path ? std::string(path) : std::string("bundled")},
            {"operators", r.size()},
            {"docstrings_fnv1a", hex(fnv1a(r.export_docstrings()))}};
}

// Plain datasets alternate question and answer lines; *.jsonl files are
// problem manifests written by `generate`.
std::vector<corpus::Problem> load_problems(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<corpus::Problem> ps;
    try {
        ps = path.size() > 6 && path.ends_with(".jsonl") ? corpus::parse_manifest(text) : corpus::parse_dataset(text);
    } catch (const std::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
    if (ps.empty()) throw UsageError(path + ": dataset is empty");
    return ps;
}

gen::NgramGenerator load_model(const std::string& path) {
    if (path.empty()) return gen::NgramGenerator(registry());
    const std::string text = read_file(path);
    try {
        return gen::NgramGenerator::from_json(text, registry());
    } catch (const std::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

ordered_json config_json(const search::AbductionConfig& c, const std::string& baseline) {
    return {{"budget_first", c.budget_first},     {"budget_next", c.budget_next},
            {"iterations", c.iterations},         {"seed", c.seed},
            {"workers", c.workers},               {"temperature", c.temperature},
            {"max_program_len", c.max_program_len}, {"fuel", c.fuel},
            {"proposals", c.proposals},           {"beam_width", c.beam_width},
            {"part_samples", c.part_samples},     {"raw_draw_factor", c.raw_draw_factor},
            {"baseline", baseline}};
}

ordered_json manifest_head(const std::string& command) {
    return {{"tool", "abducto"}, {"version", ABDUCTO_VERSION}, {"command", command}};
}

std::vector<std::string> split_modules(const std::string& list) {
    std::vector<std::string> out;
    if (list == "all") {
        for (const auto& t : corpus::templates()) out.emplace_back(t.name);
        return out;
    }
    std::stringstream ss(list);
    for (std::string m; std::getline(ss, m, ',');) {
        if (m.empty()) continue;
        if (!corpus::is_template(m)) throw UsageError("unknown template: " + m);
        out.push_back(m);
    }
    if (out.empty()) throw UsageError("no templates given");
    return out;
}

// ---------------------------------------------------------------- commands

struct GenerateOpts {
    std::string modules = "all";
    std::string difficulty = "interpolation";
    std::uint64_t seed = 0;
    std::size_t count = 1000;
    std::string out;
};

int cmd_generate(const GenerateOpts& o, std::ostream& out) {
    const auto modules = split_modules(o.modules);
    const auto diff = corpus::difficulty_from_string(o.difficulty);
    if (!diff) throw UsageError("unknown difficulty: " + o.difficulty);
    const auto problems = corpus::generate_mix(modules, *diff, o.seed, o.count);
    const auto dir = prepare_dir(o.out);
    write_file(dir / "dataset.txt", corpus::format_dataset(problems));
    write_file(dir / "problems.jsonl", corpus::format_manifest(problems));
    ordered_json m = manifest_head("generate");
    m["corpus"] = {{"templates", modules}, {"difficulty", o.difficulty}, {"seed", o.seed}, {"count", o.count}};
    m["registry"] = registry_json();
    m["outputs"] = {"dataset.txt", "problems.jsonl"};
    write_file(dir / "manifest.json", m.dump(2) + "\n");
    out << "generated " << problems.size() << " problems in " << o.out << "\n";
    return kExitOk;
}

struct SearchOpts {
    std::string dataset;
    std::string out;
    std::string baseline = "none";
    search::AbductionConfig cfg;
};

int cmd_search(SearchOpts o, std::ostream& out, std::ostream& err) {
    try {
        o.cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto problems = load_problems(o.dataset);
    const auto dir = prepare_dir(o.out);
    const auto& reg = registry();

    gen::NgramGenerator model(reg, 0.1, o.cfg.max_program_len);
    auto res = search::run_abduction(problems, model, o.cfg, reg, [&](const search::IterationStats& s) {
        err << "iteration " << s.iteration << ": " << s.solved_total << "/" << s.corpus_size << " solved\n";
    });
    std::vector<search::IterationStats> rows = res.stats;
    if (o.baseline == "random") {
        const auto base = search::run_random_baseline(problems, o.cfg, reg);
        rows.push_back(base.stats.front());
    }
    const auto table = search::format_stats_table(rows);
    write_file(dir / "solved.jsonl", res.solved.serialize());
    write_file(dir / "stats.txt", table);
    write_file(dir / "stats.jsonl", search::format_stats_jsonl(rows));
    write_file(dir / "hit_ratio.dat", search::format_hit_ratio_dat(rows));
    write_file(dir / "model.json", model.to_json());

    ordered_json m = manifest_head("search");
    m["dataset"] = {{"path", o.dataset}, {"problems", problems.size()},
                    {"fnv1a", hex(fnv1a(read_file(o.dataset)))}};
    m["registry"] = registry_json();
    m["config"] = config_json(o.cfg, o.baseline);
    m["outputs"] = {"solved.jsonl", "stats.txt", "stats.jsonl", "hit_ratio.dat", "model.json"};
    write_file(dir / "manifest.json", m.dump(2) + "\n");
    out << table;
    return kExitOk;
}

struct EvalOpts {
    std::string dataset;
    std::string model;
    std::string out;
    double threshold = 0.95;
    std::size_t proposals = 8;
    std::size_t fuel = dsl::kDefaultFuel;
};

int cmd_eval(const EvalOpts& o, std::ostream& out) {
    const auto problems = load_problems(o.dataset);
    const auto model = load_model(o.model);
    const auto& reg = registry();
    struct Tally {
        std::size_t n = 0, correct = 0, program_correct = 0;
    };
    std::map<std::string, Tally> per;
    Tally all;
    for (const auto& p : problems) {
        const auto r = gen::solve(tok::tokenize(p.question), model, reg, o.proposals, o.fuel);
        const int s = corpus::score(r.answer, p.answer);
        auto& t = per[p.module.empty() ? "(none)" : p.module];
        for (Tally* x : {&t, &all}) {
            ++x->n;
            x->correct += s;
            x->program_correct += s && r.channel == gen::Channel::Program;
        }
    }
    const auto ratio = [](std::size_t a, std::size_t b) { return b ? static_cast<double>(a) / b : 0.0; };
    std::size_t above = 0;
    std::string table;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-24s %7s %9s %17s\n", "module", "n", "accuracy", "program accuracy");
    table += buf;
    auto records = ordered_json::array();
    for (const auto& [name, t] : per) {
        const double acc = ratio(t.correct, t.n);
        above += acc > o.threshold;
        std::snprintf(buf, sizeof buf, "%-24s %7zu %9.4f %17.4f\n", name.c_str(), t.n, acc,
                      ratio(t.program_correct, t.n));
        table += buf;
        records.push_back({{"module", name}, {"n", t.n}, {"accuracy", acc},
                           {"program_accuracy", ratio(t.program_correct, t.n)}});
    }
    std::snprintf(buf, sizeof buf, "%-24s %7zu %9.4f %17.4f\n", "overall", all.n, ratio(all.correct, all.n),
                  ratio(all.program_correct, all.n));
    table += buf;
    std::snprintf(buf, sizeof buf, "modules >%g%%: %zu of %zu\n", 100.0 * o.threshold, above, per.size());
    table += buf;
    if (!o.out.empty()) {
        const auto dir = prepare_dir(o.out);
        ordered_json summary = {{"overall", ratio(all.correct, all.n)},
                                {"program_accuracy", ratio(all.program_correct, all.n)},
                                {"threshold", o.threshold},
                                {"modules_above_threshold", above},
                                {"modules", records}};
        write_file(dir / "eval.json", summary.dump(2) + "\n");
        write_file(dir / "eval.txt", table);
    }
    out << table;
    return kExitOk;
}

struct SolveOpts {
    std::string question;
    std::string model;
    bool explain = false;
    std::size_t proposals = 8;
    std::size_t fuel = dsl::kDefaultFuel;
};

int cmd_solve(const SolveOpts& o, std::ostream& out) {
    const auto model = load_model(o.model);
    return answer_question(o.question, model, out, o.explain, o.proposals, o.fuel);
}

}  // namespace

int answer_question(const std::string& question, const gen::GeneratorModel& model, std::ostream& out,
                    bool explain, std::size_t proposals, std::size_t fuel) {
    const auto& reg = registry();
    const auto tp = tok::tokenize(question);
    const auto r = gen::solve(tp, model, reg, proposals, fuel);
    out << r.answer << "\n";
    if (r.program) {
        out << "program: " << dsl::print_program(*r.program, reg) << "\n";
        if (explain) {
            const dsl::BoundProblem bound(tp);
            dsl::Machine m(bound, reg, fuel);
            m.set_trace([&](const dsl::TraceStep& s) {
                const dsl::Program one{{*s.op}};
                out << "  " << s.index << "  " << dsl::print_program(one, reg);
                if (s.top) out << "  -> " << dsl::render(*s.top);
                out << "\n";
            });
            m.run(r.program->ops);
        }
    } else if (explain) {
        out << "channel: " << (r.channel == gen::Channel::Answer ? "answer" : "none") << "\n";
    }
    return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"abducto: abductive program search for math word problems"};
    app.set_version_flag("--version", std::string(ABDUCTO_VERSION));
    app.require_subcommand(0, 1);

    std::string trace_path;
    std::size_t trace_count = 10000;
    std::uint64_t trace_seed = 0;
    app.add_option("--emit-trace", trace_path, "write a random kernel trace (JSON lines) and exit");
    app.add_option("--trace-count", trace_count, "records in the kernel trace");
    app.add_option("--trace-seed", trace_seed, "seed for the kernel trace");

    GenerateOpts g;
    auto* gen_cmd = app.add_subcommand("generate", "write a procedurally generated dataset");
    gen_cmd->add_option("--templates,--modules", g.modules, "comma-separated template names, or 'all'");
    gen_cmd->add_option("--difficulty", g.difficulty, "interpolation or extrapolation");
    gen_cmd->add_option("--seed", g.seed);
    gen_cmd->add_option("--count", g.count, "number of problems");
    gen_cmd->add_option("--out", g.out, "output directory")->required();

    SearchOpts s;
    auto* search_cmd = app.add_subcommand("search", "abduce programs for a dataset");
    search_cmd->add_option("--dataset", s.dataset)->required();
    search_cmd->add_option("--out", s.out, "output directory")->required();
    search_cmd->add_option("--seed", s.cfg.seed);
    search_cmd->add_option("--workers", s.cfg.workers);
    search_cmd->add_option("--iterations", s.cfg.iterations);
    search_cmd->add_option("--budget-first", s.cfg.budget_first, "N_w, samples per problem in iteration 1");
    search_cmd->add_option("--budget-next", s.cfg.budget_next, "N_n, samples per problem afterwards");
    search_cmd->add_option("--baseline", s.baseline)->check(CLI::IsMember({"random", "none"}));
    search_cmd->add_option("--temperature", s.cfg.temperature);
    search_cmd->add_option("--max-program-len", s.cfg.max_program_len);
    search_cmd->add_option("--fuel", s.cfg.fuel);

    EvalOpts e;
    auto* eval_cmd = app.add_subcommand("eval", "score a model on a dataset");
    eval_cmd->add_option("--dataset", e.dataset)->required();
    eval_cmd->add_option("--model", e.model, "model file; omitted means the empty model");
    eval_cmd->add_option("--out", e.out, "optional output directory");
    eval_cmd->add_option("--threshold", e.threshold, "per-module accuracy threshold");
    eval_cmd->add_option("--fuel", e.fuel);

    SolveOpts v;
    auto* solve_cmd = app.add_subcommand("solve", "answer one question");
    solve_cmd->add_option("question", v.question)->required();
    solve_cmd->add_option("--model", v.model);
    solve_cmd->add_flag("--explain", v.explain, "print the execution trace");
    solve_cmd->add_option("--fuel", v.fuel);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << ABDUCTO_VERSION << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& ex) {
        err << "abducto: " << ex.what() << "\n";
        return kExitUsage;
    }

    try {
        if (!trace_path.empty()) {
            write_file(trace_path, emit_trace(trace_seed, trace_count));
            return kExitOk;
        }
        if (gen_cmd->parsed()) return cmd_generate(g, out);
        if (search_cmd->parsed()) return cmd_search(s, out, err);
        if (eval_cmd->parsed()) return cmd_eval(e, out);
        if (solve_cmd->parsed()) return cmd_solve(v, out);
        err << app.help();
        return kExitUsage;
    } catch (const UsageError& ex) {
        err << "abducto: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const IoError& ex) {
        err << "abducto: " << ex.what() << "\n";
        return kExitIo;
    } catch (const std::exception& ex) {
        err << "abducto: " << ex.what() << "\n";
        return kExitIo;
    }
}

}  // namespace abducto::cli
