#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "abducto/cli/cli.hpp"
#include "abducto/dsl/registry.hpp"

using namespace abducto;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result abducto_run(std::vector<std::string> args) {
    args.insert(args.begin(), "abducto");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("abducto_cli_" + name);
    fs::remove_all(p);
    return p;
}

const char* const kLcmQuestion = "Calculate the common denominator of 25/13728 and 121/1248.";

class RiggedModel final : public gen::GeneratorModel {
public:
    void fit(std::span<const gen::TrainingExample>) override {}
    std::vector<dsl::Program> propose_programs(const tok::TokenizedProblem&, std::size_t) const override {
        const auto& reg = dsl::Registry::builtin();
        return {dsl::parse_program("pos0", reg), dsl::parse_program("argc2 lcm", reg)};
    }
    std::optional<std::string> propose_answer(const tok::TokenizedProblem&) const override { return "42"; }
};

}  // namespace

TEST_CASE("usage errors") {
    CHECK(abducto_run({"frobnicate"}).code == cli::kExitUsage);
    CHECK(abducto_run({"generate"}).code == cli::kExitUsage);
    CHECK(abducto_run({"generate", "--templates", "probability", "--out", scratch("bad").string()}).code ==
          cli::kExitUsage);
    CHECK(abducto_run({"search", "--dataset", "x.txt"}).code == cli::kExitUsage);
    const auto v = abducto_run({"--version"});
    CHECK(v.code == cli::kExitOk);
    CHECK_FALSE(v.out.empty());
}

TEST_CASE("generate writes both dataset formats") {
    const auto dir = scratch("gen");
    const auto r = abducto_run({"generate", "--templates", "numbers_lcm,compose_2", "--seed", "3", "--count", "40",
                                "--out", dir.string()});
    REQUIRE(r.code == cli::kExitOk);
    const auto text = slurp(dir / "dataset.txt");
    CHECK(line_count(text) == 80);
    CHECK(line_count(slurp(dir / "problems.jsonl")) == 40);
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["tool"] == "abducto");

    const auto again = scratch("gen2");
    REQUIRE(abducto_run({"generate", "--templates", "numbers_lcm,compose_2", "--seed", "3", "--count", "40",
                         "--out", again.string()})
                .code == cli::kExitOk);
    CHECK(slurp(again / "dataset.txt") == text);
    fs::remove_all(dir);
    fs::remove_all(again);
}

TEST_CASE("search, eval and solve round trip") {
    const auto data = scratch("rt_data");
    REQUIRE(abducto_run({"generate", "--templates", "numbers_lcm,numbers_gcd,compose_2", "--seed", "5", "--count",
                         "60", "--out", data.string()})
                .code == cli::kExitOk);
    const auto dataset = (data / "dataset.txt").string();

    const auto run_a = scratch("rt_a");
    const auto a = abducto_run({"search", "--dataset", dataset, "--out", run_a.string(), "--iterations", "2",
                                "--budget-first", "300", "--budget-next", "40", "--baseline", "random"});
    REQUIRE(a.code == cli::kExitOk);
    for (const char* f : {"solved.jsonl", "stats.txt", "stats.jsonl", "hit_ratio.dat", "model.json", "manifest.json"})
        CHECK(fs::exists(run_a / f));
    // two abduction rows plus one baseline row
    CHECK(line_count(slurp(run_a / "stats.jsonl")) == 3);
    CHECK(a.out.find("random-baseline") != std::string::npos);

    SUBCASE("identical manifests give byte-identical solved sets") {
        const auto run_b = scratch("rt_b");
        REQUIRE(abducto_run({"search", "--dataset", dataset, "--out", run_b.string(), "--iterations", "2",
                             "--budget-first", "300", "--budget-next", "40", "--baseline", "random"})
                    .code == cli::kExitOk);
        CHECK(slurp(run_b / "solved.jsonl") == slurp(run_a / "solved.jsonl"));
        auto ma = nlohmann::json::parse(slurp(run_a / "manifest.json"));
        auto mb = nlohmann::json::parse(slurp(run_b / "manifest.json"));
        ma.erase("outputs");
        mb.erase("outputs");
        ma.erase("command");
        mb.erase("command");
        CHECK(ma == mb);
        fs::remove_all(run_b);
    }

    SUBCASE("one iteration gives one row") {
        const auto run_c = scratch("rt_c");
        REQUIRE(abducto_run({"search", "--dataset", dataset, "--out", run_c.string(), "--iterations", "1",
                             "--budget-first", "100", "--budget-next", "20", "--baseline", "none"})
                    .code == cli::kExitOk);
        CHECK(line_count(slurp(run_c / "stats.jsonl")) == 1);
        fs::remove_all(run_c);
    }

    SUBCASE("eval with the learned model") {
        const auto model = (run_a / "model.json").string();
        const auto manifest = (data / "problems.jsonl").string();
        const auto e = abducto_run({"eval", "--dataset", manifest, "--model", model});
        REQUIRE(e.code == cli::kExitOk);
        CHECK(e.out.find("overall") != std::string::npos);
        CHECK(e.out.find("modules >95%:") != std::string::npos);

        const auto empty = abducto_run({"eval", "--dataset", manifest});
        REQUIRE(empty.code == cli::kExitOk);
        CHECK(empty.out.find("modules >95%: 0 of 3") != std::string::npos);

        const auto out = scratch("rt_eval");
        REQUIRE(abducto_run({"eval", "--dataset", manifest, "--model", model, "--out", out.string()}).code ==
                cli::kExitOk);
        const auto summary = nlohmann::json::parse(slurp(out / "eval.json"));
        CHECK(summary["modules"].size() == 3);
        CHECK(summary["overall"].get<double>() > 0.5);
        fs::remove_all(out);
    }

    SUBCASE("solve with the learned model") {
        const auto model = (run_a / "model.json").string();
        const auto s = abducto_run({"solve", kLcmQuestion, "--model", model});
        REQUIRE(s.code == cli::kExitOk);
        const auto answer = s.out.substr(0, s.out.find('\n'));
        CHECK_FALSE(answer.empty());
        CHECK(s.out.find("\nprogram: ") != std::string::npos);
        // the explained trace ends on the printed answer
        const auto x = abducto_run({"solve", kLcmQuestion, "--model", model, "--explain"});
        CHECK(x.out.rfind(s.out, 0) == 0);
        CHECK(line_count(x.out) > 2);
        CHECK(x.out.substr(x.out.rfind("-> ")) == "-> " + answer + "\n");
    }

    fs::remove_all(run_a);
    fs::remove_all(data);
}

TEST_CASE("dataset and model errors") {
    const auto out = scratch("err");
    CHECK(abducto_run({"search", "--dataset", "/nonexistent/d.txt", "--out", out.string()}).code == cli::kExitIo);
    const auto empty = fs::temp_directory_path() / "abducto_cli_empty.txt";
    std::ofstream(empty).close();
    CHECK(abducto_run({"search", "--dataset", empty.string(), "--out", out.string()}).code == cli::kExitUsage);
    CHECK(abducto_run({"solve", kLcmQuestion, "--model", "/nonexistent/m.json"}).code == cli::kExitIo);
    fs::remove(empty);
    fs::remove_all(out);
}

TEST_CASE("solve without a model or on gibberish") {
    const auto s = abducto_run({"solve", "Zorp the blivet."});
    CHECK(s.code == cli::kExitOk);
    CHECK(s.out == "\n");
}

TEST_CASE("answer channel fallback") {
    RiggedModel m;
    std::ostringstream out;
    CHECK(cli::answer_question(kLcmQuestion, m, out) == cli::kExitOk);
    CHECK(out.str() == "42\n");
    std::ostringstream explained;
    cli::answer_question(kLcmQuestion, m, explained, true);
    CHECK(explained.str() == "42\nchannel: answer\n");
}

TEST_CASE("kernel trace") {
    const auto text = cli::emit_trace(7, 500);
    CHECK(line_count(text) == 500);
    CHECK(text == cli::emit_trace(7, 500));
    CHECK(text != cli::emit_trace(8, 500));
    std::istringstream in(text);
    std::string line;
    std::size_t id = 0;
    while (std::getline(in, line)) {
        const auto r = nlohmann::json::parse(line);
        CHECK(r["id"] == id++);
        CHECK(r["op"].is_string());
        CHECK(r["args"].is_array());
        if (r["result"].is_null()) CHECK(r["error"].is_string());
    }

    const auto path = fs::temp_directory_path() / "abducto_cli_trace.jsonl";
    REQUIRE(abducto_run({"--emit-trace", path.string(), "--trace-count", "50", "--trace-seed", "7"}).code ==
            cli::kExitOk);
    CHECK(slurp(path) == cli::emit_trace(7, 50));
    fs::remove(path);
}
