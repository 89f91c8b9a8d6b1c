#include <fstream>
#include <sstream>

#include <json.hpp>

#include "abducto/corpus/corpus.hpp"

namespace abducto::corpus {

std::string_view to_string(Difficulty d) noexcept {
    return d == Difficulty::Interpolation ? "interpolation" : "extrapolation";
}

std::optional<Difficulty> difficulty_from_string(std::string_view s) noexcept {
    if (s == "interpolation") return Difficulty::Interpolation;
    if (s == "extrapolation") return Difficulty::Extrapolation;
    return std::nullopt;
}

int score(std::string_view predicted, std::string_view answer) noexcept { return predicted == answer ? 1 : 0; }

std::vector<Problem> parse_dataset(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string line(text.substr(pos, nl - pos));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        pos = nl + 1;
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) throw DatasetError(DatasetErrc::EmptyLine, "empty line " + std::to_string(i + 1));
    }
    if (lines.size() % 2 != 0) {
        throw DatasetError(DatasetErrc::OddLineCount, std::to_string(lines.size()) + " lines");
    }
    std::vector<Problem> out;
    out.reserve(lines.size() / 2);
    for (std::size_t i = 0; i < lines.size(); i += 2) {
        Problem p;
        p.question = std::move(lines[i]);
        p.answer = std::move(lines[i + 1]);
        out.push_back(std::move(p));
    }
    return out;
}

std::string format_dataset(std::span<const Problem> problems) {
    std::string out;
    for (const auto& p : problems) out += p.question + "\n" + p.answer + "\n";
    return out;
}

std::vector<Problem> load_dataset_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetError(DatasetErrc::Io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_dataset(ss.str());
}

void save_dataset_file(std::span<const Problem> problems, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DatasetError(DatasetErrc::Io, "cannot write " + path);
    out << format_dataset(problems);
    if (!out) throw DatasetError(DatasetErrc::Io, "write failed: " + path);
}

std::string format_manifest(std::span<const Problem> problems) {
    std::string out;
    for (const auto& p : problems) {
        nlohmann::ordered_json rec = {{"question", p.question},
                                      {"answer", p.answer},
                                      {"module", p.module},
                                      {"difficulty", to_string(p.difficulty)}};
        out += rec.dump() + "\n";
    }
    return out;
}

std::vector<Problem> parse_manifest(std::string_view text) {
    std::vector<Problem> out;
    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto rec = nlohmann::json::parse(line);
            Problem p;
            p.question = rec.at("question").get<std::string>();
            p.answer = rec.at("answer").get<std::string>();
            p.module = rec.value("module", std::string{});
            const auto d = difficulty_from_string(rec.value("difficulty", std::string("interpolation")));
            if (!d) throw DatasetError(DatasetErrc::Io, "bad difficulty on manifest line " + std::to_string(line_no));
            p.difficulty = *d;
            out.push_back(std::move(p));
        } catch (const nlohmann::json::exception& e) {
            throw DatasetError(DatasetErrc::Io, "manifest line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace abducto::corpus
