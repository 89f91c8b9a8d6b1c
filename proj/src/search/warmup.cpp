#include "abducto/search/warmup.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace abducto::search {

std::vector<std::string> TfIdfSimilarity::words(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (cur.size() >= 2) out.push_back(cur);
        cur.clear();
    };
    for (char c : text) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

namespace {

std::unordered_map<std::string, double> term_counts(const std::vector<std::string>& ws) {
    std::unordered_map<std::string, double> tf;
    for (const auto& w : ws) tf[w] += 1.0;
    return tf;
}

void normalize(std::unordered_map<std::string, double>& v) {
    double norm = 0.0;
    for (const auto& [w, x] : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return;
    for (auto& [w, x] : v) x /= norm;
}

}  // namespace

TfIdfSimilarity::TfIdfSimilarity(const dsl::Registry& registry) {
    std::vector<std::unordered_map<std::string, double>> tfs;
    std::unordered_map<std::string, double> df;
    for (const auto& e : registry.entries()) {
        tfs.push_back(term_counts(words(e.docstring)));
        for (const auto& [w, c] : tfs.back()) df[w] += 1.0;
    }
    const double n = static_cast<double>(tfs.size());
    for (const auto& [w, d] : df) idf_[w] = std::log((1.0 + n) / (1.0 + d)) + 1.0;
    for (auto& tf : tfs) {
        for (auto& [w, x] : tf) x *= idf_[w];
        normalize(tf);
        docs_.push_back(std::move(tf));
    }
}

std::vector<double> TfIdfSimilarity::similarities(std::string_view text) const {
    auto q = term_counts(words(text));
    for (auto it = q.begin(); it != q.end();) {
        auto idf = idf_.find(it->first);
        if (idf == idf_.end()) {
            it = q.erase(it);
        } else {
            it->second *= idf->second;
            ++it;
        }
    }
    normalize(q);
    std::vector<double> out(docs_.size(), 0.0);
    for (std::size_t i = 0; i < docs_.size(); ++i) {
        double dot = 0.0;
        for (const auto& [w, x] : q) {
            auto it = docs_[i].find(w);
            if (it != docs_[i].end()) dot += x * it->second;
        }
        out[i] = dot;
    }
    return out;
}

OperatorDistribution warmup_distribution(const tok::TokenizedProblem& problem, const TextSimilarity& sim,
                                         double temperature, double floor) {
    const auto scores = sim.similarities(problem.raw_text);
    OperatorDistribution d;
    d.temperature = temperature;
    const std::size_t n = scores.size();
    if (n == 0) return d;
    d.probs.assign(n, 0.0);
    if (!std::isfinite(temperature)) {
        d.probs.assign(n, 1.0 / static_cast<double>(n));
        return d;
    }
    const double top = *std::max_element(scores.begin(), scores.end());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d.probs[i] = std::exp((scores[i] - top) / temperature);
        total += d.probs[i];
    }
    const double keep = 1.0 - static_cast<double>(n) * floor;
    for (auto& p : d.probs) p = keep * (p / total) + floor;
    return d;
}

OperatorDistribution warmup_distribution(const tok::TokenizedProblem& problem, const dsl::Registry& registry,
                                         double temperature) {
    return warmup_distribution(problem, TfIdfSimilarity(registry), temperature);
}

OperatorDistribution uniform_distribution(std::size_t n) {
    OperatorDistribution d;
    d.temperature = std::numeric_limits<double>::infinity();
    d.probs.assign(n, n ? 1.0 / static_cast<double>(n) : 0.0);
    return d;
}

}  // namespace abducto::search
