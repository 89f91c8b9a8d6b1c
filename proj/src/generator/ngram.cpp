#include "abducto/generator/ngram.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "abducto/dsl/executor.hpp"

namespace abducto::gen {

using dsl::Operator;
using dsl::Program;

std::string signature_text(const tok::TokenizedProblem& problem) {
    std::string out;
    for (const auto& t : problem.tokens) {
        if (t.kind != tok::TokenKind::Word || t.stripped.empty()) continue;
        if (!out.empty()) out += ' ';
        for (char c : t.stripped) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::uint64_t signature_hash(std::string_view signature) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : signature) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

constexpr std::uint32_t kBos = 0xffff0001u;
constexpr std::uint32_t kEos = 0xffff0002u;

std::uint32_t code(const Operator& op) { return (static_cast<std::uint32_t>(op.kind) << 16) | op.value; }

std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<std::string> word_set(const std::string& signature) {
    std::set<std::string> s;
    std::istringstream in(signature);
    for (std::string w; in >> w;) s.insert(w);
    return {s.begin(), s.end()};
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t common = 0;
    for (auto i = a.begin(), j = b.begin(); i != a.end() && j != b.end();) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

// Pos token index -> slot ordinal; nullopt when some Pos is not a slot start.
std::optional<Program> to_skeleton(const Program& p, const tok::TokenizedProblem& tp, std::size_t& needed) {
    Program s = p;
    needed = 0;
    for (auto& op : s.ops) {
        if (op.kind != Operator::Kind::Pos) continue;
        auto it = std::find_if(tp.slots.begin(), tp.slots.end(),
                               [&](const tok::Slot& sl) { return sl.first_raw == op.value; });
        if (it == tp.slots.end()) return std::nullopt;
        op.value = static_cast<std::uint32_t>(it - tp.slots.begin());
        needed = std::max<std::size_t>(needed, op.value + 1);
    }
    return s;
}

Program rebind(const Program& skeleton, const tok::TokenizedProblem& tp) {
    Program p = skeleton;
    for (auto& op : p.ops) {
        if (op.kind == Operator::Kind::Pos) op.value = static_cast<std::uint32_t>(tp.slots[op.value].first_raw);
    }
    return p;
}

}  // namespace

NgramGenerator::NgramGenerator(const dsl::Registry& registry, double smoothing, std::size_t max_len)
    : registry_(&registry), smoothing_(smoothing), max_len_(max_len) {
    if (!(smoothing > 0.0)) throw std::invalid_argument("smoothing must be positive");
}

std::size_t NgramGenerator::skeleton_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [h, f] : families_) n += f.skeletons.size();
    return n;
}

void NgramGenerator::fit(std::span<const TrainingExample> examples) {
    examples_.assign(examples.begin(), examples.end());
    example_words_.clear();
    exact_.clear();
    families_.clear();
    family_order_.clear();
    tri_sig_.clear();
    tri_.clear();
    bi_.clear();

    for (std::size_t i = 0; i < examples_.size(); ++i) {
        const auto& ex = examples_[i];
        const auto tp = tok::tokenize(ex.question);
        const std::string sig = signature_text(tp);
        const std::uint64_t h = signature_hash(sig);
        example_words_.push_back(word_set(sig));
        exact_.emplace(ex.question, i);

        auto [it, fresh] = families_.try_emplace(h);
        if (fresh) {
            it->second.signature = sig;
            it->second.words = example_words_.back();
            family_order_.push_back(h);
        }
        it->second.members.push_back(i);
        std::size_t needed = 0;
        const auto skel = to_skeleton(ex.program, tp, needed);
        if (!skel) continue;
        auto& sks = it->second.skeletons;
        auto found = std::find_if(sks.begin(), sks.end(), [&](const Skeleton& s) { return s.program == *skel; });
        if (found == sks.end()) {
            sks.push_back({*skel, needed, 1, 0});
        } else {
            ++found->count;
        }

        std::uint32_t a = kBos;
        std::uint32_t b = kBos;
        auto observe = [&](std::uint32_t c) {
            tri_sig_[mix(mix(mix(h, a), b), c)] += 1.0;
            tri_[mix(mix(mix(0, a), b), c)] += 1.0;
            bi_[mix(mix(1, b), c)] += 1.0;
            a = b;
            b = c;
        };
        for (const auto& op : skel->ops) observe(code(op));
        observe(kEos);
    }
    // Support: how many members of the family (up to kSupportSample) a
    // skeleton reproduces once re-bound. Programs that only fit their own
    // question by coincidence rank below ones that fit the whole family.
    for (auto& [h, f] : families_) {
        const std::size_t sample = std::min(f.members.size(), kSupportSample);
        std::vector<dsl::BoundProblem> bound;
        for (std::size_t m = 0; m < sample; ++m) bound.emplace_back(tok::tokenize(examples_[f.members[m]].question));
        for (auto& sk : f.skeletons) {
            for (std::size_t m = 0; m < sample; ++m) {
                const auto& tp = bound[m].problem();
                if (sk.slots_needed > tp.slots.size()) continue;
                const auto out = dsl::execute(rebind(sk.program, tp), bound[m], *registry_);
                sk.support += out.value && *out.value == examples_[f.members[m]].answer;
            }
        }
        std::stable_sort(f.skeletons.begin(), f.skeletons.end(), [&](const Skeleton& x, const Skeleton& y) {
            if (x.support != y.support) return x.support > y.support;
            if (x.program.size() != y.program.size()) return x.program.size() < y.program.size();
            if (x.count != y.count) return x.count > y.count;
            return dsl::print_program(x.program, *registry_) < dsl::print_program(y.program, *registry_);
        });
    }
}

void NgramGenerator::rollouts(const tok::TokenizedProblem& problem, std::uint64_t sig, std::size_t k,
                              std::vector<Program>& out) const {
    const std::size_t slots = problem.slots.size();
    const auto entries = registry_->entries();
    std::mt19937_64 rng(signature_hash(problem.raw_text));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::set<Program> have(out.begin(), out.end());

    std::vector<Operator> allowed;
    std::vector<double> w;
    for (std::size_t attempt = 0; attempt < 20 * k && out.size() < k; ++attempt) {
        Program skel;
        std::size_t depth = 0;
        int pending = -1;  // argc awaiting its math operator
        std::uint32_t a = kBos;
        std::uint32_t b = kBos;
        for (;;) {
            allowed.clear();
            const std::size_t room = max_len_ - skel.size();
            bool can_stop = false;
            if (pending >= 0) {
                for (std::size_t id = 0; id < entries.size(); ++id) {
                    if (entries[id].kind == dsl::OpKind::Math && entries[id].admits(static_cast<unsigned>(pending))) {
                        allowed.push_back(Operator::math(static_cast<dsl::OpId>(id)));
                    }
                }
            } else {
                if (room >= 1) {
                    for (std::size_t j = 0; j < slots; ++j) allowed.push_back(Operator::pos(static_cast<std::uint32_t>(j)));
                }
                if (room >= 2) {
                    for (unsigned kk = 0; kk <= std::min<std::size_t>(depth, 3); ++kk) {
                        bool any = false;
                        for (const auto& e : entries) any = any || (e.kind == dsl::OpKind::Math && e.admits(kk));
                        if (any) allowed.push_back(Operator::argc(kk));
                    }
                }
                if (room >= 1 && depth >= 1) {
                    for (std::size_t id = 0; id < entries.size(); ++id) {
                        if (entries[id].kind == dsl::OpKind::Convert) {
                            allowed.push_back(Operator::convert(static_cast<dsl::OpId>(id)));
                        }
                    }
                }
                can_stop = depth >= 1;
            }
            w.clear();
            double total = 0.0;
            auto weight = [&](std::uint32_t c) {
                auto get = [](const Counts& m, std::uint64_t key) {
                    auto it = m.find(key);
                    return it == m.end() ? 0.0 : it->second;
                };
                return 4.0 * get(tri_sig_, mix(mix(mix(sig, a), b), c)) + 2.0 * get(tri_, mix(mix(mix(0, a), b), c)) +
                       get(bi_, mix(mix(1, b), c)) + smoothing_;
            };
            for (const auto& op : allowed) {
                w.push_back(weight(code(op)));
                total += w.back();
            }
            const double w_stop = can_stop ? weight(kEos) : 0.0;
            total += w_stop;
            double r = unit(rng) * total;
            std::size_t pick = allowed.size();
            for (std::size_t i = 0; i < allowed.size(); ++i) {
                if (r < w[i]) {
                    pick = i;
                    break;
                }
                r -= w[i];
            }
            if (pick == allowed.size()) {
                if (!can_stop) pick = allowed.size() - 1;  // rounding at the top end
                else break;
            }
            const Operator op = allowed[pick];
            switch (op.kind) {
                case Operator::Kind::Pos:
                    ++depth;
                    break;
                case Operator::Kind::Argc:
                    pending = static_cast<int>(op.value);
                    break;
                case Operator::Kind::Math:
                    depth = depth - static_cast<std::size_t>(pending) + 1;
                    pending = -1;
                    break;
                case Operator::Kind::Convert:
                    break;
            }
            skel.ops.push_back(op);
            a = b;
            b = code(op);
        }
        Program p = rebind(skel, problem);
        if (have.insert(p).second) out.push_back(std::move(p));
    }
}

std::vector<Program> NgramGenerator::propose_programs(const tok::TokenizedProblem& problem, std::size_t k) const {
    std::vector<Program> out;
    if (k == 0 || examples_.empty() || problem.slots.empty()) return out;
    const std::string sig = signature_text(problem);
    const std::uint64_t h = signature_hash(sig);
    const std::size_t slots = problem.slots.size();
    std::set<Program> have;
    auto take = [&](const Skeleton& s) {
        if (out.size() >= k || s.slots_needed > slots) return;
        Program p = rebind(s.program, problem);
        if (have.insert(p).second) out.push_back(std::move(p));
    };

    if (auto it = families_.find(h); it != families_.end()) {
        for (const auto& s : it->second.skeletons) take(s);
    }
    if (out.size() < k) {
        const auto words = word_set(sig);
        std::vector<std::pair<double, std::uint64_t>> near;
        for (std::uint64_t fh : family_order_) {
            if (fh == h) continue;
            const double j = jaccard(words, families_.at(fh).words);
            if (j >= 0.5) near.emplace_back(j, fh);
        }
        std::stable_sort(near.begin(), near.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
        for (const auto& [j, fh] : near) {
            for (const auto& s : families_.at(fh).skeletons) take(s);
        }
    }
    if (out.size() < k) rollouts(problem, h, k, out);
    return out;
}

std::optional<std::string> NgramGenerator::propose_answer(const tok::TokenizedProblem& problem) const {
    if (examples_.empty()) return std::nullopt;
    if (auto it = exact_.find(problem.raw_text); it != exact_.end()) return examples_[it->second].answer;
    const auto words = word_set(signature_text(problem));
    double best = 0.0;
    std::optional<std::size_t> arg;
    for (std::size_t i = 0; i < examples_.size(); ++i) {
        const double j = jaccard(words, example_words_[i]);
        if (j > best) {
            best = j;
            arg = i;
        }
    }
    if (!arg) return std::nullopt;
    return examples_[*arg].answer;
}

std::string NgramGenerator::to_json() const {
    nlohmann::ordered_json j;
    j["format"] = "abducto-ngram";
    j["version"] = 1;
    j["smoothing"] = smoothing_;
    j["max_len"] = max_len_;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& ex : examples_) {
        nlohmann::ordered_json e;
        e["question"] = ex.question;
        e["answer"] = ex.answer;
        e["program"] = dsl::print_program(ex.program, *registry_);
        arr.push_back(std::move(e));
    }
    j["examples"] = std::move(arr);
    return j.dump(1) + "\n";
}

NgramGenerator NgramGenerator::from_json(std::string_view text, const dsl::Registry& registry) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("model file: ") + e.what());
    }
    if (j.value("format", "") != "abducto-ngram") throw std::invalid_argument("model file: unknown format");
    if (j.value("version", 0) != 1) throw std::invalid_argument("model file: unsupported version");
    NgramGenerator g(registry, j.value("smoothing", 0.1), j.value("max_len", std::size_t{12}));
    std::vector<TrainingExample> ex;
    for (const auto& e : j.at("examples")) {
        ex.push_back({e.at("question").get<std::string>(), e.at("answer").get<std::string>(),
                      dsl::parse_program(e.at("program").get<std::string>(), registry)});
    }
    g.fit(ex);
    return g;
}

void NgramGenerator::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_json();
    if (!out) throw std::runtime_error("cannot write " + path);
}

NgramGenerator NgramGenerator::load(const std::string& path, const dsl::Registry& registry) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str(), registry);
}

}  // namespace abducto::gen
