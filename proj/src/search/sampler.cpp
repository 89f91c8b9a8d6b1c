#include "abducto/search/sampler.hpp"

#include <algorithm>

namespace abducto::search {

using dsl::Operator;
using dsl::Program;

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string program_key(const Program& p) {
    std::string key;
    key.reserve(p.ops.size() * 3);
    for (const auto& op : p.ops) {
        key += static_cast<char>(op.kind);
        std::uint32_t v = op.value;
        do {
            key += static_cast<char>(0x80 | (v & 0x7f));
            v >>= 7;
        } while (v);
        key += '\0';
    }
    return key;
}

Program sample_program(const OperatorDistribution& dist, const tok::TokenizedProblem& problem,
                       const dsl::Registry& registry, Rng& rng, std::size_t max_len, const StepWeights& weights) {
    std::vector<std::uint32_t> positions;
    positions.reserve(problem.slots.size());
    for (const auto& s : problem.slots) positions.push_back(static_cast<std::uint32_t>(s.first_raw));
    return sample_program(dist, positions, registry, rng, max_len, weights);
}

Program sample_program(const OperatorDistribution& dist, const std::vector<std::uint32_t>& positions,
                       const dsl::Registry& registry, Rng& rng, std::size_t max_len, const StepWeights& weights) {
    if (positions.empty()) throw Unsampleable("problem has no expression slots");
    if (max_len == 0) throw Unsampleable("max_len must be at least 1");
    const auto entries = registry.entries();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick_pos(0, positions.size() - 1);

    Program p;
    std::size_t depth = 0;
    std::vector<double> op_w(entries.size());
    std::vector<unsigned> ks;
    for (;;) {
        const std::size_t room = max_len - p.ops.size();
        // An operator fits when the stack supplies one of its arities and the
        // encoding (argc + math, or a lone convert) fits in the remaining room.
        double op_mass = 0.0;
        for (std::size_t id = 0; id < entries.size(); ++id) {
            const auto& e = entries[id];
            bool fits = false;
            if (e.kind == dsl::OpKind::Convert) {
                fits = depth >= 1 && room >= 1;
            } else if (room >= 2) {
                for (unsigned k = 0; k <= std::min<std::size_t>(depth, 3) && !fits; ++k) fits = e.admits(k);
            }
            op_w[id] = fits ? dist.probs[id] : 0.0;
            op_mass += op_w[id];
        }
        const double w_push = room >= 1 ? (depth == 0 ? 1.0
                                           : depth == 1 ? weights.push_empty
                                                        : weights.push_deep / static_cast<double>(depth - 1))
                                         : 0.0;
        const double w_op = op_mass > 0.0 ? weights.op : 0.0;
        const double w_stop = depth == 0 ? 0.0 : depth == 1 ? weights.stop_single : weights.stop_deep;
        const double total = w_push + w_op + w_stop;
        if (total <= 0.0) break;  // unreachable for depth >= 1
        double r = unit(rng) * total;
        if (r < w_push || (w_op == 0.0 && w_stop == 0.0)) {
            p.ops.push_back(Operator::pos(positions[pick_pos(rng)]));
            ++depth;
            continue;
        }
        r -= w_push;
        if (r >= w_op) break;  // stop

        double s = unit(rng) * op_mass;
        std::size_t chosen = entries.size() - 1;
        for (std::size_t id = 0; id < entries.size(); ++id) {
            if (op_w[id] == 0.0) continue;
            chosen = id;
            if (s < op_w[id]) break;
            s -= op_w[id];
        }
        const auto& e = entries[chosen];
        if (e.kind == dsl::OpKind::Convert) {
            p.ops.push_back(Operator::convert(static_cast<dsl::OpId>(chosen)));
            continue;
        }
        ks.clear();
        for (unsigned k = 0; k <= std::min<std::size_t>(depth, 3); ++k) {
            if (e.admits(k)) ks.push_back(k);
        }
        const unsigned k = ks[std::uniform_int_distribution<std::size_t>(0, ks.size() - 1)(rng)];
        p.ops.push_back(Operator::argc(k));
        p.ops.push_back(Operator::math(static_cast<dsl::OpId>(chosen)));
        depth = depth - k + 1;
    }
    return p;
}

}  // namespace abducto::search
