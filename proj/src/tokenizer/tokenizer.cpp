#include "abducto/tokenizer/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

namespace abducto::tok {

std::string_view bundled_words();  // generated from data/words.txt

namespace {

constexpr std::array<std::string_view, 26> kOrdinals = {
    "first",      "second",     "third",      "fourth",      "fifth",    "sixth",
    "seventh",    "eighth",     "ninth",      "tenth",       "eleventh", "twelfth",
    "thirteenth", "fourteenth", "fifteenth",  "sixteenth",   "seventeenth",
    "eighteenth", "nineteenth", "twentieth",  "square",      "cube",     "double",
    "triple",     "half",       "quarter"};

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_trailing_punct(char c) { return c == '.' || c == '?' || c == ','; }
bool ends_sentence(std::string_view raw) { return !raw.empty() && (raw.back() == '.' || raw.back() == '?'); }

struct Span {
    std::size_t begin;
    std::size_t end;
};

std::vector<Span> scan(std::string_view text) {
    std::vector<Span> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        if (i == text.size()) break;
        const std::size_t b = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        out.push_back({b, i});
    }
    return out;
}

std::string_view strip_trailing(std::string_view s) {
    while (!s.empty() && is_trailing_punct(s.back())) s.remove_suffix(1);
    return s;
}

// Token indices after which a sentence ends.
template <typename RawAt>
std::vector<std::size_t> boundaries(std::size_t n, RawAt raw_at) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::string_view raw = raw_at(i);
        if (!ends_sentence(raw)) continue;
        if (i + 1 == n || std::isupper(static_cast<unsigned char>(raw_at(i + 1).front()))) {
            out.push_back(i);
        }
    }
    if (n > 0 && (out.empty() || out.back() != n - 1)) out.push_back(n - 1);
    return out;
}

}  // namespace

WordDictionary WordDictionary::from_text(std::string_view text) {
    WordDictionary d;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
        while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
        if (!line.empty()) d.add(line);
        pos = nl + 1;
    }
    return d;
}

WordDictionary WordDictionary::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TokenizeError("cannot read dictionary file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

const WordDictionary& WordDictionary::builtin() {
    static const WordDictionary dict = from_text(bundled_words());
    return dict;
}

bool WordDictionary::is_excluded_ordinal(std::string_view lowercase) {
    return std::find(kOrdinals.begin(), kOrdinals.end(), lowercase) != kOrdinals.end();
}

bool WordDictionary::add(std::string_view word) {
    std::string w = lower(word);
    if (w.size() < 2 || is_excluded_ordinal(w)) return false;
    if (std::any_of(w.begin(), w.end(), [](unsigned char c) { return std::isdigit(c); })) return false;
    words_.insert(std::move(w));
    return true;
}

bool WordDictionary::contains(std::string_view lowercase) const {
    return words_.find(std::string(lowercase)) != words_.end();
}

const Slot* TokenizedProblem::slot_starting_at(std::size_t i) const {
    auto it = std::lower_bound(slots.begin(), slots.end(), i,
                               [](const Slot& s, std::size_t v) { return s.first_raw < v; });
    return it != slots.end() && it->first_raw == i ? &*it : nullptr;
}

std::optional<std::size_t> TokenizedProblem::slot_covering(std::size_t i) const {
    auto it = std::upper_bound(slots.begin(), slots.end(), i,
                               [](std::size_t v, const Slot& s) { return v < s.first_raw; });
    if (it == slots.begin()) return std::nullopt;
    --it;
    if (i > it->last_raw) return std::nullopt;
    return static_cast<std::size_t>(it - slots.begin());
}

TokenizedProblem tokenize(std::string_view text, const WordDictionary& dict) {
    const auto spans = scan(text);
    if (spans.empty()) throw TokenizeError("EmptyInput");

    TokenizedProblem p;
    p.raw_text = std::string(text);
    p.tokens.reserve(spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
        Token t;
        t.raw = std::string(text.substr(spans[i].begin, spans[i].end - spans[i].begin));
        t.stripped = std::string(strip_trailing(t.raw));
        t.raw_index = i;
        const std::string key = lower(t.stripped);
        t.kind = (key.empty() || dict.contains(key)) ? TokenKind::Word : TokenKind::Expression;
        p.tokens.push_back(std::move(t));
    }

    for (std::size_t i = 0; i < p.tokens.size();) {
        if (p.tokens[i].kind != TokenKind::Expression) {
            ++i;
            continue;
        }
        Slot s;
        s.first_raw = i;
        s.text = p.tokens[i].raw;
        while (!ends_sentence(p.tokens[i].raw) && i + 1 < p.tokens.size() &&
               p.tokens[i + 1].kind == TokenKind::Expression) {
            ++i;
            s.text += ' ';
            s.text += p.tokens[i].raw;
        }
        s.last_raw = i;
        s.text = std::string(strip_trailing(s.text));
        p.slots.push_back(std::move(s));
        ++i;
    }
    return p;
}

std::vector<std::string> split_parts(std::string_view text) {
    const auto spans = scan(text);
    const auto ends = boundaries(spans.size(), [&](std::size_t i) {
        return text.substr(spans[i].begin, spans[i].end - spans[i].begin);
    });
    std::vector<std::string> out;
    std::size_t first = 0;
    for (std::size_t e : ends) {
        std::string_view part = text.substr(spans[first].begin, spans[e].end - spans[first].begin);
        if (ends_sentence(part)) part.remove_suffix(1);
        while (!part.empty() && is_space(part.back())) part.remove_suffix(1);
        if (!part.empty()) out.emplace_back(part);
        first = e + 1;
    }
    return out;
}

std::vector<PartSpan> part_spans(const TokenizedProblem& problem) {
    const auto ends = boundaries(problem.tokens.size(),
                                 [&](std::size_t i) -> std::string_view { return problem.tokens[i].raw; });
    std::vector<PartSpan> out;
    std::size_t first = 0;
    for (std::size_t e : ends) {
        out.push_back({first, e});
        first = e + 1;
    }
    return out;
}

}  // namespace abducto::tok
