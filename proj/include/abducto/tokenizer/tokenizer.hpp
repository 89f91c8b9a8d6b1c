#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace abducto::tok {

class TokenizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Lowercase ordinary words. Entries containing a digit, single letters and the
// ordinal words below are never stored, whatever the source file says.
class WordDictionary {
public:
    WordDictionary() = default;

    // One word per line; '#' starts a comment; blank lines ignored.
    static WordDictionary from_text(std::string_view text);
    // Throws TokenizeError when the file cannot be read.
    static WordDictionary from_file(const std::string& path);
    // The bundled list (data/words.txt).
    static const WordDictionary& builtin();

    // first..twentieth, square, cube, double, triple, half, quarter.
    static bool is_excluded_ordinal(std::string_view lowercase);

    // Returns false when the word is not admissible (see above).
    bool add(std::string_view word);
    bool contains(std::string_view lowercase) const;
    std::size_t size() const noexcept { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

enum class TokenKind { Word, Expression };

struct Token {
    std::string raw;       // as it appears in the question
    std::string stripped;  // trailing '.', '?', ',' removed
    std::size_t raw_index = 0;
    TokenKind kind = TokenKind::Word;
};

// A maximal run of Expression tokens. `text` is the raw tokens joined by single
// spaces with the trailing punctuation of the last token removed, so inner
// commas survive: "-2*v + 1873 = 4*x - 3*x, x = 2*v - 1863".
struct Slot {
    std::string text;
    std::size_t first_raw = 0;
    std::size_t last_raw = 0;
};

struct TokenizedProblem {
    std::string raw_text;
    std::vector<Token> tokens;
    std::vector<Slot> slots;
    std::optional<std::string> answer;

    // The slot that starts at raw index i, if any.
    const Slot* slot_starting_at(std::size_t i) const;
    // Index into `slots` of the slot covering raw index i, if any.
    std::optional<std::size_t> slot_covering(std::size_t i) const;
};

// Whitespace split, punctuation strip, dictionary classification, then merging
// of adjacent Expression tokens. A run is also cut after a token ending in '.'
// or '?', so no slot spans two sentences. Throws TokenizeError on empty or
// all-whitespace input.
TokenizedProblem tokenize(std::string_view text, const WordDictionary& dict = WordDictionary::builtin());

// Sentence parts. A boundary is a token ending in '.' or '?' that is followed
// by a token starting with an uppercase letter, or by the end of the text; the
// boundary punctuation is dropped.
std::vector<std::string> split_parts(std::string_view text);

// The same boundaries expressed as inclusive raw-token ranges of a tokenized
// problem.
struct PartSpan {
    std::size_t first_raw = 0;
    std::size_t last_raw = 0;
};
std::vector<PartSpan> part_spans(const TokenizedProblem& problem);

}  // namespace abducto::tok
