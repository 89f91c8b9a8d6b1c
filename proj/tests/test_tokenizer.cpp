#include <doctest.h>

#include <random>

#include "abducto/tokenizer/tokenizer.hpp"

using namespace abducto::tok;

namespace {

std::vector<std::size_t> expression_indices(const TokenizedProblem& p) {
    std::vector<std::size_t> out;
    for (const auto& t : p.tokens) {
        if (t.kind == TokenKind::Expression) out.push_back(t.raw_index);
    }
    return out;
}

const char* const kCompositional =
    "Suppose -2*v + 1873 = 4*x - 3*x, x = 2*v - 1863. Let u = -65 + 25. "
    "Find the common denominator of 1/6 and v/(-920) - 8/u.";

}  // namespace

TEST_SUITE("tokenize") {
    TEST_CASE("common denominator question has two fraction slots") {
        const auto p = tokenize("Calculate the common denominator of 25/13728 and 121/1248.");
        CHECK(expression_indices(p) == std::vector<std::size_t>{5, 7});
        REQUIRE(p.slots.size() == 2);
        CHECK(p.slots[0].text == "25/13728");
        CHECK(p.slots[0].first_raw == 5);
        CHECK(p.slots[1].text == "121/1248");
        CHECK(p.slots[1].first_raw == 7);
        CHECK(p.tokens[7].raw == "121/1248.");
        CHECK(p.tokens[7].stripped == "121/1248");
    }

    TEST_CASE("adjacent expression tokens merge into one slot") {
        const auto p = tokenize("What is 18*q(f) + 4*r(f)?");
        REQUIRE(p.slots.size() == 1);
        CHECK(p.slots[0].text == "18*q(f) + 4*r(f)");
        CHECK(p.slots[0].first_raw == 2);
        CHECK(p.slots[0].last_raw == 4);
    }

    TEST_CASE("plain words give no slots") {
        CHECK(tokenize("hello world").slots.empty());
    }

    TEST_CASE("empty input") {
        CHECK_THROWS_AS(tokenize(""), TokenizeError);
        CHECK_THROWS_AS(tokenize(" \t\n"), TokenizeError);
    }

    TEST_CASE("inner commas survive in merged slots") {
        const auto p = tokenize(kCompositional);
        REQUIRE(p.slots.size() == 4);
        CHECK(p.slots[0].text == "-2*v + 1873 = 4*x - 3*x, x = 2*v - 1863");
        CHECK(p.slots[0].first_raw == 1);
        CHECK(p.slots[0].last_raw == 12);
        CHECK(p.slots[1].text == "u = -65 + 25");
        CHECK(p.slots[1].first_raw == 14);
        CHECK(p.slots[2].text == "1/6");
        CHECK(p.slots[3].text == "v/(-920) - 8/u");
        CHECK(p.slots[3].first_raw == 26);
    }

    TEST_CASE("runs stop at a sentence end") {
        const auto p = tokenize("Let x = 5. y = 3");
        REQUIRE(p.slots.size() == 2);
        CHECK(p.slots[0].text == "x = 5");
        CHECK(p.slots[1].text == "y = 3");
    }

    TEST_CASE("ordinals and single letters are expressions") {
        const auto p = tokenize("Find the second derivative of x wrt x.");
        CHECK(expression_indices(p) == std::vector<std::size_t>{2, 5, 7});
    }

    TEST_CASE("classification ignores case") {
        const auto a = tokenize("CALCULATE THE Common denominator OF 1/2 AND 1/3.");
        const auto b = tokenize("calculate the common denominator of 1/2 and 1/3.");
        CHECK(expression_indices(a) == expression_indices(b));
    }

    TEST_CASE("slot lookup") {
        const auto p = tokenize("What is 18*q(f) + 4*r(f)?");
        CHECK(p.slot_starting_at(2) != nullptr);
        CHECK(p.slot_starting_at(3) == nullptr);
        CHECK(p.slot_covering(4) == std::optional<std::size_t>(0));
        CHECK(!p.slot_covering(1));
        CHECK(!p.slot_covering(9));
    }
}

TEST_SUITE("tokenize properties") {
    TEST_CASE("indices, slot coverage, merge idempotence") {
        const std::vector<std::string> pieces = {"the", "of", "x", "2*y", "+", "3/4", "and", "Let", "=", "7.",
                                                 "q(x),", "What", "is", "-5", "second", "sum?", "1.5"};
        std::mt19937 rng(7);
        for (int trial = 0; trial < 2000; ++trial) {
            std::string text;
            const int n = 1 + static_cast<int>(rng() % 12);
            for (int i = 0; i < n; ++i) {
                if (i) text += (rng() % 5 == 0) ? "  " : " ";
                text += pieces[rng() % pieces.size()];
            }
            const auto p = tokenize(text);
            for (std::size_t i = 0; i < p.tokens.size(); ++i) CHECK(p.tokens[i].raw_index == i);

            std::size_t covered = 0;
            for (std::size_t s = 0; s < p.slots.size(); ++s) {
                const auto& slot = p.slots[s];
                CHECK(slot.first_raw <= slot.last_raw);
                if (s) CHECK(p.slots[s - 1].last_raw < slot.first_raw);
                for (std::size_t i = slot.first_raw; i <= slot.last_raw; ++i) {
                    CHECK(p.tokens[i].kind == TokenKind::Expression);
                }
                covered += slot.last_raw - slot.first_raw + 1;
                if (!slot.text.empty()) {
                    const auto again = tokenize(slot.text);
                    CHECK(again.slots.size() == 1);
                    CHECK(again.slots[0].text == slot.text);
                }
            }
            CHECK(covered == expression_indices(p).size());

            const auto again = tokenize(text);
            CHECK(expression_indices(again) == expression_indices(p));
        }
    }
}

TEST_SUITE("split_parts") {
    TEST_CASE("three-part compositional problem") {
        const auto parts = split_parts(kCompositional);
        REQUIRE(parts.size() == 3);
        CHECK(parts[0] == "Suppose -2*v + 1873 = 4*x - 3*x, x = 2*v - 1863");
        CHECK(parts[1] == "Let u = -65 + 25");
        CHECK(parts[2] == "Find the common denominator of 1/6 and v/(-920) - 8/u");
    }

    TEST_CASE("single sentence") {
        CHECK(split_parts("Calculate lcm of 4 and 6.") == std::vector<std::string>{"Calculate lcm of 4 and 6"});
    }

    TEST_CASE("single-letter sentences") {
        const auto parts = split_parts("A. B. C.");
        CHECK(parts == std::vector<std::string>{"A", "B", "C"});
        CHECK(split_parts("A. B. C.") == parts);
    }

    TEST_CASE("periods inside tokens or before lowercase do not split") {
        CHECK(split_parts("Round 3.5 to the nearest integer.").size() == 1);
        CHECK(split_parts("Let x = 5. y = 3").size() == 1);
        CHECK(split_parts("What is 2? What is 3?").size() == 2);
    }

    TEST_CASE("parts recover the text up to boundaries") {
        std::string joined;
        for (const auto& p : split_parts(kCompositional)) joined += p + ". ";
        CHECK(joined.substr(0, joined.size() - 1) == kCompositional);
    }

    TEST_CASE("part spans agree with split_parts") {
        const auto p = tokenize(kCompositional);
        const auto spans = part_spans(p);
        REQUIRE(spans.size() == 3);
        CHECK(spans[0].first_raw == 0);
        CHECK(spans[0].last_raw == 12);
        CHECK(spans[1].first_raw == 13);
        CHECK(spans[1].last_raw == 18);
        CHECK(spans[2].first_raw == 19);
        CHECK(spans[2].last_raw == 28);
        const auto parts = split_parts(kCompositional);
        for (std::size_t k = 0; k < spans.size(); ++k) {
            CHECK(tokenize(parts[k]).tokens.size() == spans[k].last_raw - spans[k].first_raw + 1);
        }
    }
}

TEST_SUITE("dictionary") {
    TEST_CASE("admission rules") {
        WordDictionary d;
        CHECK(d.add("Denominator"));
        CHECK(d.contains("denominator"));
        CHECK_FALSE(d.add("x"));
        CHECK_FALSE(d.add("second"));
        CHECK_FALSE(d.add("half"));
        CHECK_FALSE(d.add("abc1"));
        CHECK(d.size() == 1);
    }

    TEST_CASE("file format") {
        const auto d = WordDictionary::from_text("# comment\nsolve\n\n  find  # trailing\nq\n");
        CHECK(d.size() == 2);
        CHECK(d.contains("solve"));
        CHECK(d.contains("find"));
        CHECK_THROWS_AS(WordDictionary::from_file("/nonexistent/words.txt"), TokenizeError);
    }

    TEST_CASE("bundled list") {
        const auto& d = WordDictionary::builtin();
        CHECK(d.size() > 300);
        for (char c = 'a'; c <= 'z'; ++c) CHECK_FALSE(d.contains(std::string(1, c)));
        for (const char* w : {"first", "second", "twentieth", "square", "cube", "double", "triple", "half", "quarter"}) {
            CHECK_FALSE(d.contains(w));
        }
        CHECK(d.contains("calculate"));
        CHECK(d.contains("denominator"));
    }
}
