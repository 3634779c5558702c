#include "fixtures.hpp"

#include "ariel/error.hpp"
#include "ariel/grammar.hpp"
#include "ariel/random.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <set>

using namespace ariel;

namespace {

// all terminal strings derivable from `sym`, by brute-force expansion
std::set<std::vector<Symbol>> enumerate(const Grammar& g, GrammarSymbol sym) {
    if (sym.terminal) return {{sym.id}};
    std::set<std::vector<Symbol>> out;
    for (auto pi : g.productions_of(sym.id)) {
        std::set<std::vector<Symbol>> partial{{}};
        for (const auto& r : g.productions()[pi].rhs) {
            std::set<std::vector<Symbol>> next;
            for (const auto& tail : enumerate(g, r))
                for (const auto& head : partial) {
                    auto s = head;
                    s.insert(s.end(), tail.begin(), tail.end());
                    next.insert(s);
                }
            partial = std::move(next);
        }
        out.insert(partial.begin(), partial.end());
    }
    return out;
}

}  // namespace

TEST_CASE("micro grammar: vocabulary and productions") {
    const auto loaded = load_grammar(fixtures::kMicroGrammar);
    const auto& v = loaded.grammar.vocabulary();
    CHECK(v.tokens() == std::vector<std::string>{"A", "B", "C", "<eos>"});
    CHECK(v.eos() == 3);
    CHECK(loaded.grammar.productions().size() == 8);
    CHECK(loaded.warnings.empty());
}

TEST_CASE("micro grammar language has exactly eight sentences") {
    const auto& g = fixtures::micro_grammar();
    auto lang = enumerate(g, {g.start(), false});
    CHECK(lang.size() == 8);
    for (const auto& s : fixtures::micro_corpus()) {
        std::vector<Symbol> body(s.begin(), s.end() - 1);
        CHECK(lang.count(body) == 1);
    }
}

TEST_CASE("micro grammar sampling matches uniform alternatives") {
    const auto& g = fixtures::micro_grammar();
    Rng rng(99);
    std::map<Sentence, long> hist;
    const long n = 100000;
    for (long i = 0; i < n; ++i) {
        auto s = sample_sentence(g, rng);
        REQUIRE(s.back() == g.vocabulary().eos());
        ++hist[s];
    }
    CHECK(hist.size() == 8);
    const double p = 1.0 / 8, sigma = std::sqrt(n * p * (1 - p));
    for (const auto& [s, c] : hist) CHECK(std::abs(c - n * p) < 3 * sigma);
}

TEST_CASE("question grammar loads with 840 words and no recursion") {
    const auto loaded = load_grammar_file(fixtures::question_grammar_path());
    CHECK(loaded.grammar.vocabulary().size() - 1 == 840);
    CHECK_FALSE(loaded.grammar.is_recursive());
    CHECK(loaded.warnings.empty());
    auto stats = loaded.grammar.length_stats();
    REQUIRE(stats);
    CHECK(stats->max_length == 19);
    CHECK(stats->min_length >= 3);
}

TEST_CASE("loader errors") {
    SUBCASE("empty text") {
        CHECK_THROWS_WITH_AS(load_grammar(""), doctest::Contains("no start symbol"), GrammarError);
        CHECK_THROWS_AS(load_grammar("# only a comment\n"), GrammarError);
    }
    SUBCASE("syntax error carries line and column") {
        try {
            load_grammar("s -> 'a' x\nx -> 'b' |\n");
            FAIL("expected a grammar error");
        } catch (const GrammarError& e) {
            CHECK(e.line() == 2);
            CHECK(e.column() > 0);
        }
        CHECK_THROWS_AS(load_grammar("s -> 'a\n"), GrammarError);
        CHECK_THROWS_AS(load_grammar("s 'a'\n"), GrammarError);
    }
    SUBCASE("undefined nonterminal") {
        CHECK_THROWS_WITH_AS(load_grammar("s -> 'a' missing\n"), doctest::Contains("missing"), GrammarError);
    }
    SUBCASE("reserved token") { CHECK_THROWS(load_grammar("s -> '<eos>'\n")); }
}

TEST_CASE("recursive grammar: warning, sampling needs a depth cap") {
    const auto loaded = load_grammar("s -> s 'a' | 'b'\n");
    CHECK_FALSE(loaded.warnings.empty());
    CHECK(loaded.grammar.is_recursive());
    CHECK_FALSE(loaded.grammar.length_stats());
    Rng rng(1);
    CHECK_THROWS_AS(sample_sentence(loaded.grammar, rng), Error);
    // recognition still works on left recursion
    const auto& v = loaded.grammar.vocabulary();
    CHECK(recognize(loaded.grammar, fixtures::sent(v, "b a a a")).grammatical);
    CHECK_FALSE(recognize(loaded.grammar, fixtures::sent(v, "a b")).grammatical);
    SampleOptions capped{2};
    int exceeded = 0;
    for (int i = 0; i < 200; ++i) {
        try {
            auto s = sample_sentence(loaded.grammar, rng, capped);
            CHECK(recognize(loaded.grammar, s).grammatical);
        } catch (const Error& e) {
            CHECK(e.kind() == "depth_exceeded");
            ++exceeded;
        }
    }
    CHECK(exceeded > 0);
}

TEST_CASE("recognize: question grammar examples") {
    const auto& g = fixtures::question_grammar();
    std::vector<std::string> ok{"is", "it", "huge", "and", "teal", "?"};
    auto r = recognize(g, std::span<const std::string>(ok));
    CHECK(r.grammatical);
    CHECK(r.adjective_count == 2);
    REQUIRE(r.rule_class);
    CHECK(*r.rule_class == 2);

    std::vector<std::string> bad{"is", "the", "thing", "slightly", "heavy", "heavy", "stone", "squeezable",
                                 "closed", "sea", "heavy", "?"};
    r = recognize(g, std::span<const std::string>(bad));
    CHECK_FALSE(r.grammatical);
    CHECK_FALSE(r.rule_class);

    std::vector<std::string> unknown{"is", "it", "qwertyuiop", "?"};
    CHECK_FALSE(recognize(g, std::span<const std::string>(unknown)).grammatical);

    const Sentence eos_only{g.vocabulary().eos()};
    CHECK_FALSE(recognize(g, eos_only).grammatical);
}

TEST_CASE("sampled sentences are recognized with 0..3 adjectives") {
    const auto& g = fixtures::question_grammar();
    Rng rng(5);
    std::set<unsigned> classes;
    for (int i = 0; i < 10000; ++i) {
        auto s = sample_sentence(g, rng);
        auto r = recognize(g, s);
        REQUIRE(r.grammatical);
        REQUIRE(r.rule_class);
        CHECK(r.adjective_count <= 3);
        CHECK(*r.rule_class == r.adjective_count);
        classes.insert(r.adjective_count);
    }
    CHECK(classes.size() == 4);
}

TEST_CASE("sampling is deterministic in the seed") {
    const auto& g = fixtures::question_grammar();
    Rng a(7), b(7), c(8);
    std::vector<Sentence> sa, sb, sc;
    for (int i = 0; i < 50; ++i) sa.push_back(sample_sentence(g, a)), sb.push_back(sample_sentence(g, b)), sc.push_back(sample_sentence(g, c));
    CHECK(sa == sb);
    CHECK(sa != sc);
}

TEST_CASE("length statistics agree with sampling") {
    const auto& g = fixtures::question_grammar();
    const auto stats = *g.length_stats();
    Rng rng(11);
    double sum = 0;
    std::size_t mx = 0, mn = 100;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        auto len = sample_sentence(g, rng).size() - 1;
        sum += static_cast<double>(len);
        mx = std::max(mx, len);
        mn = std::min(mn, len);
    }
    CHECK(mx <= stats.max_length);
    CHECK(mn >= stats.min_length);
    CHECK(sum / n == doctest::Approx(stats.expected_length).epsilon(0.01));
}
