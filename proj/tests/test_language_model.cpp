#include "fixtures.hpp"

#include "ariel/error.hpp"
#include "ariel/model_io.hpp"
#include "ariel/ngram_lm.hpp"
#include "ariel/random.hpp"
#include "ariel/trie_lm.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

using namespace ariel;

namespace {

std::vector<Sentence> sample_corpus(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Sentence> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_sentence(fixtures::question_grammar(), rng));
    return out;
}

double sum(const ProbVector& p) { return std::accumulate(p.begin(), p.end(), 0.0); }

}  // namespace

TEST_CASE("trie conditionals on the micro corpus") {
    const auto& lm = fixtures::micro_trie();
    const Symbol A = 0, B = 1, C = 2, E = 3;
    auto root = lm.next_exact_distribution({});
    CHECK(root.probability(A) == Rational(5, 8));
    CHECK(root.probability(B) == Rational(3, 8));
    CHECK(root.probability(C) == 0);
    CHECK(root.probability(E) == 0);
    const std::vector<Symbol> a{A};
    auto after_a = lm.next_exact_distribution(a);
    CHECK(after_a.probability(A) == Rational(1, 5));
    CHECK(after_a.probability(B) == Rational(2, 5));
    CHECK(after_a.probability(C) == Rational(1, 5));
    CHECK(after_a.probability(E) == Rational(1, 5));
    auto p = lm.next_distribution(a);
    CHECK(p[B] == 0.4);
    CHECK(lm.sentence_count() == 8);
    const std::vector<Symbol> c{C};
    CHECK_THROWS_AS(lm.next_distribution(c), OutOfSupportError);
}

TEST_CASE("trie conditionals match corpus counts") {
    const auto corpus = sample_corpus(3000, 8);
    const auto& v = fixtures::question_grammar().vocabulary();
    const auto lm = TrieLM::fit(v, corpus);
    for (std::size_t i = 0; i < 50; ++i) {
        const auto& s = corpus[i * 37 % corpus.size()];
        for (std::size_t k = 0; k < s.size(); ++k) {
            std::vector<Symbol> prefix(s.begin(), s.begin() + k);
            auto dist = lm.next_exact_distribution(prefix);
            auto [num, den] = fixtures::count_ratio(corpus, prefix, s[k]);
            CHECK(dist.probability(s[k]) == ratio(num, den));
            // prefix additivity: product so far equals extending/total
            Rational prod = 1;
            LmState st = lm.initial_state();
            for (std::size_t j = 0; j < k; ++j) {
                prod *= lm.exact_distribution(st).probability(s[j]);
                st = lm.advance(st, s[j]);
            }
            CHECK(prod == ratio(den, static_cast<long>(corpus.size())));
        }
    }
}

TEST_CASE("trie probabilities of distinct corpus sentences sum to one") {
    const auto corpus = sample_corpus(2000, 9);
    const auto& v = fixtures::question_grammar().vocabulary();
    const auto lm = TrieLM::fit(v, corpus);
    std::set<Sentence> distinct(corpus.begin(), corpus.end());
    Rational total = 0;
    for (const auto& s : distinct) total += lm.exact_sentence_probability(s);
    CHECK(total == 1);
}

TEST_CASE("trie edge cases") {
    Vocabulary v({"X"});
    const std::vector<Sentence> one{{0, 1}};
    const auto lm = TrieLM::fit(v, one);
    auto p = lm.next_distribution({});
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 0.0);
    const std::vector<Symbol> x{0};
    CHECK(lm.next_distribution(x)[1] == 1.0);

    CHECK_THROWS_AS(TrieLM::fit(v, std::vector<Sentence>{}), InvalidArgument);
    CHECK_THROWS_AS(TrieLM::fit(v, std::vector<Sentence>{{0}}), InvalidArgument);  // no EOS

    // duplicates count
    const auto dup = TrieLM::fit(v, std::vector<Sentence>{{0, 1}, {0, 1}, {1}});
    CHECK(dup.next_exact_distribution({}).probability(0) == Rational(2, 3));

    // order independence
    auto corpus = sample_corpus(500, 10);
    const auto& qv = fixtures::question_grammar().vocabulary();
    const auto a = TrieLM::fit(qv, corpus);
    std::reverse(corpus.begin(), corpus.end());
    const auto b = TrieLM::fit(qv, corpus);
    CHECK(serialize_model(a) == serialize_model(b));
}

TEST_CASE("distributions are normalized") {
    const auto corpus = sample_corpus(2000, 12);
    const auto& v = fixtures::question_grammar().vocabulary();
    const auto trie = TrieLM::fit(v, corpus);
    const auto ngram = NgramLM::fit(v, corpus, 3, 0.01);
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        const auto& s = corpus[rng.uniform_index(corpus.size())];
        const std::size_t k = rng.uniform_index(s.size());
        std::vector<Symbol> prefix(s.begin(), s.begin() + k);
        for (const LanguageModel* lm : {static_cast<const LanguageModel*>(&trie), static_cast<const LanguageModel*>(&ngram)}) {
            auto p = lm->next_distribution(prefix);
            CHECK(std::abs(sum(p) - 1.0) < 1e-12);
            CHECK(*std::min_element(p.begin(), p.end()) >= 0.0);
            auto e = lm->next_exact_distribution(prefix);
            Integer total = std::accumulate(e.numerators.begin(), e.numerators.end(), Integer(0));
            CHECK(total == e.denominator);
        }
        const auto pn = ngram.next_distribution(prefix);
        CHECK(*std::min_element(pn.begin(), pn.end()) > 0.0);
    }
}

TEST_CASE("ngram order 1 ignores context") {
    const auto corpus = sample_corpus(500, 13);
    const auto& v = fixtures::question_grammar().vocabulary();
    const auto lm = NgramLM::fit(v, corpus, 1, 0.5);
    std::vector<double> counts(v.size(), 0.0);
    double n = 0;
    for (const auto& s : corpus)
        for (Symbol t : s) ++counts[t], ++n;
    const auto root = lm.next_distribution({});
    for (Symbol t = 0; t < v.size(); ++t)
        CHECK(root[t] == doctest::Approx((counts[t] + 0.5) / (n + 0.5 * v.size())).epsilon(1e-12));
    const std::vector<Symbol> prefix(corpus[0].begin(), corpus[0].end() - 1);
    CHECK(lm.next_distribution(prefix) == root);
}

TEST_CASE("ngram with vanishing alpha matches the trie on short prefixes") {
    const auto corpus = sample_corpus(3000, 14);
    const auto& v = fixtures::question_grammar().vocabulary();
    const auto trie = TrieLM::fit(v, corpus);
    const auto ngram = NgramLM::fit(v, corpus, 4, 1e-13);
    for (std::size_t i = 0; i < 200; ++i) {
        const auto& s = corpus[i];
        for (std::size_t k = 0; k < 3; ++k) {  // prefixes shorter than the order
            std::vector<Symbol> prefix(s.begin(), s.begin() + k);
            auto pt = trie.next_distribution(prefix);
            auto pn = ngram.next_distribution(prefix);
            for (Symbol t = 0; t < v.size(); ++t) CHECK(std::abs(pt[t] - pn[t]) < 1e-9);
        }
    }
}

TEST_CASE("ngram smoothing floor on unseen contexts") {
    const auto corpus = sample_corpus(1000, 15);
    const auto& v = fixtures::question_grammar().vocabulary();
    const double alpha = 0.01;
    const auto lm = NgramLM::fit(v, corpus, 3, alpha);
    double n = 0;
    for (const auto& s : corpus) n += static_cast<double>(s.size());
    const double floor = alpha / (n + alpha * v.size());
    Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        std::vector<Symbol> prefix;
        for (int k = 0; k < 4; ++k) prefix.push_back(static_cast<Symbol>(rng.uniform_index(v.eos())));
        auto p = lm.next_distribution(prefix);
        for (double x : p) CHECK(x >= floor * (1 - 1e-12));
    }
    CHECK_THROWS_AS(NgramLM::fit(v, corpus, 3, 0.0), InvalidArgument);
    CHECK_THROWS_AS(NgramLM::fit(v, corpus, 0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(NgramLM::fit(v, std::vector<Sentence>{}, 2, 0.1), InvalidArgument);
}

TEST_CASE("ngram exact and float distributions agree") {
    const auto corpus = sample_corpus(500, 16);
    const auto& v = fixtures::question_grammar().vocabulary();
    const auto lm = NgramLM::fit(v, corpus, 2, 0.25);
    const std::vector<Symbol> prefix(corpus[3].begin(), corpus[3].begin() + 2);
    auto p = lm.next_distribution(prefix);
    auto e = lm.next_exact_distribution(prefix);
    for (Symbol t = 0; t < v.size(); ++t) CHECK(p[t] == doctest::Approx(e.probability(t).get_d()).epsilon(1e-14));
}

TEST_CASE("model serialization") {
    const auto corpus = sample_corpus(1000, 17);
    const auto& v = fixtures::question_grammar().vocabulary();
    const auto trie = TrieLM::fit(v, corpus);
    const auto ngram = NgramLM::fit(v, corpus, 3, 0.01);
    for (const LanguageModel* lm : {static_cast<const LanguageModel*>(&trie), static_cast<const LanguageModel*>(&ngram)}) {
        const std::string bytes = serialize_model(*lm);
        const auto back = deserialize_model(bytes, &v);
        CHECK(back->kind() == lm->kind());
        CHECK(serialize_model(*back) == bytes);
        Rng rng(3);
        for (int i = 0; i < 100; ++i) {
            const auto& s = corpus[rng.uniform_index(corpus.size())];
            std::vector<Symbol> prefix(s.begin(), s.begin() + rng.uniform_index(s.size()));
            CHECK(lm->next_distribution(prefix) == back->next_distribution(prefix));
        }
        CHECK_FALSE(model_debug_json(*lm).empty());

        CHECK_THROWS_AS(deserialize_model(bytes.substr(0, bytes.size() / 2)), FormatError);
        CHECK_THROWS_AS(deserialize_model(bytes.substr(0, 10)), FormatError);
        std::string flipped = bytes;
        flipped[bytes.size() / 2] ^= 0x40;
        CHECK_THROWS_AS(deserialize_model(flipped), FormatError);
        std::string version = bytes;
        version[8] = 9;
        CHECK_THROWS_WITH_AS(deserialize_model(version), doctest::Contains("version"), FormatError);
        CHECK_THROWS_AS(deserialize_model(bytes, &fixtures::micro_grammar().vocabulary()), VocabularyError);
        CHECK_THROWS_AS(deserialize_model("not a model at all"), FormatError);
    }
}
