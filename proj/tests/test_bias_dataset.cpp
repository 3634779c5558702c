#include "fixtures.hpp"

#include "ariel/bias.hpp"
#include "ariel/dataset.hpp"
#include "ariel/error.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using namespace ariel;

namespace {

// unpack the strict upper triangle into a full table, independently of
// BiasMatrix::compatible
std::vector<std::vector<bool>> table(const BiasMatrix& b) {
    const std::size_t n = b.size();
    std::vector<std::vector<bool>> t(n, std::vector<bool>(n, false));
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        t[i][i] = true;
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            const bool bit = (b.packed_bits()[k / 8] >> (k % 8)) & 1;
            t[i][j] = t[j][i] = bit;
        }
    }
    return t;
}

bool complies_oracle(const BiasMatrix& b, const std::vector<std::vector<bool>>& t, const Sentence& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (!b.exempt(s[i]) && !b.exempt(s[j]) && !t[s[i]][s[j]]) return false;
    return true;
}

std::size_t distinct_content(const BiasMatrix& b, const Sentence& s) {
    std::set<Symbol> c;
    for (Symbol x : s)
        if (!b.exempt(x)) c.insert(x);
    return c.size();
}

}  // namespace

TEST_CASE("bias matrix structure") {
    const auto& v = fixtures::question_grammar().vocabulary();
    const auto b = make_bias(v, 0.5, 7);
    CHECK(b.size() == v.size());
    CHECK(b.exempt(v.eos()));
    CHECK(b.exempt(*v.find("the")));
    CHECK(b.exempt(*v.find("?")));
    CHECK_FALSE(b.exempt(*v.find("teal")));
    std::size_t on = 0, total = 0;
    for (Symbol i = 0; i < v.size(); ++i) {
        CHECK(b.compatible(i, i));
        for (Symbol j = i + 1; j < v.size(); ++j) {
            CHECK(b.compatible(i, j) == b.compatible(j, i));
            on += b.compatible(i, j);
            ++total;
        }
    }
    CHECK(static_cast<double>(on) / total == doctest::Approx(0.5).epsilon(0.01));
    CHECK(make_bias(v, 0.5, 7) == b);
    CHECK_FALSE(make_bias(v, 0.5, 8) == b);
}

TEST_CASE("bias density bounds") {
    const auto& v = fixtures::question_grammar().vocabulary();
    CHECK_THROWS_AS(make_bias(v, -0.1, 1), InvalidArgument);
    CHECK_THROWS_AS(make_bias(v, 1.5, 1), InvalidArgument);
    const auto& g = fixtures::question_grammar();
    Rng rng(3);
    const auto all = make_bias(v, 1.0, 1);
    const auto none = make_bias(v, 0.0, 1);
    for (int i = 0; i < 2000; ++i) {
        auto s = sample_sentence(g, rng);
        CHECK(complies(all, s));
        CHECK(complies(none, s) == (distinct_content(none, s) <= 1));
    }
}

TEST_CASE("complies agrees with a direct table lookup") {
    const auto& g = fixtures::question_grammar();
    const auto b = make_bias(g.vocabulary(), 0.7, 21);
    const auto t = table(b);
    Rng rng(4);
    int yes = 0, no = 0;
    for (int i = 0; i < 5000; ++i) {
        auto s = sample_sentence(g, rng);
        const bool c = complies(b, s);
        CHECK(c == complies_oracle(b, t, s));
        (c ? yes : no)++;
    }
    CHECK(yes > 0);
    CHECK(no > 0);
    // a single content word never violates
    const auto& v = g.vocabulary();
    CHECK(complies(b, fixtures::sent(v, "is it teal ?")));
    // find an incompatible content pair and use it
    const Symbol teal = *v.find("teal");
    for (Symbol w = 0; w < v.eos(); ++w) {
        if (b.exempt(w) || b.compatible(teal, w)) continue;
        Sentence s{*v.find("is"), *v.find("it"), teal, *v.find("and"), w, *v.find("?"), v.eos()};
        CHECK_FALSE(complies(b, s));
        break;
    }
}

TEST_CASE("bias json round trip") {
    const auto& v = fixtures::question_grammar().vocabulary();
    const auto b = make_bias(v, 0.3, 12);
    CHECK(bias_from_json(bias_to_json(b)) == b);
    CHECK_THROWS_AS(bias_from_json("{}"), FormatError);
    CHECK_THROWS_AS(bias_from_json("not json"), FormatError);
}

TEST_CASE("dataset splits: sizes, disjointness, predicates") {
    const auto& g = fixtures::question_grammar();
    const auto bias = make_bias(g.vocabulary(), 0.8, 2);
    const SplitSizes sizes{1000, 100, 32, 100};
    const auto d = generate_dataset(g, bias, sizes, 17);
    CHECK(d.biased_train.size() == 1000);
    CHECK(d.biased_test.size() == 100);
    CHECK(d.biased_val.size() == 32);
    CHECK(d.unbiased_test.size() == 100);
    std::set<Sentence> seen;
    std::size_t total = 0;
    for (Split sp : kAllSplits) {
        for (const auto& s : d.get(sp)) {
            ++total;
            seen.insert(s);
            CHECK(recognize(g, s).grammatical);
            CHECK(complies(bias, s) == (sp != Split::UnbiasedTest));
        }
    }
    CHECK(seen.size() == total);

    const auto again = generate_dataset(g, bias, sizes, 17);
    for (Split sp : kAllSplits) CHECK(again.get(sp) == d.get(sp));
    const auto other = generate_dataset(g, bias, sizes, 18);
    CHECK(other.biased_train != d.biased_train);
}

TEST_CASE("dataset timeout when a split cannot fill") {
    const auto& g = fixtures::question_grammar();
    const auto all = make_bias(g.vocabulary(), 1.0, 2);
    DatasetOptions opts;
    opts.max_draws = 5000;
    CHECK_THROWS_AS(generate_dataset(g, all, {10, 1, 1, 1}, 1, opts), DatasetTimeout);
    // the micro language has only eight sentences
    const auto& m = fixtures::micro_grammar();
    const auto mb = make_bias(m.vocabulary(), 1.0, 2);
    CHECK_THROWS_AS(generate_dataset(m, mb, {9, 0, 0, 0}, 1, opts), DatasetTimeout);
}

TEST_CASE("jsonl round trip and vocabulary errors") {
    const auto& g = fixtures::question_grammar();
    const auto bias = make_bias(g.vocabulary(), 0.8, 2);
    const auto d = generate_dataset(g, bias, {50, 5, 5, 5}, 3);
    std::ostringstream out;
    write_jsonl(out, g.vocabulary(), d.biased_train, "biased_train");
    std::istringstream in(out.str());
    CHECK(read_jsonl(in, g.vocabulary()) == d.biased_train);
    CHECK(out.str().find("\"split\":\"biased_train\"") != std::string::npos);
    std::istringstream bad("{\"tokens\": [\"is\", \"qwerty\", \"?\"]}\n");
    CHECK_THROWS_AS(read_jsonl(bad, g.vocabulary()), VocabularyError);
    std::istringstream broken("{\"tokens\": \n");
    CHECK_THROWS_AS(read_jsonl(broken, g.vocabulary()), FormatError);
}
