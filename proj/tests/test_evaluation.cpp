#include "fixtures.hpp"

#include "ariel/config.hpp"
#include "ariel/error.hpp"
#include "ariel/evaluation.hpp"
#include "ariel/ngram_lm.hpp"

#include <doctest.h>

using namespace ariel;

TEST_CASE("bounding box") {
    std::vector<Point> pts{{0.1, 0.9}, {0.4, 0.2}};
    auto b = bounding_box(pts);
    CHECK(b.min == std::vector<double>{0.1, 0.2});
    CHECK(b.max == std::vector<double>{0.4, 0.9});
    std::vector<Point> one{{0.3, 0.7}};
    b = bounding_box(one);
    Rng rng(1);
    CHECK(sample_in_box(b, rng) == one[0]);
    CHECK_THROWS_AS(bounding_box(std::vector<Point>{}), InvalidArgument);
}

TEST_CASE("generation on the micro model stays in the language") {
    const auto& lm = fixtures::micro_trie();
    const VolumeCodec codec(lm, 2);
    Rng rng(2);
    auto m = generation_metrics(codec, unit_box(2), 10000, fixtures::micro_grammar(), rng, 10);
    CHECK(m.grammatical_fraction == 1.0);
    CHECK(m.distinct == 8);
    CHECK(m.u <= 8.0 / 10000);
    CHECK(m.v <= m.u);
    CHECK(m.vc == 1.0);

    Rng r1(3);
    auto single = generation_metrics(codec, unit_box(2), 1, fixtures::micro_grammar(), r1, 10);
    CHECK(single.u == 1.0);
    CHECK((single.v == 0.0 || single.v == 1.0));
}

TEST_CASE("prediction and generalization") {
    const auto& g = fixtures::question_grammar();
    const auto bias = make_bias(g.vocabulary(), 0.8, 2);
    const auto d = generate_dataset(g, bias, {2000, 200, 10, 200}, 4);
    std::vector<Sentence> with_test = d.biased_train;
    with_test.insert(with_test.end(), d.biased_test.begin(), d.biased_test.end());
    const auto trie = TrieLM::fit(g.vocabulary(), with_test);
    const VolumeCodec codec(trie, 16);

    auto p = prediction_metrics(codec, d.biased_test, bias, g, Precision::Rational, 21);
    CHECK(p.pab == 1.0);
    CHECK(p.ga == 1.0);
    CHECK(p.ba == 1.0);
    CHECK(p.ba_empty);

    // trie never saw the unbiased sentences
    auto u = generalization_metrics(codec, d.unbiased_test, Precision::Float, 21);
    CHECK(u.pau == 0.0);
    CHECK(u.unseen_prefix == u.n);

    const auto ngram = NgramLM::fit(g.vocabulary(), d.biased_train, 3, 0.01);
    const VolumeCodec nc(ngram, 16);
    auto un = generalization_metrics(nc, d.unbiased_test, Precision::Rational, 21);
    CHECK(un.pau == 1.0);

    // a trie without the test set fails every test sentence: all reported
    const auto train_only = TrieLM::fit(g.vocabulary(), d.biased_train);
    const VolumeCodec tc(train_only, 16);
    auto miss = prediction_metrics(tc, d.biased_test, bias, g, Precision::Float, 21);
    CHECK(miss.pab == 0.0);
    CHECK(miss.unseen_prefix == miss.n);
}

TEST_CASE("segment diversity") {
    const auto& lm = fixtures::micro_trie();
    const VolumeCodec codec(lm, 2);
    const Point a{0.3, 0.3};
    CHECK(segment_diversity(codec, a, a, 2, 10, fixtures::micro_grammar()) == 0.5);
    const VolumeCodec line(lm, 1);
    // one dimension: the segment 0..1 crosses every cell
    const double full = segment_diversity(line, Point{0.0}, Point{1.0}, 1000, 10, fixtures::micro_grammar());
    CHECK(full == 8.0 / 1000);
    CHECK_THROWS_AS(segment_diversity(codec, a, a, 1, 10, fixtures::micro_grammar()), InvalidArgument);
}

TEST_CASE("spearman") {
    std::vector<double> x{1, 2, 3, 4, 5}, y{5, 4, 3, 2, 1}, z{1, 3, 2, 5, 4};
    CHECK(spearman(x, y) == doctest::Approx(-1.0));
    CHECK(spearman(x, x) == doctest::Approx(1.0));
    CHECK(spearman(x, z) == doctest::Approx(0.8));
    std::vector<double> ties{1, 1, 2, 2, 3};
    CHECK(spearman(x, ties) > 0.9);
}

TEST_CASE("report formats") {
    EvalReport r;
    r.model = "trie";
    r.d = 16;
    r.generation.u = 0.99;
    r.generation.v = 0.98;
    const auto json = report_to_json(r);
    for (const char* key : {"\"gc\"", "\"vc\"", "\"u\"", "\"v\"", "\"pab\"", "\"ga\"", "\"ba\"", "\"pau\""})
        CHECK(json.find(key) != std::string::npos);
    const auto table = report_summary(r);
    const auto head = table.substr(0, table.find('\n'));
    std::size_t pos = 0;
    for (const char* col : {" GC", " VC", " V", " U", " BA", " GA", " PAB", " PAU"}) {
        auto at = head.find(col, pos);
        REQUIRE(at != std::string::npos);
        pos = at + 1;
    }
    CHECK(report_csv_header().find("gc,vc,v,u,ba,ga,pab,pau") != std::string::npos);
}

TEST_CASE("config round trip") {
    RunConfig c;
    c.seed = 42;
    c.d = 8;
    c.precision = Precision::Rational;
    c.model = ModelKind::Ngram;
    c.alpha = 0.1;
    c.splits.biased_train = 77;
    c.d_list = {1, 4};
    const auto back = parse_config(config_to_yaml(c));
    CHECK(back.seed == 42);
    CHECK(back.d == 8);
    CHECK(back.precision == Precision::Rational);
    CHECK(back.model == ModelKind::Ngram);
    CHECK(back.alpha == 0.1);
    CHECK(back.splits.biased_train == 77);
    CHECK(back.d_list == std::vector<std::size_t>{1, 4});
    CHECK(back.stage_seed("dataset") == c.stage_seed("dataset"));
    CHECK(config_to_yaml(back) == config_to_yaml(c));
    CHECK(c.stage_seed("dataset") != c.stage_seed("bias"));
    CHECK_THROWS_AS(parse_config("nonsense_key: 1\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_config("codec: {d: 0}\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_config("codec: {precision: double}\n"), InvalidArgument);
    CHECK(parse_config("").d == 16);
}
