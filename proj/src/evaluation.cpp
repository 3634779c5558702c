#include "ariel/evaluation.hpp"

#include "ariel/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <numeric>
#include <set>
#include <sstream>

namespace ariel {

namespace {

void check_vocab(const VolumeCodec& codec, const Grammar& grammar) {
    if (!(codec.model().vocabulary() == grammar.vocabulary()))
        throw VocabularyError("model and grammar vocabularies differ");
}

struct Trip {
    Outcome outcome = Outcome::Mismatch;
    DecodeResult decoded;
};

Trip round_trip(const VolumeCodec& codec, std::span<const Symbol> s, Precision precision, std::size_t n_max) {
    Trip t;
    try {
        if (precision == Precision::Float)
            t.decoded = codec.decode(codec.encode(s), n_max);
        else
            t.decoded = codec.decode_exact(codec.encode_exact(s), n_max);
    } catch (const OutOfSupportError&) {
        t.outcome = Outcome::UnseenPrefix;
        return t;
    } catch (const PrecisionError&) {
        t.outcome = Outcome::Underflow;
        return t;
    }
    t.outcome = std::equal(s.begin(), s.end(), t.decoded.sentence.begin(), t.decoded.sentence.end())
                    ? Outcome::Exact
                    : Outcome::Mismatch;
    return t;
}

double frac(std::size_t a, std::size_t b) { return b ? static_cast<double>(a) / static_cast<double>(b) : 0.0; }

std::vector<double> ranks(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

std::string_view outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Exact: return "exact";
        case Outcome::Mismatch: return "mismatch";
        case Outcome::UnseenPrefix: return "unseen_prefix";
        case Outcome::Underflow: return "precision_underflow";
    }
    return "unknown";
}

SamplingBox bounding_box(std::span<const Point> points) {
    if (points.empty()) throw InvalidArgument("bounding box of an empty point set");
    SamplingBox b{points.front(), points.front()};
    for (const auto& p : points) {
        if (p.size() != b.dims()) throw InvalidArgument("points of differing dimension");
        for (std::size_t k = 0; k < p.size(); ++k) {
            b.min[k] = std::min(b.min[k], p[k]);
            b.max[k] = std::max(b.max[k], p[k]);
        }
    }
    return b;
}

SamplingBox unit_box(std::size_t d) { return {std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)}; }

Point sample_in_box(const SamplingBox& box, Rng& rng) {
    Point p(box.dims());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = box.min[k] + (box.max[k] - box.min[k]) * rng.uniform();
    return p;
}

GenerationMetrics generation_metrics(const VolumeCodec& codec, const SamplingBox& box, std::size_t k,
                                     const Grammar& grammar, Rng& rng, std::size_t n_max, unsigned rule_classes) {
    check_vocab(codec, grammar);
    if (k == 0) throw InvalidArgument("sample count must be positive");
    if (box.dims() != codec.dims()) throw InvalidArgument("box dimension differs from codec dimension");
    GenerationMetrics m;
    m.k = k;
    m.points.reserve(k);
    m.samples.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        m.points.push_back(sample_in_box(box, rng));
        auto dec = codec.decode(m.points.back(), n_max);
        m.cap_hits += dec.cap_hit;
        m.samples.push_back(std::move(dec.sentence));
    }
    std::set<Sentence> seen;
    std::vector<bool> used(codec.model().vocabulary().size(), false);
    std::set<unsigned> classes;
    for (const auto& s : m.samples) {
        const ParseResult pr = recognize(grammar, s);
        m.grammatical += pr.grammatical;
        if (seen.insert(s).second) {
            ++m.distinct;
            m.valid += pr.grammatical;
            for (Symbol t : s) used[t] = true;
        }
        if (pr.rule_class) classes.insert(*pr.rule_class);
    }
    const std::size_t words = used.size() - 1;
    const std::size_t used_words = std::count(used.begin(), used.end() - 1, true);
    m.classes_seen = std::count_if(classes.begin(), classes.end(), [&](unsigned c) { return c < rule_classes; });
    m.u = frac(m.distinct, k);
    m.v = frac(m.valid, k);
    m.vc = frac(used_words, words);
    m.gc = frac(m.classes_seen, rule_classes);
    m.grammatical_fraction = frac(m.grammatical, k);
    return m;
}

PredictionMetrics prediction_metrics(const VolumeCodec& codec, std::span<const Sentence> test, const BiasMatrix& bias,
                                     const Grammar& grammar, Precision precision, std::size_t n_max) {
    check_vocab(codec, grammar);
    PredictionMetrics m;
    m.n = test.size();
    for (const auto& s : test) {
        Trip t = round_trip(codec, s, precision, n_max);
        m.outcomes.push_back(t.outcome);
        if (t.outcome == Outcome::UnseenPrefix || t.outcome == Outcome::Underflow) {
            (t.outcome == Outcome::UnseenPrefix ? m.unseen_prefix : m.underflow)++;
            m.reconstructions.emplace_back();
            continue;
        }
        m.cap_hits += t.decoded.cap_hit;
        const bool grammatical = recognize(grammar, t.decoded.sentence).grammatical;
        m.grammatical += grammatical;
        if (t.outcome == Outcome::Exact) {
            ++m.exact;
        } else {
            ++m.inexact;
            m.inexact_ok += grammatical && complies(bias, t.decoded.sentence);
        }
        m.reconstructions.push_back(std::move(t.decoded.sentence));
    }
    m.pab = frac(m.exact, m.n);
    m.ga = frac(m.grammatical, m.n);
    m.ba_empty = m.inexact == 0;
    m.ba = m.ba_empty ? 1.0 : frac(m.inexact_ok, m.inexact);
    return m;
}

GeneralizationMetrics generalization_metrics(const VolumeCodec& codec, std::span<const Sentence> test,
                                             Precision precision, std::size_t n_max) {
    GeneralizationMetrics m;
    m.n = test.size();
    for (const auto& s : test) {
        const Trip t = round_trip(codec, s, precision, n_max);
        m.outcomes.push_back(t.outcome);
        switch (t.outcome) {
            case Outcome::Exact: ++m.exact; break;
            case Outcome::Mismatch: ++m.mismatch; break;
            case Outcome::UnseenPrefix: ++m.unseen_prefix; break;
            case Outcome::Underflow: ++m.underflow; break;
        }
        m.cap_hits += t.decoded.cap_hit;
    }
    m.pau = frac(m.exact, m.n);
    return m;
}

double segment_diversity(const VolumeCodec& codec, const Point& a, const Point& b, std::size_t steps,
                         std::size_t n_max, const Grammar& grammar) {
    check_vocab(codec, grammar);
    if (steps < 2) throw InvalidArgument("a segment needs at least 2 steps");
    std::set<Sentence> found;
    Point p(a.size());
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::clamp(a[k] + (b[k] - a[k]) * t, 0.0, 1.0);
        Sentence s = codec.decode(p, n_max).sentence;
        if (!found.count(s) && recognize(grammar, s).grammatical) found.insert(std::move(s));
    }
    return frac(found.size(), steps);
}

InterpolationCurve interpolation_diversity(const LanguageModel& lm, std::span<const std::size_t> d_list,
                                           std::size_t pairs, std::size_t steps, std::size_t n_max,
                                           const Grammar& grammar, std::uint64_t seed) {
    if (pairs == 0) throw InvalidArgument("pairs must be positive");
    InterpolationCurve c;
    c.pairs = pairs;
    c.steps = steps;
    c.seed = seed;
    if (d_list.empty()) return c;
    // endpoints are drawn once at the largest dimension and truncated, so
    // every d sees the same pairs
    const std::size_t d_top = *std::max_element(d_list.begin(), d_list.end());
    Rng rng(derive_seed(seed, "interpolate"));
    const SamplingBox top = unit_box(d_top);
    std::vector<std::pair<Point, Point>> ends;
    for (std::size_t i = 0; i < pairs; ++i) {
        Point a = sample_in_box(top, rng);
        Point b = sample_in_box(top, rng);
        ends.emplace_back(std::move(a), std::move(b));
    }
    for (std::size_t d : d_list) {
        VolumeCodec codec(lm, d);
        std::vector<double> div;
        for (const auto& [a, b] : ends)
            div.push_back(segment_diversity(codec, Point(a.begin(), a.begin() + d), Point(b.begin(), b.begin() + d),
                                            steps, n_max, grammar));
        const double mean = std::accumulate(div.begin(), div.end(), 0.0) / static_cast<double>(pairs);
        double ss = 0;
        for (double x : div) ss += (x - mean) * (x - mean);
        c.points.push_back({d, mean, pairs > 1 ? std::sqrt(ss / static_cast<double>(pairs - 1)) : 0.0});
    }
    return c;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("spearman needs two equal series of length >= 2");
    const auto rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = (n + 1) / 2;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - mx);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - mx) * (ry[i] - mx);
    }
    if (sxx == 0 || syy == 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

std::string report_to_json(const EvalReport& r) {
    using nlohmann::ordered_json;
    const auto& g = r.generation;
    const auto& p = r.prediction;
    const auto& u = r.generalization;
    ordered_json j;
    j["model"] = r.model;
    j["d"] = r.d;
    j["precision"] = r.precision == Precision::Float ? "float" : "rational";
    j["seed"] = r.seed;
    j["n_max"] = r.n_max;
    j["metrics"] = {{"gc", g.gc}, {"vc", g.vc}, {"u", g.u}, {"v", g.v},
                    {"pab", p.pab}, {"ga", p.ga}, {"ba", p.ba}, {"pau", u.pau}};
    j["generation"] = {{"k", g.k}, {"distinct", g.distinct}, {"valid", g.valid}, {"grammatical", g.grammatical},
                       {"grammatical_fraction", g.grammatical_fraction}, {"classes_seen", g.classes_seen},
                       {"cap_hits", g.cap_hits}, {"box_fallback", r.box_fallback}, {"box_points", r.box_points}};
    j["prediction"] = {{"n", p.n}, {"exact", p.exact}, {"grammatical", p.grammatical}, {"inexact", p.inexact},
                       {"inexact_grammatical_compliant", p.inexact_ok}, {"ba_empty", p.ba_empty},
                       {"unseen_prefix", p.unseen_prefix}, {"precision_underflow", p.underflow},
                       {"cap_hits", p.cap_hits}};
    j["generalization"] = {{"n", u.n}, {"exact", u.exact}, {"mismatch", u.mismatch},
                           {"unseen_prefix", u.unseen_prefix}, {"precision_underflow", u.underflow},
                           {"cap_hits", u.cap_hits}};
    return j.dump(2) + "\n";
}

std::string report_csv_header() {
    return "model,d,precision,seed,n_max,gc,vc,v,u,ba,ga,pab,pau,k,test_n,unbiased_n,cap_hits\n";
}

std::string report_csv_row(const EvalReport& r) {
    std::ostringstream o;
    o.precision(17);
    o << r.model << ',' << r.d << ',' << (r.precision == Precision::Float ? "float" : "rational") << ',' << r.seed
      << ',' << r.n_max << ',' << r.generation.gc << ',' << r.generation.vc << ',' << r.generation.v << ','
      << r.generation.u << ',' << r.prediction.ba << ',' << r.prediction.ga << ',' << r.prediction.pab << ','
      << r.generalization.pau << ',' << r.generation.k << ',' << r.prediction.n << ',' << r.generalization.n << ','
      << r.generation.cap_hits + r.prediction.cap_hits + r.generalization.cap_hits << '\n';
    return o.str();
}

std::string report_summary(const EvalReport& r) {
    const double vals[] = {r.generation.gc, r.generation.vc, r.generation.v, r.generation.u,
                           r.prediction.ba, r.prediction.ga, r.prediction.pab, r.generalization.pau};
    const char* names[] = {"GC", "VC", "V", "U", "BA", "GA", "PAB", "PAU"};
    std::string head = "model         ", row;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-14s", (r.model + " d=" + std::to_string(r.d)).c_str());
    row = buf;
    for (int i = 0; i < 8; ++i) {
        std::snprintf(buf, sizeof buf, "%8s", names[i]);
        head += buf;
        std::snprintf(buf, sizeof buf, "%7.1f%%", 100.0 * vals[i]);
        row += buf;
    }
    return head + "\n" + row + "\n";
}

std::string curve_to_csv(const InterpolationCurve& c) {
    std::ostringstream o;
    o.precision(17);
    o << "d,mean,stddev,pairs,steps\n";
    for (const auto& p : c.points) o << p.d << ',' << p.mean << ',' << p.stddev << ',' << c.pairs << ',' << c.steps << '\n';
    return o.str();
}

}  // namespace ariel
