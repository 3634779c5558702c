#include "ariel/codec.hpp"

#include "ariel/error.hpp"

#include <cmath>

namespace ariel {

namespace {

double ulp(double x) { return std::nextafter(x, 2.0) - x; }

[[noreturn]] void zero_probability(const Vocabulary& v, Symbol s, std::size_t i) {
    throw OutOfSupportError("symbol '" + v.token(s) + "' at position " + std::to_string(i) +
                            " has zero probability under the model");
}

}  // namespace

std::vector<Rational> ExactBounds::upper() const {
    std::vector<Rational> u(lower.size());
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = lower[k] + extent[k];
    return u;
}

double volume(const VolumeBounds& b) {
    double v = 1.0;
    for (double e : b.extent) v *= e;
    return v;
}

Rational volume(const ExactBounds& b) {
    Rational v = 1;
    for (const auto& e : b.extent) v *= e;
    return v;
}

VolumeCodec::VolumeCodec(const LanguageModel& lm, std::size_t d, CodecOptions options)
    : lm_(lm), d_(d), options_(options) {
    if (d == 0) throw InvalidArgument("latent dimension must be at least 1");
    if (!(options.underflow_floor >= 0.0)) throw InvalidArgument("underflow floor must be non-negative");
}

VolumeBounds VolumeCodec::encode_bounds(std::span<const Symbol> sentence) const {
    const Vocabulary& vocab = lm_.vocabulary();
    validate_sentence(vocab, sentence);
    VolumeBounds b{std::vector<double>(d_, 0.0), {}, std::vector<double>(d_, 1.0)};
    LmState state = lm_.initial_state();
    ProbVector p;
    for (std::size_t i = 0; i < sentence.size(); ++i) {
        const Symbol s = sentence[i];
        lm_.distribution(state, p);
        if (!(p[s] > 0.0)) zero_probability(vocab, s, i);
        double cum = 0.0;
        for (Symbol t = 0; t < s; ++t) cum += p[t];
        const std::size_t a = i % d_;
        const double low = b.lower[a] + b.extent[a] * cum;
        const double ext = b.extent[a] * p[s];
        if (ext < options_.underflow_floor || ext < options_.resolution_ulps * ulp(low + ext))
            throw PrecisionError("axis " + std::to_string(a) + " width " + std::to_string(ext) + " at position " +
                                 std::to_string(i) + " is below float resolution; use rational precision");
        b.lower[a] = low;
        b.extent[a] = ext;
        if (s != vocab.eos()) state = lm_.advance(state, s);
    }
    b.upper.resize(d_);
    for (std::size_t k = 0; k < d_; ++k) b.upper[k] = std::min(1.0, b.lower[k] + b.extent[k]);
    return b;
}

ExactBounds VolumeCodec::encode_bounds_exact(std::span<const Symbol> sentence) const {
    const Vocabulary& vocab = lm_.vocabulary();
    validate_sentence(vocab, sentence);
    ExactBounds b{std::vector<Rational>(d_, Rational(0)), std::vector<Rational>(d_, Rational(1))};
    LmState state = lm_.initial_state();
    for (std::size_t i = 0; i < sentence.size(); ++i) {
        const Symbol s = sentence[i];
        const ExactDistribution dist = lm_.exact_distribution(state);
        if (dist.numerators[s] <= 0) zero_probability(vocab, s, i);
        Integer cum = 0;
        for (Symbol t = 0; t < s; ++t) cum += dist.numerators[t];
        const std::size_t a = i % d_;
        b.lower[a] += b.extent[a] * ratio(cum, dist.denominator);
        b.lower[a].canonicalize();
        b.extent[a] *= dist.probability(s);
        b.extent[a].canonicalize();
        if (s != vocab.eos()) state = lm_.advance(state, s);
    }
    return b;
}

std::vector<double> VolumeCodec::encode(std::span<const Symbol> sentence) const {
    const VolumeBounds b = encode_bounds(sentence);
    std::vector<double> z(d_);
    for (std::size_t k = 0; k < d_; ++k) z[k] = b.lower[k] + b.extent[k] / 2;
    return z;
}

std::vector<Rational> VolumeCodec::encode_exact(std::span<const Symbol> sentence) const {
    const ExactBounds b = encode_bounds_exact(sentence);
    std::vector<Rational> z(d_);
    for (std::size_t k = 0; k < d_; ++k) {
        z[k] = b.lower[k] + b.extent[k] / 2;
        z[k].canonicalize();
    }
    return z;
}

DecodeResult VolumeCodec::decode(std::span<const double> z, std::size_t n_max) const {
    if (z.size() != d_) throw InvalidArgument("point has " + std::to_string(z.size()) + " coordinates, expected " + std::to_string(d_));
    for (double c : z)
        if (!(c >= 0.0 && c <= 1.0)) throw InvalidArgument("point lies outside the unit cube");
    const Symbol eos = lm_.vocabulary().eos();
    std::vector<double> lower(d_, 0.0), extent(d_, 1.0);
    DecodeResult out;
    LmState state = lm_.initial_state();
    ProbVector p;
    while (true) {
        if (out.sentence.size() == n_max) {
            out.sentence.push_back(eos);
            out.cap_hit = true;
            break;
        }
        const std::size_t a = out.sentence.size() % d_;
        lm_.distribution(state, p);
        // largest positive symbol whose interval starts at or below z
        double cum = 0.0;
        Symbol pick = eos + 1;
        Symbol first = eos + 1;
        double pick_cum = 0.0;
        for (Symbol t = 0; t <= eos; ++t) {
            if (p[t] > 0.0) {
                if (first > eos) first = t;
                if (lower[a] + extent[a] * cum <= z[a]) {
                    pick = t;
                    pick_cum = cum;
                } else if (first != t) {
                    break;
                }
            }
            cum += p[t];
        }
        if (pick > eos) {
            if (first > eos) throw InvalidArgument("model returned an all-zero distribution");
            pick = first;
            pick_cum = 0.0;
            for (Symbol t = 0; t < first; ++t) pick_cum += p[t];
        }
        lower[a] = lower[a] + extent[a] * pick_cum;
        extent[a] = extent[a] * p[pick];
        out.sentence.push_back(pick);
        if (pick == eos) break;
        state = lm_.advance(state, pick);
    }
    return out;
}

DecodeResult VolumeCodec::decode_exact(std::span<const Rational> z, std::size_t n_max) const {
    if (z.size() != d_) throw InvalidArgument("point has " + std::to_string(z.size()) + " coordinates, expected " + std::to_string(d_));
    for (const auto& c : z)
        if (c < 0 || c > 1) throw InvalidArgument("point lies outside the unit cube");
    const Symbol eos = lm_.vocabulary().eos();
    std::vector<Rational> lower(d_, Rational(0)), extent(d_, Rational(1));
    DecodeResult out;
    LmState state = lm_.initial_state();
    while (true) {
        if (out.sentence.size() == n_max) {
            out.sentence.push_back(eos);
            out.cap_hit = true;
            break;
        }
        const std::size_t a = out.sentence.size() % d_;
        const ExactDistribution dist = lm_.exact_distribution(state);
        // position of z inside the current slice, scaled to numerator units
        Rational t = (z[a] - lower[a]) * dist.denominator / extent[a];
        t.canonicalize();
        Integer cum = 0;
        Symbol pick = eos + 1;
        Integer pick_cum = 0;
        for (Symbol s = 0; s <= eos; ++s) {
            if (dist.numerators[s] > 0) {
                if (cum <= t) {
                    pick = s;
                    pick_cum = cum;
                } else {
                    break;
                }
            }
            cum += dist.numerators[s];
        }
        if (pick > eos) throw InvalidArgument("point lies outside the current slice");
        lower[a] += extent[a] * ratio(pick_cum, dist.denominator);
        lower[a].canonicalize();
        extent[a] *= dist.probability(pick);
        extent[a].canonicalize();
        out.sentence.push_back(pick);
        if (pick == eos) break;
        state = lm_.advance(state, pick);
    }
    return out;
}

}  // namespace ariel
