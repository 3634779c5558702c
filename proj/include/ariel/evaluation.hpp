#pragma once

#include "ariel/bias.hpp"
#include "ariel/codec.hpp"
#include "ariel/grammar.hpp"
#include "ariel/random.hpp"

#include <span>
#include <string>
#include <vector>

namespace ariel {

using Point = std::vector<double>;

struct SamplingBox {
    std::vector<double> min;
    std::vector<double> max;

    std::size_t dims() const noexcept { return min.size(); }
};

/// Componentwise min/max. Throws InvalidArgument for an empty list or
/// points of differing dimension.
SamplingBox bounding_box(std::span<const Point> points);
SamplingBox unit_box(std::size_t d);
Point sample_in_box(const SamplingBox& box, Rng& rng);

struct GenerationMetrics {
    double gc = 0, vc = 0, u = 0, v = 0;
    double grammatical_fraction = 0;  // over all k samples, duplicates included
    std::size_t k = 0, distinct = 0, valid = 0, grammatical = 0, cap_hits = 0, classes_seen = 0;
    std::vector<Point> points;
    std::vector<Sentence> samples;
};

/// Decodes k uniform points of the box. U = distinct / k, V = distinct
/// grammatical / k, VC = distinct non-EOS symbols used / (|V| - 1), GC =
/// rule classes seen / rule_classes.
GenerationMetrics generation_metrics(const VolumeCodec& codec, const SamplingBox& box, std::size_t k,
                                     const Grammar& grammar, Rng& rng, std::size_t n_max, unsigned rule_classes = 4);

enum class Outcome { Exact, Mismatch, UnseenPrefix, Underflow };

std::string_view outcome_name(Outcome o);

struct PredictionMetrics {
    double pab = 0, ga = 0, ba = 1;
    bool ba_empty = true;  // no inexact reconstruction; ba is 1 by convention
    std::size_t n = 0, exact = 0, grammatical = 0, inexact = 0, inexact_ok = 0;
    std::size_t unseen_prefix = 0, underflow = 0, cap_hits = 0;
    std::vector<Outcome> outcomes;
    std::vector<Sentence> reconstructions;  // empty sentence when encoding failed
};

/// Round trip of every test sentence. Encoding failures count as inexact
/// and ungrammatical for PAB and GA; BA is taken over decoded but inexact
/// reconstructions.
PredictionMetrics prediction_metrics(const VolumeCodec& codec, std::span<const Sentence> test, const BiasMatrix& bias,
                                     const Grammar& grammar, Precision precision, std::size_t n_max);

struct GeneralizationMetrics {
    double pau = 0;
    std::size_t n = 0, exact = 0, unseen_prefix = 0, underflow = 0, mismatch = 0, cap_hits = 0;
    std::vector<Outcome> outcomes;
};

GeneralizationMetrics generalization_metrics(const VolumeCodec& codec, std::span<const Sentence> test,
                                             Precision precision, std::size_t n_max);

/// Distinct grammatical sentences decoded at `steps` evenly spaced points of
/// the segment a-b (endpoints included), divided by steps.
double segment_diversity(const VolumeCodec& codec, const Point& a, const Point& b, std::size_t steps,
                         std::size_t n_max, const Grammar& grammar);

struct CurvePoint {
    std::size_t d = 0;
    double mean = 0, stddev = 0;
};

struct InterpolationCurve {
    std::vector<CurvePoint> points;
    std::size_t pairs = 0, steps = 0;
    std::uint64_t seed = 0;
};

/// Segment endpoints are drawn once in the largest dimension of d_list and
/// truncated for the smaller ones (paired comparison across d).
InterpolationCurve interpolation_diversity(const LanguageModel& lm, std::span<const std::size_t> d_list,
                                           std::size_t pairs, std::size_t steps, std::size_t n_max,
                                           const Grammar& grammar, std::uint64_t seed);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

struct EvalReport {
    GenerationMetrics generation;
    PredictionMetrics prediction;
    GeneralizationMetrics generalization;
    std::uint64_t seed = 0;
    std::size_t d = 0;
    std::size_t n_max = 0;
    std::string model;
    Precision precision = Precision::Float;
    bool box_fallback = false;  // no test sentence encoded, box is the unit cube
    std::size_t box_points = 0;
};

std::string report_to_json(const EvalReport& r);
std::string report_csv_header();
std::string report_csv_row(const EvalReport& r);
/// Fixed-width table with columns GC VC V U BA GA PAB PAU.
std::string report_summary(const EvalReport& r);
std::string curve_to_csv(const InterpolationCurve& c);

}  // namespace ariel
