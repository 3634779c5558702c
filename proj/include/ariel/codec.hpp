#pragma once

#include "ariel/language_model.hpp"
#include "ariel/numeric.hpp"

#include <span>
#include <vector>

namespace ariel {

enum class Precision { Float, Rational };

/// Hyper-rectangle of a sentence. `extent` is tracked separately from
/// `upper` so that the volume is the exact product of the per-step
/// probability factors up to one rounding each.
struct VolumeBounds {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> extent;

    std::size_t dims() const noexcept { return lower.size(); }
};

struct ExactBounds {
    std::vector<Rational> lower;
    std::vector<Rational> extent;

    std::size_t dims() const noexcept { return lower.size(); }
    std::vector<Rational> upper() const;
};

double volume(const VolumeBounds& b);
Rational volume(const ExactBounds& b);

struct CodecOptions {
    /// Smallest per-axis width accepted in float mode.
    double underflow_floor = 1e-300;
    /// A narrowed width must also span this many ulps of its upper end,
    /// otherwise neighbouring symbol intervals are no longer resolvable.
    double resolution_ulps = 64;
};

struct DecodeResult {
    Sentence sentence;     // EOS-terminated
    bool cap_hit = false;  // EOS was appended because n_max tokens were emitted
};

/// Maps sentences to boxes in [0,1]^d and points back to sentences by
/// cumulative-probability subdivision; symbol i narrows axis i mod d.
/// Symbols are ordered by vocabulary index (EOS last); each owns the
/// half-open slice [c_low, c_up) of the current axis range and ties at a
/// shared boundary go to the higher symbol.
class VolumeCodec {
public:
    VolumeCodec(const LanguageModel& lm, std::size_t d, CodecOptions options = {});

    const LanguageModel& model() const noexcept { return lm_; }
    std::size_t dims() const noexcept { return d_; }

    /// Throws OutOfSupportError for a zero-probability symbol and
    /// PrecisionError when a width drops below the float floor.
    VolumeBounds encode_bounds(std::span<const Symbol> sentence) const;
    ExactBounds encode_bounds_exact(std::span<const Symbol> sentence) const;

    /// Center of the box.
    std::vector<double> encode(std::span<const Symbol> sentence) const;
    std::vector<Rational> encode_exact(std::span<const Symbol> sentence) const;

    /// Emits at most n_max tokens before EOS. z must lie in [0,1]^d.
    DecodeResult decode(std::span<const double> z, std::size_t n_max) const;
    DecodeResult decode_exact(std::span<const Rational> z, std::size_t n_max) const;

private:
    const LanguageModel& lm_;
    std::size_t d_;
    CodecOptions options_;
};

}  // namespace ariel
