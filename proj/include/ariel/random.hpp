#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ariel {

/// Seeded generator with platform-independent derived draws. The standard
/// distributions are implementation-defined, so every draw used by the
/// library goes through the helpers below.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t uniform_index(std::uint64_t n);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// Stable per-stage seed from a master seed and a stage name.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage);

}  // namespace ariel
