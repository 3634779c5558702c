#pragma once

#include "ariel/vocabulary.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ariel {

/// Tokens exempt from the adjacency constraint: determiners, question-word
/// tokens, prepositions, punctuation and conjunctions of the question grammar.
std::vector<std::string> default_function_words();

/// Random symmetric word-compatibility matrix. Only content words are
/// constrained; function words and EOS are exempt.
class BiasMatrix {
public:
    BiasMatrix() = default;

    std::size_t size() const noexcept { return size_; }
    std::uint64_t seed() const noexcept { return seed_; }
    double density() const noexcept { return density_; }
    std::uint64_t vocab_hash() const noexcept { return vocab_hash_; }

    bool compatible(Symbol a, Symbol b) const;
    bool exempt(Symbol s) const { return exempt_.at(s); }

    /// Packed strict upper triangle, row-major, LSB-first within each byte.
    const std::vector<std::uint8_t>& packed_bits() const noexcept { return bits_; }
    const std::vector<bool>& exempt_mask() const noexcept { return exempt_; }

    /// Rebuilds a matrix from serialized parts; throws FormatError on size mismatch.
    static BiasMatrix from_parts(std::size_t size, std::uint64_t seed, double density, std::uint64_t vocab_hash,
                                 std::vector<std::uint8_t> bits, std::vector<bool> exempt);

    friend bool operator==(const BiasMatrix&, const BiasMatrix&) = default;

private:
    friend BiasMatrix make_bias(const Vocabulary&, double, std::uint64_t, std::span<const std::string>);

    static std::size_t pair_index(std::size_t size, Symbol a, Symbol b);

    std::size_t size_ = 0;
    std::uint64_t seed_ = 0;
    double density_ = 1.0;
    std::uint64_t vocab_hash_ = 0;
    std::vector<std::uint8_t> bits_;
    std::vector<bool> exempt_;
};

/// Each unordered off-diagonal pair is compatible independently with
/// probability `density`; the diagonal is always compatible. Deterministic
/// in (vocabulary, density, seed). Throws InvalidArgument unless
/// 0 <= density <= 1.
BiasMatrix make_bias(const Vocabulary& vocab, double density, std::uint64_t seed,
                     std::span<const std::string> function_words);
BiasMatrix make_bias(const Vocabulary& vocab, double density, std::uint64_t seed);

/// True iff every unordered pair of non-exempt tokens in the sentence is
/// compatible.
bool complies(const BiasMatrix& bias, std::span<const Symbol> sentence);

std::string bias_to_json(const BiasMatrix& bias);
BiasMatrix bias_from_json(const std::string& text);

}  // namespace ariel
