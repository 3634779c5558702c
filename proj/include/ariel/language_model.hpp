#pragma once

#include "ariel/numeric.hpp"
#include "ariel/vocabulary.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace ariel {

/// Next-symbol probabilities indexed by vocabulary symbol, EOS included.
using ProbVector = std::vector<double>;

/// Exact next-symbol distribution: P(s) = numerators[s] / denominator.
/// Numerators sum to the denominator.
struct ExactDistribution {
    std::vector<Integer> numerators;
    Integer denominator;

    Rational probability(Symbol s) const { return ratio(numerators.at(s), denominator); }
};

/// Opaque per-model decoding state (trie node, packed n-gram context, ...).
struct LmState {
    std::uint64_t value = 0;
};

enum class ModelKind : std::uint8_t { Trie = 1, Ngram = 2 };

std::string_view model_kind_name(ModelKind kind);

/// Conditional next-symbol model consumed by the volume codec. Models are
/// immutable once built; every query is const and thread-safe.
class LanguageModel {
public:
    virtual ~LanguageModel() = default;

    virtual ModelKind kind() const noexcept = 0;
    virtual const Vocabulary& vocabulary() const noexcept = 0;

    virtual LmState initial_state() const = 0;
    /// State after consuming `symbol`. Throws OutOfSupportError when the
    /// model cannot continue (trie: unseen prefix).
    virtual LmState advance(LmState state, Symbol symbol) const = 0;

    virtual void distribution(LmState state, ProbVector& out) const = 0;
    virtual ExactDistribution exact_distribution(LmState state) const = 0;

    /// Convenience wrappers that replay `prefix` (no EOS) from the start.
    ProbVector next_distribution(std::span<const Symbol> prefix) const;
    ExactDistribution next_exact_distribution(std::span<const Symbol> prefix) const;

    /// Product of the conditionals of an EOS-terminated sentence; zero when it
    /// leaves the support.
    double sentence_probability(std::span<const Symbol> sentence) const;
    Rational exact_sentence_probability(std::span<const Symbol> sentence) const;

protected:
    LmState replay(std::span<const Symbol> prefix) const;
};

}  // namespace ariel
