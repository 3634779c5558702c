#pragma once

#include "ariel/language_model.hpp"

#include <span>
#include <unordered_map>
#include <vector>

namespace ariel {

/// Add-alpha n-gram model with context backoff. The distribution after a
/// history comes from the longest context (at most order-1 symbols, padded
/// with begin-of-sentence markers) that occurs in training:
///
///     P(w | h) = (c(h w) + alpha) / (c(h) + alpha |V|)
///
/// The order-1 context is empty and always present, so every entry is at
/// least alpha / (N + alpha |V|) where N counts all predicted tokens.
class NgramLM final : public LanguageModel {
public:
    static constexpr int kMaxOrder = 4;
    static constexpr std::size_t kMaxVocabulary = 0xFFFD;

    /// One count table entry: key packs up to kMaxOrder-1 context symbols
    /// (16 bits each, oldest first) followed by the predicted symbol.
    struct Count {
        std::uint64_t key = 0;
        std::uint32_t count = 0;
    };

    static NgramLM fit(const Vocabulary& vocab, std::span<const Sentence> corpus, int order, double alpha);

    /// Rebuilds a model from per-order count tables (index k-1 holds order k).
    static NgramLM from_counts(Vocabulary vocab, int order, double alpha, std::vector<std::vector<Count>> tables);

    ModelKind kind() const noexcept override { return ModelKind::Ngram; }
    const Vocabulary& vocabulary() const noexcept override { return vocab_; }
    LmState initial_state() const override;
    LmState advance(LmState state, Symbol symbol) const override;
    void distribution(LmState state, ProbVector& out) const override;
    ExactDistribution exact_distribution(LmState state) const override;

    int order() const noexcept { return order_; }
    double alpha() const noexcept { return alpha_; }
    /// Count tables sorted by key.
    std::vector<std::vector<Count>> tables() const;

    static constexpr std::uint64_t kBos = 0xFFFE;

private:
    struct Level {
        std::unordered_map<std::uint64_t, std::uint32_t> index;  // context -> row
        std::vector<std::uint64_t> totals;
        std::vector<std::uint32_t> begin;  // CSR rows into symbols/counts
        std::vector<std::uint16_t> symbols;
        std::vector<std::uint32_t> counts;
        std::vector<std::uint64_t> contexts;  // per row, for dumping
    };

    NgramLM(Vocabulary vocab, int order, double alpha) : vocab_(std::move(vocab)), order_(order), alpha_(alpha) {}

    // Row of the longest known context of the state, with its level.
    std::pair<const Level*, std::uint32_t> lookup(LmState state) const;
    void build(std::vector<std::vector<Count>> tables);

    Vocabulary vocab_;
    int order_;
    double alpha_;
    std::vector<Level> levels_;
};

}  // namespace ariel
