#pragma once

#include "ariel/language_model.hpp"

#include <span>
#include <vector>

namespace ariel {

/// Prefix trie of corpus counts. The conditional at a node is the exact
/// empirical frequency of each continuation: child count (or EOS count)
/// over the node count. Prefixes absent from the corpus are outside the
/// support and raise OutOfSupportError.
class TrieLM final : public LanguageModel {
public:
    struct Node {
        Symbol symbol = 0;            // edge label from the parent
        std::uint32_t count = 0;      // corpus sentences extending this prefix
        std::uint32_t eos_count = 0;  // corpus sentences ending here
        std::uint32_t first_child = 0;
        std::uint32_t child_count = 0;  // children are contiguous and sorted by symbol
    };

    /// Corpus order does not matter. Throws InvalidArgument for an empty
    /// corpus or a malformed sentence.
    static TrieLM fit(const Vocabulary& vocab, std::span<const Sentence> corpus);

    /// Rebuilds a trie from its node table, checking the count invariants.
    static TrieLM from_nodes(Vocabulary vocab, std::vector<Node> nodes);

    ModelKind kind() const noexcept override { return ModelKind::Trie; }
    const Vocabulary& vocabulary() const noexcept override { return vocab_; }
    LmState initial_state() const override { return {0}; }
    LmState advance(LmState state, Symbol symbol) const override;
    void distribution(LmState state, ProbVector& out) const override;
    ExactDistribution exact_distribution(LmState state) const override;

    std::uint64_t sentence_count() const noexcept { return nodes_.front().count; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }

private:
    TrieLM(Vocabulary vocab, std::vector<Node> nodes) : vocab_(std::move(vocab)), nodes_(std::move(nodes)) {}

    const Node& node(LmState state) const;

    Vocabulary vocab_;
    std::vector<Node> nodes_;
};

}  // namespace ariel
