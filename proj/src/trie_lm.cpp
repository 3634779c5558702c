#include "ariel/trie_lm.hpp"

#include "ariel/error.hpp"

#include <algorithm>
#include <numeric>

namespace ariel {

TrieLM TrieLM::fit(const Vocabulary& vocab, std::span<const Sentence> corpus) {
    if (corpus.empty()) throw InvalidArgument("cannot fit a trie on an empty corpus");
    if (corpus.size() > 0xFFFFFFFFu) throw InvalidArgument("corpus too large for 32-bit trie counts");
    for (const auto& s : corpus) validate_sentence(vocab, s);

    std::vector<std::uint32_t> order(corpus.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return corpus[a] < corpus[b]; });

    struct Pending {
        std::uint32_t node;
        std::size_t begin, end, depth;
    };
    std::vector<Node> nodes(1);
    std::vector<Pending> queue{{0, 0, order.size(), 0}};
    const Symbol eos = vocab.eos();

    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Pending p = queue[head];
        Node& n = nodes[p.node];
        n.count = static_cast<std::uint32_t>(p.end - p.begin);
        n.first_child = static_cast<std::uint32_t>(nodes.size());
        std::size_t i = p.begin;
        while (i < p.end) {
            const Symbol s = corpus[order[i]][p.depth];
            std::size_t j = i;
            while (j < p.end && corpus[order[j]][p.depth] == s) ++j;
            if (s == eos) {
                nodes[p.node].eos_count = static_cast<std::uint32_t>(j - i);
            } else {
                Node child;
                child.symbol = s;
                nodes.push_back(child);
                ++nodes[p.node].child_count;
                queue.push_back({static_cast<std::uint32_t>(nodes.size() - 1), i, j, p.depth + 1});
            }
            i = j;
        }
    }
    return TrieLM(vocab, std::move(nodes));
}

TrieLM TrieLM::from_nodes(Vocabulary vocab, std::vector<Node> nodes) {
    if (nodes.empty() || nodes.front().count == 0) throw FormatError("trie has no sentences");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        if (n.child_count && (n.first_child <= i || std::size_t(n.first_child) + n.child_count > nodes.size()))
            throw FormatError("trie child range out of bounds");
        std::uint64_t sum = n.eos_count;
        Symbol prev = 0;
        for (std::uint32_t c = 0; c < n.child_count; ++c) {
            const Node& child = nodes[n.first_child + c];
            if (child.symbol >= vocab.eos() || (c && child.symbol <= prev))
                throw FormatError("trie children unsorted or out of range");
            prev = child.symbol;
            sum += child.count;
        }
        if (sum != n.count) throw FormatError("trie counts are inconsistent");
    }
    return TrieLM(std::move(vocab), std::move(nodes));
}

const TrieLM::Node& TrieLM::node(LmState state) const {
    if (state.value >= nodes_.size()) throw InvalidArgument("invalid trie state");
    return nodes_[state.value];
}

LmState TrieLM::advance(LmState state, Symbol symbol) const {
    const Node& n = node(state);
    auto first = nodes_.begin() + n.first_child;
    auto last = first + n.child_count;
    auto it = std::lower_bound(first, last, symbol, [](const Node& a, Symbol s) { return a.symbol < s; });
    if (it == last || it->symbol != symbol) {
        const std::string token = symbol < vocab_.size() ? vocab_.token(symbol) : std::to_string(symbol);
        throw OutOfSupportError("prefix continued by '" + token + "' never occurs in the training corpus");
    }
    return {static_cast<std::uint64_t>(it - nodes_.begin())};
}

void TrieLM::distribution(LmState state, ProbVector& out) const {
    const Node& n = node(state);
    out.assign(vocab_.size(), 0.0);
    const double total = n.count;
    for (std::uint32_t c = 0; c < n.child_count; ++c) {
        const Node& child = nodes_[n.first_child + c];
        out[child.symbol] = child.count / total;
    }
    out[vocab_.eos()] = n.eos_count / total;
}

ExactDistribution TrieLM::exact_distribution(LmState state) const {
    const Node& n = node(state);
    ExactDistribution d;
    d.numerators.assign(vocab_.size(), Integer(0));
    for (std::uint32_t c = 0; c < n.child_count; ++c) {
        const Node& child = nodes_[n.first_child + c];
        d.numerators[child.symbol] = child.count;
    }
    d.numerators[vocab_.eos()] = n.eos_count;
    d.denominator = n.count;
    return d;
}

}  // namespace ariel
