#include "ariel/ngram_lm.hpp"

#include "ariel/error.hpp"

#include <algorithm>
#include <cmath>

namespace ariel {

namespace {

// last k symbols of a packed history
std::uint64_t suffix(std::uint64_t history, int k) {
    if (k == 0) return 0;
    return history & ((std::uint64_t(1) << (16 * k)) - 1);
}

void check_params(const Vocabulary& vocab, int order, double alpha) {
    if (order < 1 || order > NgramLM::kMaxOrder)
        throw InvalidArgument("n-gram order must be in [1, " + std::to_string(NgramLM::kMaxOrder) + "]");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be positive and finite");
    if (vocab.size() > NgramLM::kMaxVocabulary) throw InvalidArgument("vocabulary too large for the n-gram model");
}

}  // namespace

NgramLM NgramLM::fit(const Vocabulary& vocab, std::span<const Sentence> corpus, int order, double alpha) {
    check_params(vocab, order, alpha);
    if (corpus.empty()) throw InvalidArgument("cannot fit an n-gram model on an empty corpus");

    std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> counts(order);
    std::uint64_t bos_history = 0;
    for (int i = 0; i < order - 1; ++i) bos_history = (bos_history << 16) | kBos;
    for (const auto& s : corpus) {
        validate_sentence(vocab, s);
        std::uint64_t history = bos_history;
        for (Symbol w : s) {
            for (int k = 1; k <= order; ++k) ++counts[k - 1][(suffix(history, k - 1) << 16) | w];
            if (order > 1) history = suffix((history << 16) | w, order - 1);
        }
    }
    std::vector<std::vector<Count>> tables(order);
    for (int k = 0; k < order; ++k) {
        tables[k].reserve(counts[k].size());
        for (auto [key, c] : counts[k]) tables[k].push_back({key, c});
        std::sort(tables[k].begin(), tables[k].end(), [](const Count& a, const Count& b) { return a.key < b.key; });
    }
    NgramLM lm(vocab, order, alpha);
    lm.build(std::move(tables));
    return lm;
}

NgramLM NgramLM::from_counts(Vocabulary vocab, int order, double alpha, std::vector<std::vector<Count>> tables) {
    try {
        check_params(vocab, order, alpha);
    } catch (const InvalidArgument& e) {
        throw FormatError(e.what());
    }
    if (tables.size() != std::size_t(order)) throw FormatError("n-gram table count does not match order");
    for (int k = 0; k < order; ++k) {
        const auto& t = tables[k];
        for (std::size_t i = 0; i < t.size(); ++i) {
            if ((t[i].key & 0xFFFF) >= vocab.size() || t[i].count == 0) throw FormatError("bad n-gram entry");
            if (k == 0 && (t[i].key >> 16) != 0) throw FormatError("bad unigram key");
            if (i && t[i].key <= t[i - 1].key) throw FormatError("n-gram table not sorted");
        }
    }
    if (tables[0].empty()) throw FormatError("n-gram model has no unigram counts");
    NgramLM lm(std::move(vocab), order, alpha);
    lm.build(std::move(tables));
    return lm;
}

void NgramLM::build(std::vector<std::vector<Count>> tables) {
    levels_.assign(order_, {});
    for (int k = 0; k < order_; ++k) {
        Level& L = levels_[k];
        const auto& t = tables[k];
        L.symbols.reserve(t.size());
        L.counts.reserve(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            const std::uint64_t ctx = t[i].key >> 16;
            if (L.contexts.empty() || L.contexts.back() != ctx) {
                L.index.emplace(ctx, static_cast<std::uint32_t>(L.contexts.size()));
                L.contexts.push_back(ctx);
                L.totals.push_back(0);
                L.begin.push_back(static_cast<std::uint32_t>(i));
            }
            L.symbols.push_back(static_cast<std::uint16_t>(t[i].key & 0xFFFF));
            L.counts.push_back(t[i].count);
            L.totals.back() += t[i].count;
        }
        L.begin.push_back(static_cast<std::uint32_t>(t.size()));
    }
}

std::vector<std::vector<NgramLM::Count>> NgramLM::tables() const {
    std::vector<std::vector<Count>> out(order_);
    for (int k = 0; k < order_; ++k) {
        const Level& L = levels_[k];
        for (std::size_t r = 0; r < L.contexts.size(); ++r)
            for (std::uint32_t i = L.begin[r]; i < L.begin[r + 1]; ++i)
                out[k].push_back({(L.contexts[r] << 16) | L.symbols[i], L.counts[i]});
    }
    return out;
}

LmState NgramLM::initial_state() const {
    std::uint64_t h = 0;
    for (int i = 0; i < order_ - 1; ++i) h = (h << 16) | kBos;
    return {h};
}

LmState NgramLM::advance(LmState state, Symbol symbol) const {
    if (symbol >= vocab_.eos()) throw InvalidArgument("cannot advance past EOS or an out-of-range symbol");
    if (order_ == 1) return {0};
    return {suffix((state.value << 16) | symbol, order_ - 1)};
}

std::pair<const NgramLM::Level*, std::uint32_t> NgramLM::lookup(LmState state) const {
    for (int k = order_; k >= 1; --k) {
        const Level& L = levels_[k - 1];
        auto it = L.index.find(suffix(state.value, k - 1));
        if (it != L.index.end()) return {&L, it->second};
    }
    throw FormatError("n-gram model lacks unigram counts");
}

void NgramLM::distribution(LmState state, ProbVector& out) const {
    auto [L, row] = lookup(state);
    const double denom = static_cast<double>(L->totals[row]) + alpha_ * static_cast<double>(vocab_.size());
    out.assign(vocab_.size(), alpha_ / denom);
    for (std::uint32_t i = L->begin[row]; i < L->begin[row + 1]; ++i)
        out[L->symbols[i]] = (static_cast<double>(L->counts[i]) + alpha_) / denom;
}

ExactDistribution NgramLM::exact_distribution(LmState state) const {
    auto [L, row] = lookup(state);
    const Rational a = exact_rational(alpha_);
    const Integer& num = a.get_num();
    const Integer& den = a.get_den();
    ExactDistribution d;
    d.numerators.assign(vocab_.size(), num);
    for (std::uint32_t i = L->begin[row]; i < L->begin[row + 1]; ++i)
        d.numerators[L->symbols[i]] = den * L->counts[i] + num;
    d.denominator = den * Integer(std::to_string(L->totals[row])) + num * static_cast<unsigned long>(vocab_.size());
    return d;
}

}  // namespace ariel
