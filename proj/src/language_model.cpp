#include "ariel/language_model.hpp"

#include "ariel/error.hpp"

namespace ariel {

std::string_view model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Trie: return "trie";
        case ModelKind::Ngram: return "ngram";
    }
    return "unknown";
}

LmState LanguageModel::replay(std::span<const Symbol> prefix) const {
    LmState state = initial_state();
    for (Symbol s : prefix) {
        if (s >= vocabulary().eos()) throw InvalidArgument("prefix contains EOS or an out-of-range symbol");
        state = advance(state, s);
    }
    return state;
}

ProbVector LanguageModel::next_distribution(std::span<const Symbol> prefix) const {
    ProbVector out;
    distribution(replay(prefix), out);
    return out;
}

ExactDistribution LanguageModel::next_exact_distribution(std::span<const Symbol> prefix) const {
    return exact_distribution(replay(prefix));
}

double LanguageModel::sentence_probability(std::span<const Symbol> sentence) const {
    validate_sentence(vocabulary(), sentence);
    LmState state = initial_state();
    ProbVector probs;
    double p = 1.0;
    for (Symbol s : sentence) {
        distribution(state, probs);
        p *= probs[s];
        if (p == 0.0) return 0.0;
        if (s != vocabulary().eos()) state = advance(state, s);
    }
    return p;
}

Rational LanguageModel::exact_sentence_probability(std::span<const Symbol> sentence) const {
    validate_sentence(vocabulary(), sentence);
    LmState state = initial_state();
    Rational p = 1;
    for (Symbol s : sentence) {
        auto dist = exact_distribution(state);
        if (dist.numerators[s] == 0) return 0;
        p *= dist.probability(s);
        if (s != vocabulary().eos()) state = advance(state, s);
    }
    return p;
}

}  // namespace ariel
