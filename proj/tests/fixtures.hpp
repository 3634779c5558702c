#pragma once

#include "ariel/grammar.hpp"
#include "ariel/trie_lm.hpp"

#include <map>
#include <string>
#include <vector>

#ifndef ARIEL_DATA_DIR
#define ARIEL_DATA_DIR "data"
#endif

namespace fixtures {

inline const char* kMicroGrammar = "S -> 'A'|'B'|'A' 'A'|'A' 'B'|'A' 'C'|'B' 'C'|'A' 'B' 'C'|'B' 'C' 'C'";

inline std::string question_grammar_path() { return std::string(ARIEL_DATA_DIR) + "/question_grammar.cfg"; }

inline const ariel::Grammar& question_grammar() {
    static const ariel::Grammar g = ariel::load_grammar_file(question_grammar_path()).grammar;
    return g;
}

inline const ariel::Grammar& micro_grammar() {
    static const ariel::Grammar g = ariel::load_grammar(kMicroGrammar).grammar;
    return g;
}

inline ariel::Sentence sent(const ariel::Vocabulary& v, const std::string& text) {
    std::vector<std::string> toks;
    std::string cur;
    for (char c : text) {
        if (c == ' ') {
            if (!cur.empty()) toks.push_back(cur), cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) toks.push_back(cur);
    return v.encode_tokens(toks);
}

// the eight sentences, once each
inline std::vector<ariel::Sentence> micro_corpus() {
    const auto& v = micro_grammar().vocabulary();
    std::vector<ariel::Sentence> out;
    for (const char* s : {"A", "B", "A A", "A B", "A C", "B C", "A B C", "B C C"}) out.push_back(sent(v, s));
    return out;
}

inline const ariel::TrieLM& micro_trie() {
    static const ariel::TrieLM lm = ariel::TrieLM::fit(micro_grammar().vocabulary(), micro_corpus());
    return lm;
}

// Counting oracle: P(next | prefix) straight from the corpus, as a pair
// (sentences extending prefix + s, sentences extending prefix).
inline std::pair<long, long> count_ratio(const std::vector<ariel::Sentence>& corpus,
                                         const std::vector<ariel::Symbol>& prefix, ariel::Symbol s) {
    long num = 0, den = 0;
    for (const auto& c : corpus) {
        if (c.size() < prefix.size() + 1) continue;
        if (!std::equal(prefix.begin(), prefix.end(), c.begin())) continue;
        ++den;
        if (c[prefix.size()] == s) ++num;
    }
    return {num, den};
}

}  // namespace fixtures
