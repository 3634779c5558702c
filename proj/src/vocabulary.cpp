#include "ariel/vocabulary.hpp"

#include "ariel/error.hpp"
#include "ariel/random.hpp"

#include <algorithm>

namespace ariel {

Vocabulary::Vocabulary(std::vector<std::string> terminals) {
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    for (const auto& t : terminals) {
        if (t == kEosToken) throw VocabularyError("terminal collides with reserved token " + t);
        if (t.empty()) throw VocabularyError("empty terminal");
    }
    symbols_ = std::move(terminals);
    symbols_.emplace_back(kEosToken);
    index_.reserve(symbols_.size());
    std::string joined;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        index_.emplace(symbols_[i], static_cast<Symbol>(i));
        joined += symbols_[i];
        joined += '\n';
    }
    hash_ = fnv1a64(joined);
}

std::optional<Symbol> Vocabulary::find(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Sentence Vocabulary::encode_tokens(std::span<const std::string> tokens) const {
    Sentence out;
    out.reserve(tokens.size() + 1);
    for (const auto& t : tokens) {
        auto s = find(t);
        if (!s || *s == eos()) throw VocabularyError("unknown token '" + t + "'");
        out.push_back(*s);
    }
    out.push_back(eos());
    return out;
}

std::vector<std::string> Vocabulary::decode_tokens(std::span<const Symbol> sentence) const {
    std::vector<std::string> out;
    for (Symbol s : sentence) {
        if (s == eos()) break;
        out.push_back(token(s));
    }
    return out;
}

std::string Vocabulary::join(std::span<const Symbol> sentence) const {
    std::string out;
    for (Symbol s : sentence) {
        if (!out.empty()) out += ' ';
        out += token(s);
    }
    return out;
}

void validate_sentence(const Vocabulary& vocab, std::span<const Symbol> sentence) {
    if (sentence.empty() || sentence.back() != vocab.eos())
        throw InvalidArgument("sentence is not EOS-terminated");
    for (std::size_t i = 0; i < sentence.size(); ++i) {
        if (sentence[i] >= vocab.size()) throw InvalidArgument("symbol out of range");
        if (sentence[i] == vocab.eos() && i + 1 != sentence.size())
            throw InvalidArgument("EOS before the end of the sentence");
    }
}

}  // namespace ariel
