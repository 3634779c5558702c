#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ariel {

using Symbol = std::uint32_t;

/// Symbol sequence. Sentences handed to the codec carry the end-of-sentence
/// symbol as their last element.
using Sentence = std::vector<Symbol>;

/// Dense symbol table. Terminals are kept in lexicographic order and the
/// reserved end-of-sentence symbol always takes the last index.
class Vocabulary {
public:
    static constexpr std::string_view kEosToken = "<eos>";

    Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

    /// Builds the canonical ordering from an arbitrary set of terminal
    /// strings. Duplicates are merged; the EOS token is rejected.
    explicit Vocabulary(std::vector<std::string> terminals);

    std::size_t size() const noexcept { return symbols_.size(); }
    Symbol eos() const noexcept { return static_cast<Symbol>(symbols_.size() - 1); }
    const std::string& token(Symbol s) const { return symbols_.at(s); }
    const std::vector<std::string>& tokens() const noexcept { return symbols_; }

    std::optional<Symbol> find(std::string_view token) const;

    /// Maps tokens to symbols and appends EOS. Throws VocabularyError on an
    /// unknown token.
    Sentence encode_tokens(std::span<const std::string> tokens) const;

    /// Inverse of encode_tokens; the trailing EOS is dropped.
    std::vector<std::string> decode_tokens(std::span<const Symbol> sentence) const;

    std::string join(std::span<const Symbol> sentence) const;

    /// FNV-1a over the newline-joined symbol list.
    std::uint64_t hash() const noexcept { return hash_; }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.symbols_ == b.symbols_; }

private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, Symbol> index_;
    std::uint64_t hash_ = 0;
};

/// Checks that a sentence is EOS-terminated, holds EOS nowhere else and uses
/// only in-range symbols. Throws InvalidArgument.
void validate_sentence(const Vocabulary& vocab, std::span<const Symbol> sentence);

}  // namespace ariel
