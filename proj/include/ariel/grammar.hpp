#pragma once

#include "ariel/random.hpp"
#include "ariel/vocabulary.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ariel {

struct GrammarSymbol {
    std::uint32_t id = 0;   // vocabulary symbol when terminal, nonterminal index otherwise
    bool terminal = false;

    friend bool operator==(const GrammarSymbol&, const GrammarSymbol&) = default;
};

struct Production {
    std::uint32_t head = 0;
    std::vector<GrammarSymbol> rhs;
};

/// Outcome of recognizing a sentence. `rule_class` is set iff the sentence
/// is grammatical and equals the number of occurrences of the counted
/// nonterminal (`adjective` by default) in the first accepting derivation.
struct ParseResult {
    bool grammatical = false;
    unsigned adjective_count = 0;
    std::optional<unsigned> rule_class;
};

struct LengthStats {
    std::size_t min_length = 0;
    std::size_t max_length = 0;
    double expected_length = 0.0;  // under uniform choice among alternatives
};

struct GrammarOptions {
    /// Nonterminal whose occurrences define the rule classes.
    std::string counted_nonterminal = "adjective";
};

/// Immutable context-free grammar. Productions keep their file order, which
/// fixes both the sampler's alternative indexing and the derivation
/// tie-break used when counting adjectives.
class Grammar {
public:
    const Vocabulary& vocabulary() const noexcept { return vocab_; }
    std::uint32_t start() const noexcept { return start_; }
    const std::vector<std::string>& nonterminals() const noexcept { return nonterminals_; }
    const std::vector<Production>& productions() const noexcept { return productions_; }
    const std::vector<std::uint32_t>& productions_of(std::uint32_t head) const { return by_head_.at(head); }
    std::optional<std::uint32_t> find_nonterminal(std::string_view name) const;

    /// Nonterminals that can derive a string containing themselves.
    const std::vector<bool>& recursive() const noexcept { return recursive_; }
    bool is_recursive() const noexcept;
    std::optional<std::uint32_t> counted_nonterminal() const noexcept { return counted_; }

    /// Length statistics of the generated language; nullopt for recursive grammars.
    std::optional<LengthStats> length_stats() const;

private:
    friend struct GrammarBuilder;

    Vocabulary vocab_;
    std::vector<std::string> nonterminals_;
    std::vector<Production> productions_;
    std::vector<std::vector<std::uint32_t>> by_head_;
    std::vector<bool> recursive_;
    std::uint32_t start_ = 0;
    std::optional<std::uint32_t> counted_;

    // Earley prediction index: per head, nonterminal-initial productions and
    // terminal-initial productions keyed by their first terminal.
    std::vector<std::vector<std::uint32_t>> predict_nonterminal_;
    std::vector<std::vector<std::pair<Symbol, std::uint32_t>>> predict_terminal_;

    friend ParseResult recognize(const Grammar&, std::span<const Symbol>);
};

struct LoadedGrammar {
    Grammar grammar;
    std::vector<std::string> warnings;  // e.g. recursive heads
};

/// Parses the `head -> alt | alt` production syntax: single- or
/// double-quoted terminals, bare nonterminal names, `#` comments, and
/// alternatives that may continue across lines. The head of the first rule
/// is the start symbol. Throws GrammarError.
LoadedGrammar load_grammar(std::string_view text, const GrammarOptions& options = {});
LoadedGrammar load_grammar_file(const std::filesystem::path& path, const GrammarOptions& options = {});

struct SampleOptions {
    /// Maximum expansion depth; 0 means unbounded, which is only accepted
    /// for non-recursive grammars.
    std::size_t max_depth = 0;
};

/// Draws one sentence (EOS-terminated), choosing uniformly among the
/// alternatives of each expanded head.
Sentence sample_sentence(const Grammar& grammar, Rng& rng, const SampleOptions& options = {});

/// Earley recognition of an EOS-terminated sentence. Total: malformed
/// input is reported as not grammatical.
ParseResult recognize(const Grammar& grammar, std::span<const Symbol> sentence);

/// String-token overload; unknown tokens make the sentence ungrammatical.
ParseResult recognize(const Grammar& grammar, std::span<const std::string> tokens);

}  // namespace ariel
