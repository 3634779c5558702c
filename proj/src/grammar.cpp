#include "ariel/grammar.hpp"

#include "ariel/error.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace ariel {

namespace {

enum class TokenType { Ident, Quoted, Arrow, Bar, End };

struct Token {
    TokenType type;
    std::string text;
    std::size_t line;
    std::size_t column;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
        } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            out.push_back({TokenType::Arrow, "->", line, col});
            advance(2);
        } else if (c == '|') {
            out.push_back({TokenType::Bar, "|", line, col});
            advance(1);
        } else if (c == '\'' || c == '"') {
            const std::size_t l = line, cc = col;
            std::size_t j = i + 1;
            while (j < text.size() && text[j] != c && text[j] != '\n') ++j;
            if (j >= text.size() || text[j] != c) throw GrammarError("unterminated quoted terminal", l, cc);
            std::string value(text.substr(i + 1, j - i - 1));
            if (value.empty()) throw GrammarError("empty quoted terminal", l, cc);
            out.push_back({TokenType::Quoted, std::move(value), l, cc});
            advance(j - i + 1);
        } else if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j]) &&
                   !(text[j] == '-' && j + 1 < text.size() && text[j + 1] == '>'))
                ++j;
            out.push_back({TokenType::Ident, std::string(text.substr(i, j - i)), line, col});
            advance(j - i);
        } else {
            throw GrammarError(std::string("unexpected character '") + c + "'", line, col);
        }
    }
    out.push_back({TokenType::End, "", line, col});
    return out;
}

struct RawSymbol {
    std::string text;
    bool terminal;
    std::size_t line;
    std::size_t column;
};

struct RawProduction {
    std::string head;
    std::vector<RawSymbol> rhs;
};

std::vector<RawProduction> parse(const std::vector<Token>& tokens) {
    std::vector<RawProduction> out;
    std::size_t pos = 0;
    auto starts_rule = [&](std::size_t p) {
        return tokens[p].type == TokenType::Ident && tokens[p + 1].type == TokenType::Arrow;
    };
    while (tokens[pos].type != TokenType::End) {
        const Token& head = tokens[pos];
        if (head.type != TokenType::Ident)
            throw GrammarError("expected a rule head, found '" + head.text + "'", head.line, head.column);
        if (tokens[pos + 1].type != TokenType::Arrow)
            throw GrammarError("expected '->' after '" + head.text + "'", tokens[pos + 1].line,
                               tokens[pos + 1].column);
        pos += 2;
        while (true) {
            RawProduction prod{head.text, {}};
            while (tokens[pos].type == TokenType::Ident || tokens[pos].type == TokenType::Quoted) {
                if (starts_rule(pos)) break;
                const Token& t = tokens[pos];
                prod.rhs.push_back({t.text, t.type == TokenType::Quoted, t.line, t.column});
                ++pos;
            }
            if (prod.rhs.empty()) {
                // point at the dangling '|' rather than whatever follows it
                const Token& at = tokens[pos - 1].type == TokenType::Bar ? tokens[pos - 1] : tokens[pos];
                throw GrammarError("empty alternative for '" + head.text + "'", at.line, at.column);
            }
            out.push_back(std::move(prod));
            if (tokens[pos].type == TokenType::Bar) {
                ++pos;
                continue;
            }
            if (tokens[pos].type == TokenType::Arrow)
                throw GrammarError("unexpected '->'", tokens[pos].line, tokens[pos].column);
            break;
        }
    }
    return out;
}

}  // namespace

struct GrammarBuilder {
    static LoadedGrammar build(std::vector<RawProduction> raw, const GrammarOptions& options) {
        if (raw.empty()) throw GrammarError("no start symbol: grammar has no productions");

        LoadedGrammar result;
        Grammar& g = result.grammar;

        std::unordered_map<std::string, std::uint32_t> nt_index;
        for (const auto& p : raw) {
            if (nt_index.emplace(p.head, static_cast<std::uint32_t>(g.nonterminals_.size())).second)
                g.nonterminals_.push_back(p.head);
        }
        std::vector<std::string> terminals;
        for (const auto& p : raw) {
            for (const auto& s : p.rhs) {
                if (s.terminal) {
                    terminals.push_back(s.text);
                } else if (!nt_index.count(s.text)) {
                    throw GrammarError("undefined nonterminal '" + s.text + "'", s.line, s.column);
                }
            }
        }
        g.vocab_ = Vocabulary(std::move(terminals));
        g.start_ = 0;
        g.by_head_.assign(g.nonterminals_.size(), {});
        for (const auto& p : raw) {
            Production prod;
            prod.head = nt_index.at(p.head);
            for (const auto& s : p.rhs) {
                if (s.terminal)
                    prod.rhs.push_back({*g.vocab_.find(s.text), true});
                else
                    prod.rhs.push_back({nt_index.at(s.text), false});
            }
            g.by_head_[prod.head].push_back(static_cast<std::uint32_t>(g.productions_.size()));
            g.productions_.push_back(std::move(prod));
        }
        if (auto it = nt_index.find(options.counted_nonterminal); it != nt_index.end())
            g.counted_ = it->second;

        mark_recursion(g, result.warnings);
        build_prediction_index(g);
        return result;
    }

    static void mark_recursion(Grammar& g, std::vector<std::string>& warnings) {
        const std::size_t n = g.nonterminals_.size();
        std::vector<std::vector<std::uint32_t>> edges(n), left_edges(n);
        for (const auto& p : g.productions_) {
            for (std::size_t k = 0; k < p.rhs.size(); ++k) {
                if (p.rhs[k].terminal) continue;
                edges[p.head].push_back(p.rhs[k].id);
                if (k == 0) left_edges[p.head].push_back(p.rhs[k].id);
            }
        }
        auto reaches_self = [&](const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t a) {
            std::vector<bool> seen(n, false);
            std::vector<std::uint32_t> stack(adj[a].begin(), adj[a].end());
            while (!stack.empty()) {
                auto v = stack.back();
                stack.pop_back();
                if (v == a) return true;
                if (seen[v]) continue;
                seen[v] = true;
                stack.insert(stack.end(), adj[v].begin(), adj[v].end());
            }
            return false;
        };
        g.recursive_.assign(n, false);
        for (std::uint32_t a = 0; a < n; ++a) {
            if (!reaches_self(edges, a)) continue;
            g.recursive_[a] = true;
            warnings.push_back((reaches_self(left_edges, a) ? "left-recursive head '" : "recursive head '") +
                               g.nonterminals_[a] + "': sampling requires a depth cap");
        }
    }

    static void build_prediction_index(Grammar& g) {
        g.predict_nonterminal_.assign(g.nonterminals_.size(), {});
        g.predict_terminal_.assign(g.nonterminals_.size(), {});
        for (std::uint32_t i = 0; i < g.productions_.size(); ++i) {
            const auto& p = g.productions_[i];
            if (p.rhs.front().terminal)
                g.predict_terminal_[p.head].emplace_back(p.rhs.front().id, i);
            else
                g.predict_nonterminal_[p.head].push_back(i);
        }
        for (auto& v : g.predict_terminal_) std::stable_sort(v.begin(), v.end(), [](auto& a, auto& b) {
            return a.first < b.first;
        });
    }
};

std::optional<std::uint32_t> Grammar::find_nonterminal(std::string_view name) const {
    auto it = std::find(nonterminals_.begin(), nonterminals_.end(), name);
    if (it == nonterminals_.end()) return std::nullopt;
    return static_cast<std::uint32_t>(it - nonterminals_.begin());
}

bool Grammar::is_recursive() const noexcept {
    return std::find(recursive_.begin(), recursive_.end(), true) != recursive_.end();
}

std::optional<LengthStats> Grammar::length_stats() const {
    if (is_recursive()) return std::nullopt;
    const std::size_t n = nonterminals_.size();
    std::vector<std::optional<LengthStats>> memo(n);
    std::function<LengthStats(std::uint32_t)> visit = [&](std::uint32_t a) -> LengthStats {
        if (memo[a]) return *memo[a];
        LengthStats s{std::numeric_limits<std::size_t>::max(), 0, 0.0};
        for (auto pi : by_head_[a]) {
            LengthStats p{0, 0, 0.0};
            for (const auto& x : productions_[pi].rhs) {
                if (x.terminal) {
                    p.min_length += 1;
                    p.max_length += 1;
                    p.expected_length += 1.0;
                } else {
                    auto c = visit(x.id);
                    p.min_length += c.min_length;
                    p.max_length += c.max_length;
                    p.expected_length += c.expected_length;
                }
            }
            s.min_length = std::min(s.min_length, p.min_length);
            s.max_length = std::max(s.max_length, p.max_length);
            s.expected_length += p.expected_length;
        }
        s.expected_length /= static_cast<double>(by_head_[a].size());
        memo[a] = s;
        return s;
    };
    return visit(start_);
}

LoadedGrammar load_grammar(std::string_view text, const GrammarOptions& options) {
    return GrammarBuilder::build(parse(tokenize(text)), options);
}

LoadedGrammar load_grammar_file(const std::filesystem::path& path, const GrammarOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GrammarError("cannot open grammar file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_grammar(buffer.str(), options);
}

// --- sampling ---------------------------------------------------------------

namespace {

void expand(const Grammar& g, std::uint32_t head, Rng& rng, std::size_t depth, std::size_t max_depth,
            Sentence& out) {
    if (max_depth && depth > max_depth)
        throw Error("depth_exceeded", "sampling exceeded depth cap of " + std::to_string(max_depth));
    const auto& alts = g.productions_of(head);
    const auto& prod = g.productions()[alts[rng.uniform_index(alts.size())]];
    for (const auto& x : prod.rhs) {
        if (x.terminal)
            out.push_back(x.id);
        else
            expand(g, x.id, rng, depth + 1, max_depth, out);
    }
}

}  // namespace

Sentence sample_sentence(const Grammar& grammar, Rng& rng, const SampleOptions& options) {
    if (grammar.is_recursive() && options.max_depth == 0)
        throw InvalidArgument("grammar is recursive: sampling requires a depth cap");
    Sentence out;
    expand(grammar, grammar.start(), rng, 1, options.max_depth, out);
    out.push_back(grammar.vocabulary().eos());
    return out;
}

// --- recognition ------------------------------------------------------------

namespace {

struct Item {
    std::uint32_t production;
    std::uint32_t dot;
    std::uint32_t origin;
};

std::uint64_t item_key(const Item& it) {
    return (static_cast<std::uint64_t>(it.production) << 32) | (static_cast<std::uint64_t>(it.dot) << 16) |
           it.origin;
}

std::uint64_t span_key(std::uint32_t head, std::size_t i, std::size_t j) {
    return (static_cast<std::uint64_t>(head) << 32) | (static_cast<std::uint64_t>(i) << 16) | j;
}

/// First derivation (production file order, then leftmost-shortest split)
/// read back from the set of completed spans; returns the number of
/// counted-nonterminal occurrences.
class DerivationCounter {
public:
    DerivationCounter(const Grammar& g, std::span<const Symbol> tokens,
                      const std::unordered_set<std::uint64_t>& completed)
        : g_(g), tokens_(tokens), completed_(completed) {}

    std::optional<unsigned> count(std::uint32_t head, std::size_t i, std::size_t j) {
        const auto key = span_key(head, i, j);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        memo_[key] = std::nullopt;  // cycle guard for unit productions
        std::optional<unsigned> result;
        for (auto pi : g_.productions_of(head)) {
            if (auto r = sequence(g_.productions()[pi], 0, i, j)) {
                result = *r + (g_.counted_nonterminal() == head ? 1u : 0u);
                break;
            }
        }
        memo_[key] = result;
        return result;
    }

private:
    std::optional<unsigned> sequence(const Production& p, std::size_t m, std::size_t i, std::size_t j) {
        if (m == p.rhs.size()) return i == j ? std::optional<unsigned>(0) : std::nullopt;
        const std::size_t remaining = p.rhs.size() - m - 1;
        if (j < i + 1 + remaining) return std::nullopt;
        const auto& x = p.rhs[m];
        if (x.terminal) {
            if (tokens_[i] != x.id) return std::nullopt;
            return sequence(p, m + 1, i + 1, j);
        }
        for (std::size_t k = i + 1; k + remaining <= j; ++k) {
            if (!completed_.count(span_key(x.id, i, k))) continue;
            auto sub = count(x.id, i, k);
            if (!sub) continue;
            if (auto rest = sequence(p, m + 1, k, j)) return *sub + *rest;
        }
        return std::nullopt;
    }

    const Grammar& g_;
    std::span<const Symbol> tokens_;
    const std::unordered_set<std::uint64_t>& completed_;
    std::unordered_map<std::uint64_t, std::optional<unsigned>> memo_;
};

}  // namespace

ParseResult recognize(const Grammar& g, std::span<const Symbol> sentence) {
    const Vocabulary& vocab = g.vocabulary();
    if (sentence.empty() || sentence.back() != vocab.eos()) return {};
    const auto tokens = sentence.first(sentence.size() - 1);
    if (tokens.empty() || tokens.size() >= 0xFFFF) return {};
    for (Symbol s : tokens)
        if (s >= vocab.eos()) return {};

    const std::size_t n = tokens.size();
    std::vector<std::vector<Item>> sets(n + 1);
    std::vector<std::unordered_set<std::uint64_t>> seen(n + 1);
    std::unordered_set<std::uint64_t> completed;
    std::vector<std::vector<bool>> predicted(n + 1, std::vector<bool>(g.nonterminals().size(), false));

    auto add = [&](std::size_t k, Item it) {
        if (seen[k].insert(item_key(it)).second) sets[k].push_back(it);
    };
    auto predict = [&](std::size_t k, std::uint32_t head) {
        if (predicted[k][head]) return;
        predicted[k][head] = true;
        for (auto pi : g.predict_nonterminal_[head]) add(k, {pi, 0, static_cast<std::uint32_t>(k)});
        if (k < n) {
            const auto& by_terminal = g.predict_terminal_[head];
            auto lo = std::lower_bound(by_terminal.begin(), by_terminal.end(), tokens[k],
                                       [](const auto& e, Symbol t) { return e.first < t; });
            for (; lo != by_terminal.end() && lo->first == tokens[k]; ++lo)
                add(k, {lo->second, 0, static_cast<std::uint32_t>(k)});
        }
    };

    predict(0, g.start());
    for (std::size_t k = 0; k <= n; ++k) {
        for (std::size_t idx = 0; idx < sets[k].size(); ++idx) {
            const Item it = sets[k][idx];
            const auto& prod = g.productions()[it.production];
            if (it.dot == prod.rhs.size()) {
                completed.insert(span_key(prod.head, it.origin, k));
                // Completion walks the origin set; it may grow when origin == k,
                // which only happens for empty derivations (not supported).
                const auto& origin_set = sets[it.origin];
                for (std::size_t o = 0; o < origin_set.size(); ++o) {
                    const Item parent = origin_set[o];
                    const auto& pp = g.productions()[parent.production];
                    if (parent.dot < pp.rhs.size() && !pp.rhs[parent.dot].terminal &&
                        pp.rhs[parent.dot].id == prod.head)
                        add(k, {parent.production, parent.dot + 1, parent.origin});
                }
                continue;
            }
            const auto& next = prod.rhs[it.dot];
            if (next.terminal) {
                if (k < n && tokens[k] == next.id) add(k + 1, {it.production, it.dot + 1, it.origin});
            } else {
                predict(k, next.id);
            }
        }
    }

    if (!completed.count(span_key(g.start(), 0, n))) return {};
    ParseResult result;
    result.grammatical = true;
    DerivationCounter counter(g, tokens, completed);
    result.adjective_count = counter.count(g.start(), 0, n).value_or(0);
    result.rule_class = result.adjective_count;
    return result;
}

ParseResult recognize(const Grammar& grammar, std::span<const std::string> tokens) {
    Sentence s;
    for (const auto& t : tokens) {
        auto sym = grammar.vocabulary().find(t);
        if (!sym) return {};
        s.push_back(*sym);
    }
    s.push_back(grammar.vocabulary().eos());
    return recognize(grammar, s);
}

}  // namespace ariel
