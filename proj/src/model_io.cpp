#include "ariel/model_io.hpp"

#include "ariel/error.hpp"
#include "ariel/ngram_lm.hpp"
#include "ariel/random.hpp"
#include "ariel/trie_lm.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace ariel {

namespace {

constexpr char kMagic[8] = {'A', 'R', 'I', 'E', 'L', 'L', 'M', '\0'};

class Writer {
public:
    template <class T>
    void put(T v) {
        static_assert(std::is_integral_v<T>);
        for (std::size_t i = 0; i < sizeof(T); ++i) buf.push_back(static_cast<char>((std::uint64_t(v) >> (8 * i)) & 0xFF));
    }
    void bytes(std::string_view s) { buf.append(s); }
    std::string buf;
};

class Reader {
public:
    explicit Reader(std::string_view b) : buf(b) {}
    template <class T>
    T get() {
        need(sizeof(T));
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
        pos += sizeof(T);
        return static_cast<T>(v);
    }
    std::string_view bytes(std::size_t n) {
        need(n);
        auto s = buf.substr(pos, n);
        pos += n;
        return s;
    }
    void need(std::size_t n) const {
        if (buf.size() - pos < n) throw FormatError("model file truncated");
    }
    std::string_view buf;
    std::size_t pos = 0;
};

void write_payload(Writer& w, const LanguageModel& lm) {
    if (auto* t = dynamic_cast<const TrieLM*>(&lm)) {
        const auto& nodes = t->nodes();
        w.put<std::uint64_t>(nodes.size());
        for (const auto& n : nodes) {
            w.put<std::uint32_t>(n.symbol);
            w.put<std::uint32_t>(n.count);
            w.put<std::uint32_t>(n.eos_count);
            w.put<std::uint32_t>(n.first_child);
            w.put<std::uint32_t>(n.child_count);
        }
    } else if (auto* g = dynamic_cast<const NgramLM*>(&lm)) {
        w.put<std::uint32_t>(g->order());
        w.put<std::uint64_t>(std::bit_cast<std::uint64_t>(g->alpha()));
        for (const auto& table : g->tables()) {
            w.put<std::uint64_t>(table.size());
            for (const auto& c : table) {
                w.put<std::uint64_t>(c.key);
                w.put<std::uint32_t>(c.count);
            }
        }
    } else {
        throw InvalidArgument("model type cannot be serialized");
    }
}

}  // namespace

std::string serialize_model(const LanguageModel& lm) {
    Writer w;
    w.bytes(std::string_view(kMagic, 8));
    w.put<std::uint32_t>(kModelFormatVersion);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(lm.kind()));
    const Vocabulary& v = lm.vocabulary();
    w.put<std::uint64_t>(v.hash());
    w.put<std::uint32_t>(static_cast<std::uint32_t>(v.size() - 1));
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        w.put<std::uint32_t>(static_cast<std::uint32_t>(v.token(i).size()));
        w.bytes(v.token(i));
    }
    write_payload(w, lm);
    w.put<std::uint64_t>(fnv1a64(w.buf));
    return std::move(w.buf);
}

std::unique_ptr<LanguageModel> deserialize_model(std::string_view bytes, const Vocabulary* expected) {
    if (bytes.size() < 8 + 8 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
        if (bytes.size() >= 8 && std::memcmp(bytes.data(), kMagic, 8) == 0) throw FormatError("model file truncated");
        throw FormatError("not a model file (bad magic)");
    }
    Reader r(bytes.substr(0, bytes.size() - 8));
    Reader tail(bytes.substr(bytes.size() - 8));
    r.bytes(8);
    const auto version = r.get<std::uint32_t>();
    if (version != kModelFormatVersion)
        throw FormatError("unsupported model format version " + std::to_string(version));
    if (tail.get<std::uint64_t>() != fnv1a64(r.buf)) throw FormatError("model checksum mismatch (corrupt or truncated)");

    const auto kind = r.get<std::uint8_t>();
    const auto hash = r.get<std::uint64_t>();
    if (expected && expected->hash() != hash)
        throw VocabularyError("model was built over a different vocabulary");
    const auto n = r.get<std::uint32_t>();
    std::vector<std::string> tokens;
    tokens.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) tokens.emplace_back(r.bytes(r.get<std::uint32_t>()));
    Vocabulary vocab(std::move(tokens));
    if (vocab.hash() != hash || vocab.size() != std::size_t(n) + 1)
        throw FormatError("embedded vocabulary does not match its hash");

    std::unique_ptr<LanguageModel> out;
    if (kind == static_cast<std::uint8_t>(ModelKind::Trie)) {
        const auto count = r.get<std::uint64_t>();
        r.need(count * 20);
        std::vector<TrieLM::Node> nodes(count);
        for (auto& nd : nodes) {
            nd.symbol = r.get<std::uint32_t>();
            nd.count = r.get<std::uint32_t>();
            nd.eos_count = r.get<std::uint32_t>();
            nd.first_child = r.get<std::uint32_t>();
            nd.child_count = r.get<std::uint32_t>();
        }
        out = std::make_unique<TrieLM>(TrieLM::from_nodes(std::move(vocab), std::move(nodes)));
    } else if (kind == static_cast<std::uint8_t>(ModelKind::Ngram)) {
        const int order = static_cast<int>(r.get<std::uint32_t>());
        const double alpha = std::bit_cast<double>(r.get<std::uint64_t>());
        if (order < 1 || order > NgramLM::kMaxOrder) throw FormatError("bad n-gram order");
        std::vector<std::vector<NgramLM::Count>> tables(order);
        for (auto& t : tables) {
            const auto count = r.get<std::uint64_t>();
            r.need(count * 12);
            t.resize(count);
            for (auto& c : t) {
                c.key = r.get<std::uint64_t>();
                c.count = r.get<std::uint32_t>();
            }
        }
        out = std::make_unique<NgramLM>(NgramLM::from_counts(std::move(vocab), order, alpha, std::move(tables)));
    } else {
        throw FormatError("unknown model kind tag " + std::to_string(kind));
    }
    if (r.pos != r.buf.size()) throw FormatError("trailing bytes after model payload");
    return out;
}

void save_model(const LanguageModel& lm, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    const std::string bytes = serialize_model(lm);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw InvalidArgument("cannot write model file " + path);
}

std::unique_ptr<LanguageModel> load_model(const std::string& path, const Vocabulary* expected) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open model file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return deserialize_model(ss.str(), expected);
}

std::string model_debug_json(const LanguageModel& lm) {
    using nlohmann::json;
    const Vocabulary& v = lm.vocabulary();
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(v.hash()));
    json j{{"kind", model_kind_name(lm.kind())}, {"version", kModelFormatVersion}, {"vocab_hash", hash},
           {"vocabulary", v.tokens()}};
    if (auto* t = dynamic_cast<const TrieLM*>(&lm)) {
        json nodes = json::array();
        for (const auto& n : t->nodes())
            nodes.push_back({n.symbol, n.count, n.eos_count, n.first_child, n.child_count});
        j["sentences"] = t->sentence_count();
        j["node_fields"] = {"symbol", "count", "eos_count", "first_child", "child_count"};
        j["nodes"] = std::move(nodes);
    } else if (auto* g = dynamic_cast<const NgramLM*>(&lm)) {
        j["order"] = g->order();
        j["alpha"] = g->alpha();
        json tables = json::array();
        const auto all = g->tables();
        for (std::size_t k = 0; k < all.size(); ++k) {
            json rows = json::array();
            for (const auto& c : all[k]) {
                std::vector<std::string> words;
                for (std::size_t i = k; i >= 1; --i) {
                    const auto s = (c.key >> (16 * i)) & 0xFFFF;
                    words.push_back(s == NgramLM::kBos ? "<bos>" : v.token(static_cast<Symbol>(s)));
                }
                rows.push_back({{"context", words}, {"next", v.token(static_cast<Symbol>(c.key & 0xFFFF))}, {"count", c.count}});
            }
            tables.push_back(std::move(rows));
        }
        j["tables"] = std::move(tables);
    }
    return j.dump(1);
}

}  // namespace ariel
