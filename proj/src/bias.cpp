#include "ariel/bias.hpp"

#include "ariel/error.hpp"
#include "ariel/random.hpp"

#include <json.hpp>

#include <cstdio>

namespace ariel {

std::vector<std::string> default_function_words() {
    return {"a", "an", "that", "the", "this", "is", "it", "object", "thing", "made", "of", ",", "and", "?"};
}

std::size_t BiasMatrix::pair_index(std::size_t n, Symbol a, Symbol b) {
    // offset of row a in the strict upper triangle, plus column within row
    const std::size_t row = a, col = b;
    return row * (2 * n - row - 1) / 2 + (col - row - 1);
}

bool BiasMatrix::compatible(Symbol a, Symbol b) const {
    if (a >= size_ || b >= size_) throw InvalidArgument("symbol out of range for bias matrix");
    if (a == b) return true;
    if (a > b) std::swap(a, b);
    const std::size_t k = pair_index(size_, a, b);
    return (bits_[k / 8] >> (k % 8)) & 1u;
}

BiasMatrix BiasMatrix::from_parts(std::size_t size, std::uint64_t seed, double density, std::uint64_t vocab_hash,
                                  std::vector<std::uint8_t> bits, std::vector<bool> exempt) {
    const std::size_t pairs = size * (size - (size ? 1 : 0)) / 2;
    if (bits.size() != (pairs + 7) / 8 || exempt.size() != size)
        throw FormatError("bias matrix payload does not match its size");
    BiasMatrix m;
    m.size_ = size;
    m.seed_ = seed;
    m.density_ = density;
    m.vocab_hash_ = vocab_hash;
    m.bits_ = std::move(bits);
    m.exempt_ = std::move(exempt);
    return m;
}

BiasMatrix make_bias(const Vocabulary& vocab, double density, std::uint64_t seed,
                     std::span<const std::string> function_words) {
    if (!(density >= 0.0 && density <= 1.0)) throw InvalidArgument("bias density must lie in [0, 1]");
    BiasMatrix m;
    const std::size_t n = vocab.size();
    m.size_ = n;
    m.seed_ = seed;
    m.density_ = density;
    m.vocab_hash_ = vocab.hash();
    const std::size_t pairs = n * (n - 1) / 2;
    m.bits_.assign((pairs + 7) / 8, 0);
    Rng rng(seed);
    for (std::size_t k = 0; k < pairs; ++k)
        if (rng.bernoulli(density)) m.bits_[k / 8] |= static_cast<std::uint8_t>(1u << (k % 8));
    m.exempt_.assign(n, false);
    m.exempt_[vocab.eos()] = true;
    for (const auto& w : function_words)
        if (auto s = vocab.find(w)) m.exempt_[*s] = true;
    return m;
}

BiasMatrix make_bias(const Vocabulary& vocab, double density, std::uint64_t seed) {
    const auto words = default_function_words();
    return make_bias(vocab, density, seed, words);
}

bool complies(const BiasMatrix& bias, std::span<const Symbol> sentence) {
    std::vector<Symbol> content;
    for (Symbol s : sentence)
        if (!bias.exempt(s)) content.push_back(s);
    for (std::size_t i = 0; i < content.size(); ++i)
        for (std::size_t j = i + 1; j < content.size(); ++j)
            if (!bias.compatible(content[i], content[j])) return false;
    return true;
}

namespace {

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out += digits[b >> 4];
        out += digits[b & 15];
    }
    return out;
}

std::vector<std::uint8_t> from_hex(const std::string& text) {
    if (text.size() % 2) throw FormatError("odd-length hex payload");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw FormatError("invalid hex digit");
    };
    std::vector<std::uint8_t> out(text.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(nibble(text[2 * i]) << 4 | nibble(text[2 * i + 1]));
    return out;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::string bias_to_json(const BiasMatrix& bias) {
    nlohmann::json j;
    j["seed"] = bias.seed();
    j["density"] = bias.density();
    j["vocab_hash"] = hex64(bias.vocab_hash());
    j["size"] = bias.size();
    j["bits"] = to_hex(bias.packed_bits());
    std::vector<std::uint32_t> exempt;
    for (std::size_t i = 0; i < bias.size(); ++i)
        if (bias.exempt(static_cast<Symbol>(i))) exempt.push_back(static_cast<std::uint32_t>(i));
    j["exempt"] = exempt;
    return j.dump();
}

BiasMatrix bias_from_json(const std::string& text) {
    try {
        auto j = nlohmann::json::parse(text);
        const std::size_t size = j.at("size").get<std::size_t>();
        std::vector<bool> exempt(size, false);
        for (auto idx : j.at("exempt").get<std::vector<std::uint32_t>>()) {
            if (idx >= size) throw FormatError("exempt index out of range");
            exempt[idx] = true;
        }
        return BiasMatrix::from_parts(size, j.at("seed").get<std::uint64_t>(), j.at("density").get<double>(),
                                      std::stoull(j.at("vocab_hash").get<std::string>(), nullptr, 16),
                                      from_hex(j.at("bits").get<std::string>()), std::move(exempt));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed bias matrix JSON: ") + e.what());
    }
}

}  // namespace ariel
