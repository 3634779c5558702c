#include "ariel/dataset.hpp"

#include "ariel/error.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>
#include <unordered_set>

namespace ariel {

namespace {

struct SentenceHash {
    std::size_t operator()(const Sentence& s) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (Symbol x : s) {
            h ^= x;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

std::string_view split_name(Split split) {
    switch (split) {
        case Split::BiasedTrain: return "biased_train";
        case Split::BiasedTest: return "biased_test";
        case Split::BiasedVal: return "biased_val";
        case Split::UnbiasedTest: return "unbiased_test";
    }
    return "";
}

const std::vector<Sentence>& DatasetSplits::get(Split split) const {
    switch (split) {
        case Split::BiasedTrain: return biased_train;
        case Split::BiasedTest: return biased_test;
        case Split::BiasedVal: return biased_val;
        case Split::UnbiasedTest: return unbiased_test;
    }
    throw InvalidArgument("unknown split");
}

std::vector<Sentence>& DatasetSplits::get(Split split) {
    return const_cast<std::vector<Sentence>&>(std::as_const(*this).get(split));
}

DatasetSplits generate_dataset(const Grammar& grammar, const BiasMatrix& bias, const SplitSizes& sizes,
                               std::uint64_t seed, const DatasetOptions& options) {
    if (bias.vocab_hash() != grammar.vocabulary().hash())
        throw VocabularyError("bias matrix was built for a different vocabulary");
    const std::size_t biased_target = sizes.biased_total();
    const std::size_t total = biased_target + sizes.unbiased_test;
    const std::size_t budget = options.max_draws ? options.max_draws : 50 * total + 100000;

    Rng rng(seed);
    std::unordered_set<Sentence, SentenceHash> seen;
    seen.reserve(total * 2);
    std::vector<Sentence> biased, unbiased;
    biased.reserve(biased_target);
    unbiased.reserve(sizes.unbiased_test);

    std::size_t draws = 0;
    while (biased.size() < biased_target || unbiased.size() < sizes.unbiased_test) {
        if (draws == budget)
            throw DatasetTimeout("dataset generation exhausted " + std::to_string(budget) + " draws: biased " +
                                 std::to_string(biased.size()) + "/" + std::to_string(biased_target) +
                                 ", unbiased " + std::to_string(unbiased.size()) + "/" +
                                 std::to_string(sizes.unbiased_test));
        ++draws;
        Sentence s = sample_sentence(grammar, rng);
        auto& pool = complies(bias, s) ? biased : unbiased;
        const std::size_t cap = &pool == &biased ? biased_target : sizes.unbiased_test;
        if (pool.size() >= cap) continue;
        if (!seen.insert(s).second) continue;
        pool.push_back(std::move(s));
    }

    // Fisher-Yates with the same stream, then cut.
    for (std::size_t i = biased.size(); i > 1; --i) std::swap(biased[i - 1], biased[rng.uniform_index(i)]);

    DatasetSplits out;
    out.seed = seed;
    out.draws = draws;
    auto it = std::make_move_iterator(biased.begin());
    out.biased_train.assign(it, it + sizes.biased_train);
    it += sizes.biased_train;
    out.biased_test.assign(it, it + sizes.biased_test);
    it += sizes.biased_test;
    out.biased_val.assign(it, it + sizes.biased_val);
    out.unbiased_test = std::move(unbiased);
    return out;
}

void write_jsonl(std::ostream& out, const Vocabulary& vocab, const std::vector<Sentence>& sentences,
                 std::string_view split) {
    for (const auto& s : sentences) {
        nlohmann::json j;
        j["tokens"] = vocab.decode_tokens(s);
        j["split"] = split;
        out << j.dump() << '\n';
    }
}

std::vector<Sentence> read_jsonl(std::istream& in, const Vocabulary& vocab) {
    std::vector<Sentence> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<std::string> tokens;
        try {
            tokens = nlohmann::json::parse(line).at("tokens").get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
        out.push_back(vocab.encode_tokens(tokens));
    }
    return out;
}

}  // namespace ariel
