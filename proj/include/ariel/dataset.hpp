#pragma once

#include "ariel/bias.hpp"
#include "ariel/grammar.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ariel {

enum class Split { BiasedTrain, BiasedTest, BiasedVal, UnbiasedTest };

inline constexpr std::array<Split, 4> kAllSplits{Split::BiasedTrain, Split::BiasedTest, Split::BiasedVal,
                                                 Split::UnbiasedTest};

std::string_view split_name(Split split);

struct SplitSizes {
    std::size_t biased_train = 0;
    std::size_t biased_test = 0;
    std::size_t biased_val = 0;
    std::size_t unbiased_test = 0;

    std::size_t biased_total() const { return biased_train + biased_test + biased_val; }
};

struct DatasetOptions {
    /// Upper bound on grammar draws; 0 selects 50 * total + 100000.
    std::size_t max_draws = 0;
};

struct DatasetSplits {
    std::vector<Sentence> biased_train;
    std::vector<Sentence> biased_test;
    std::vector<Sentence> biased_val;
    std::vector<Sentence> unbiased_test;
    std::uint64_t seed = 0;
    std::size_t draws = 0;  // grammar samples consumed

    const std::vector<Sentence>& get(Split split) const;
    std::vector<Sentence>& get(Split split);
};

/// Rejection-samples the grammar: compliant sentences fill a biased pool
/// that is shuffled and cut into train/test/val, non-compliant ones fill the
/// unbiased test split. Every sentence in the result is distinct. Throws
/// DatasetTimeout (with fill counts) when the draw budget runs out.
DatasetSplits generate_dataset(const Grammar& grammar, const BiasMatrix& bias, const SplitSizes& sizes,
                               std::uint64_t seed, const DatasetOptions& options = {});

/// JSONL: one {"tokens": [...], "split": name} object per line, EOS implicit.
void write_jsonl(std::ostream& out, const Vocabulary& vocab, const std::vector<Sentence>& sentences,
                 std::string_view split);

/// Reads {"tokens": [...]} lines; blank lines are skipped. Throws
/// VocabularyError for tokens outside the vocabulary and FormatError for
/// malformed lines.
std::vector<Sentence> read_jsonl(std::istream& in, const Vocabulary& vocab);

}  // namespace ariel
