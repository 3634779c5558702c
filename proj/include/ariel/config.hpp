#pragma once

#include "ariel/codec.hpp"
#include "ariel/dataset.hpp"
#include "ariel/language_model.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ariel {

struct RunConfig {
    std::string grammar = "data/question_grammar.cfg";
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    // per-stage overrides; missing stages derive from `seed`
    std::map<std::string, std::uint64_t> stage_seeds;

    double bias_density = 0.8;
    std::vector<std::string> function_words;  // empty: built-in list

    SplitSizes splits{10000, 1000, 128, 1000};

    ModelKind model = ModelKind::Trie;
    int order = 3;
    double alpha = 0.01;

    std::size_t d = 16;
    Precision precision = Precision::Float;
    std::size_t n_max = 0;  // 0: longest grammar sentence + 2
    std::size_t samples = 10000;

    std::vector<std::size_t> d_list{1, 2, 4, 8, 16, 32, 64};
    std::size_t pairs = 100;
    std::size_t steps = 100;

    std::uint64_t stage_seed(const std::string& stage) const;
};

/// YAML document with sections grammar, seed, seeds, bias, splits, model,
/// codec, evaluation, interpolation. Unknown keys are rejected. Throws
/// InvalidArgument.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string config_to_yaml(const RunConfig& config);

ModelKind parse_model_kind(const std::string& name);
Precision parse_precision(const std::string& name);
std::string precision_name(Precision p);

}  // namespace ariel
