#include "ariel/config.hpp"

#include "ariel/error.hpp"
#include "ariel/random.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <yaml-cpp/yaml.h>

namespace ariel {

namespace {

void check_keys(const YAML::Node& node, const std::string& where, std::set<std::string> allowed) {
    if (!node.IsMap()) throw InvalidArgument("config: '" + where + "' must be a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) throw InvalidArgument("config: unknown key '" + key + "' in " + where);
    }
}

template <class T>
void read(const YAML::Node& node, const char* key, T& out) {
    if (node[key]) out = node[key].as<T>();
}

}  // namespace

std::uint64_t RunConfig::stage_seed(const std::string& stage) const {
    auto it = stage_seeds.find(stage);
    return it != stage_seeds.end() ? it->second : derive_seed(seed, stage);
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "trie") return ModelKind::Trie;
    if (name == "ngram") return ModelKind::Ngram;
    throw InvalidArgument("unknown model kind '" + name + "' (trie or ngram)");
}

Precision parse_precision(const std::string& name) {
    if (name == "float") return Precision::Float;
    if (name == "rational") return Precision::Rational;
    throw InvalidArgument("unknown precision '" + name + "' (float or rational)");
}

std::string precision_name(Precision p) { return p == Precision::Float ? "float" : "rational"; }

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    try {
        YAML::Node root = YAML::Load(text);
        if (!root || root.IsNull()) return c;
        check_keys(root, "document",
                   {"grammar", "out_dir", "seed", "seeds", "bias", "splits", "model", "codec", "evaluation", "interpolation"});
        read(root, "grammar", c.grammar);
        read(root, "out_dir", c.out_dir);
        read(root, "seed", c.seed);
        if (auto s = root["seeds"]) {
            if (!s.IsMap()) throw InvalidArgument("config: 'seeds' must be a mapping");
            for (const auto& kv : s) c.stage_seeds[kv.first.as<std::string>()] = kv.second.as<std::uint64_t>();
        }
        if (auto b = root["bias"]) {
            check_keys(b, "bias", {"density", "function_words"});
            read(b, "density", c.bias_density);
            read(b, "function_words", c.function_words);
        }
        if (auto s = root["splits"]) {
            check_keys(s, "splits", {"biased_train", "biased_test", "biased_val", "unbiased_test"});
            read(s, "biased_train", c.splits.biased_train);
            read(s, "biased_test", c.splits.biased_test);
            read(s, "biased_val", c.splits.biased_val);
            read(s, "unbiased_test", c.splits.unbiased_test);
        }
        if (auto m = root["model"]) {
            check_keys(m, "model", {"kind", "order", "alpha"});
            if (m["kind"]) c.model = parse_model_kind(m["kind"].as<std::string>());
            read(m, "order", c.order);
            read(m, "alpha", c.alpha);
        }
        if (auto k = root["codec"]) {
            check_keys(k, "codec", {"d", "precision", "n_max"});
            read(k, "d", c.d);
            if (k["precision"]) c.precision = parse_precision(k["precision"].as<std::string>());
            read(k, "n_max", c.n_max);
        }
        if (auto e = root["evaluation"]) {
            check_keys(e, "evaluation", {"samples"});
            read(e, "samples", c.samples);
        }
        if (auto i = root["interpolation"]) {
            check_keys(i, "interpolation", {"d_list", "pairs", "steps"});
            read(i, "d_list", c.d_list);
            read(i, "pairs", c.pairs);
            read(i, "steps", c.steps);
        }
    } catch (const YAML::Exception& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    if (c.d == 0) throw InvalidArgument("config: d must be at least 1");
    if (!(c.bias_density >= 0.0 && c.bias_density <= 1.0)) throw InvalidArgument("config: bias density must be in [0, 1]");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidArgument("cannot open config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_yaml(const RunConfig& c) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "grammar" << YAML::Value << c.grammar;
    out << YAML::Key << "out_dir" << YAML::Value << c.out_dir;
    out << YAML::Key << "seed" << YAML::Value << c.seed;
    out << YAML::Key << "seeds" << YAML::Value << YAML::BeginMap;
    for (const char* stage : {"bias", "dataset", "sample", "evaluate", "interpolate"})
        out << YAML::Key << stage << YAML::Value << c.stage_seed(stage);
    out << YAML::EndMap;
    out << YAML::Key << "bias" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "density" << YAML::Value << c.bias_density;
    if (!c.function_words.empty()) out << YAML::Key << "function_words" << YAML::Value << YAML::Flow << c.function_words;
    out << YAML::EndMap;
    out << YAML::Key << "splits" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "biased_train" << YAML::Value << c.splits.biased_train;
    out << YAML::Key << "biased_test" << YAML::Value << c.splits.biased_test;
    out << YAML::Key << "biased_val" << YAML::Value << c.splits.biased_val;
    out << YAML::Key << "unbiased_test" << YAML::Value << c.splits.unbiased_test;
    out << YAML::EndMap;
    out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << std::string(model_kind_name(c.model));
    out << YAML::Key << "order" << YAML::Value << c.order;
    out << YAML::Key << "alpha" << YAML::Value << c.alpha;
    out << YAML::EndMap;
    out << YAML::Key << "codec" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "d" << YAML::Value << c.d;
    out << YAML::Key << "precision" << YAML::Value << precision_name(c.precision);
    out << YAML::Key << "n_max" << YAML::Value << c.n_max;
    out << YAML::EndMap;
    out << YAML::Key << "evaluation" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "samples" << YAML::Value << c.samples;
    out << YAML::EndMap;
    out << YAML::Key << "interpolation" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "d_list" << YAML::Value << YAML::Flow << c.d_list;
    out << YAML::Key << "pairs" << YAML::Value << c.pairs;
    out << YAML::Key << "steps" << YAML::Value << c.steps;
    out << YAML::EndMap;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace ariel
