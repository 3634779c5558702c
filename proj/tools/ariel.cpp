// ariel: dataset generation, model fitting, volume encode/decode and
// evaluation from the command line.

#include "ariel/bias.hpp"
#include "ariel/codec.hpp"
#include "ariel/config.hpp"
#include "ariel/dataset.hpp"
#include "ariel/error.hpp"
#include "ariel/evaluation.hpp"
#include "ariel/grammar.hpp"
#include "ariel/model_io.hpp"
#include "ariel/ngram_lm.hpp"
#include "ariel/random.hpp"
#include "ariel/trie_lm.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace ariel;

namespace {

// bad invocation or configuration: exit status 2
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw Error("io", "cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

struct Globals {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> d;
    std::optional<std::string> precision;
    std::optional<std::size_t> n_max;
    std::optional<std::string> out_dir;
    std::string config;
};

RunConfig resolve(const Globals& g) {
    RunConfig c;
    if (!g.config.empty()) {
        if (!fs::exists(g.config)) throw UsageError("config file not found: " + g.config);
        c = load_config(g.config);
    }
    if (g.seed) c.seed = *g.seed;
    if (g.d) {
        if (*g.d == 0) throw UsageError("--d must be at least 1");
        c.d = *g.d;
    }
    if (g.precision) c.precision = parse_precision(*g.precision);
    if (g.n_max) c.n_max = *g.n_max;
    if (g.out_dir) c.out_dir = *g.out_dir;
    return c;
}

Grammar load_grammar_checked(const RunConfig& c) {
    if (!fs::exists(c.grammar)) throw UsageError("grammar file not found: " + c.grammar);
    auto loaded = load_grammar_file(c.grammar);
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
    return std::move(loaded.grammar);
}

std::size_t resolve_n_max(const RunConfig& c, const Grammar* grammar) {
    if (c.n_max) return c.n_max;
    std::optional<Grammar> own;
    if (!grammar) {
        if (!fs::exists(c.grammar)) throw UsageError("pass --n-max or a readable grammar to bound decoding");
        own = load_grammar_checked(c);
        grammar = &*own;
    }
    auto stats = grammar->length_stats();
    if (!stats) throw UsageError("grammar is recursive; pass --n-max");
    return stats->max_length + 2;
}

std::vector<std::string> function_words(const RunConfig& c) {
    return c.function_words.empty() ? default_function_words() : c.function_words;
}

void write_config(const RunConfig& c, const std::string& name) {
    write_atomic(fs::path(c.out_dir) / name, config_to_yaml(c));
}

std::vector<Sentence> load_split(const fs::path& dir, Split split, const Vocabulary& vocab) {
    const fs::path path = dir / (std::string(split_name(split)) + ".jsonl");
    std::istringstream in(read_file(path));
    return read_jsonl(in, vocab);
}

ordered_json file_entry(const fs::path& path, const std::string& content) {
    std::size_t lines = std::count(content.begin(), content.end(), '\n');
    return {{"file", path.filename().string()}, {"fnv1a64", hex64(fnv1a64(content))}, {"lines", lines}};
}

std::string z_to_csv_row(const std::vector<double>& z) {
    std::ostringstream o;
    o.precision(17);
    for (std::size_t k = 0; k < z.size(); ++k) o << (k ? "," : "") << z[k];
    return o.str();
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

// commands

int cmd_generate_dataset(const RunConfig& c) {
    const Grammar grammar = load_grammar_checked(c);
    const std::string grammar_text = read_file(c.grammar);
    const auto words = function_words(c);
    const BiasMatrix bias = make_bias(grammar.vocabulary(), c.bias_density, c.stage_seed("bias"), words);
    const DatasetSplits splits = generate_dataset(grammar, bias, c.splits, c.stage_seed("dataset"));

    const fs::path dir = c.out_dir;
    ordered_json files = ordered_json::array();
    for (Split s : kAllSplits) {
        std::ostringstream o;
        write_jsonl(o, grammar.vocabulary(), splits.get(s), split_name(s));
        const fs::path path = dir / (std::string(split_name(s)) + ".jsonl");
        write_atomic(path, o.str());
        files.push_back(file_entry(path, o.str()));
    }
    const std::string bias_json = bias_to_json(bias);
    write_atomic(dir / "bias.json", bias_json);
    files.push_back(file_entry(dir / "bias.json", bias_json));

    ordered_json m;
    m["grammar"] = {{"path", c.grammar}, {"fnv1a64", hex64(fnv1a64(grammar_text))},
                    {"vocabulary", grammar.vocabulary().size() - 1},
                    {"vocab_hash", hex64(grammar.vocabulary().hash())}};
    m["seed"] = c.seed;
    m["seeds"] = {{"bias", c.stage_seed("bias")}, {"dataset", c.stage_seed("dataset")}};
    m["bias"] = {{"density", c.bias_density}, {"function_words", words}};
    m["sizes"] = {{"biased_train", splits.biased_train.size()}, {"biased_test", splits.biased_test.size()},
                  {"biased_val", splits.biased_val.size()}, {"unbiased_test", splits.unbiased_test.size()}};
    m["draws"] = splits.draws;
    m["files"] = files;
    write_atomic(dir / "manifest.json", m.dump(2) + "\n");
    write_config(c, "config.yaml");
    std::cout << "wrote " << splits.biased_train.size() << '/' << splits.biased_test.size() << '/'
              << splits.biased_val.size() << '/' << splits.unbiased_test.size() << " sentences ("
              << splits.draws << " draws) to " << dir.string() << '\n';
    return 0;
}

int cmd_fit(RunConfig c, const std::string& dataset, const std::optional<std::string>& kind,
            std::optional<int> order, std::optional<double> alpha, bool dump) {
    if (kind) c.model = parse_model_kind(*kind);
    if (order) c.order = *order;
    if (alpha) c.alpha = *alpha;
    const Grammar grammar = load_grammar_checked(c);
    const Vocabulary& vocab = grammar.vocabulary();
    const fs::path dir = dataset.empty() ? fs::path(c.out_dir) : fs::path(dataset);
    const auto train = load_split(dir, Split::BiasedTrain, vocab);

    std::unique_ptr<LanguageModel> lm;
    if (c.model == ModelKind::Trie)
        lm = std::make_unique<TrieLM>(TrieLM::fit(vocab, train));
    else
        lm = std::make_unique<NgramLM>(NgramLM::fit(vocab, train, c.order, c.alpha));

    const std::string bytes = serialize_model(*lm);
    const fs::path out = fs::path(c.out_dir) / "model.bin";
    write_atomic(out, bytes);
    if (dump) write_atomic(fs::path(c.out_dir) / "model.json", model_debug_json(*lm));

    std::vector<bool> used(vocab.size(), false);
    std::size_t tokens = 0;
    for (const auto& s : train) {
        tokens += s.size() - 1;
        for (Symbol t : s) used[t] = true;
    }
    const std::size_t covered = std::count(used.begin(), used.end() - 1, true);
    ordered_json m;
    m["model"] = {{"kind", model_kind_name(lm->kind())}, {"fnv1a64", hex64(fnv1a64(bytes))}, {"bytes", bytes.size()}};
    if (c.model == ModelKind::Ngram) m["model"]["order"] = c.order, m["model"]["alpha"] = c.alpha;
    m["corpus"] = {{"sentences", train.size()}, {"tokens", tokens}, {"vocabulary_covered", covered},
                   {"vocabulary", vocab.size() - 1}};
    write_atomic(fs::path(c.out_dir) / "fit_manifest.json", m.dump(2) + "\n");
    write_config(c, "fit_config.yaml");
    std::cout << "fitted " << model_kind_name(lm->kind()) << " on " << train.size() << " sentences, " << tokens
              << " tokens; vocabulary coverage " << covered << '/' << vocab.size() - 1 << " -> " << out.string()
              << '\n';
    return 0;
}

// Reads `in` line by line and writes one output line per non-empty input
// line; failures become {"error": kind, "line": n}.
template <class F>
int stream_records(const std::string& input, const std::string& output, F&& handle) {
    std::ifstream fin;
    std::istream* in = &std::cin;
    if (input != "-") {
        fin.open(input);
        if (!fin) throw UsageError("cannot open " + input);
        in = &fin;
    }
    std::ofstream fout;
    std::ostream* out = &std::cout;
    fs::path tmp;
    if (output != "-") {
        tmp = output + ".tmp";
        if (tmp.has_parent_path()) fs::create_directories(tmp.parent_path());
        fout.open(tmp, std::ios::trunc);
        out = &fout;
    }
    std::string line;
    std::size_t n = 0, errors = 0;
    while (std::getline(*in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ordered_json rec;
        try {
            rec = handle(ordered_json::parse(line));
        } catch (const Error& e) {
            rec = {{"error", e.kind()}, {"line", n}, {"message", e.what()}};
            ++errors;
        } catch (const nlohmann::json::exception& e) {
            rec = {{"error", "format"}, {"line", n}, {"message", e.what()}};
            ++errors;
        }
        *out << rec.dump() << '\n';
    }
    out->flush();
    if (output != "-") {
        fout.close();
        fs::rename(tmp, output);
    }
    std::cerr << n << " records, " << errors << " errors\n";
    return 0;
}

std::unique_ptr<LanguageModel> open_model(const std::string& path) {
    if (!fs::exists(path)) throw UsageError("model file not found: " + path);
    return load_model(path);
}

std::vector<std::string> tokens_of(const ordered_json& j) {
    if (!j.is_object() || !j.contains("tokens") || !j["tokens"].is_array())
        throw FormatError("record lacks a \"tokens\" array");
    return j["tokens"].get<std::vector<std::string>>();
}

int cmd_encode(const RunConfig& c, const std::string& model, const std::string& input, const std::string& output) {
    const auto lm = open_model(model);
    const VolumeCodec codec(*lm, c.d);
    const Vocabulary& vocab = lm->vocabulary();
    return stream_records(input, output, [&](const ordered_json& j) {
        const auto tokens = tokens_of(j);
        const Sentence s = vocab.encode_tokens(tokens);
        ordered_json rec;
        if (c.precision == Precision::Float) {
            rec["z"] = codec.encode(s);
        } else {
            const auto z = codec.encode_exact(s);
            std::vector<double> zf;
            std::vector<std::string> zs;
            for (const auto& q : z) zf.push_back(to_double(q)), zs.push_back(to_string(q));
            rec["z"] = zf;
            rec["z_exact"] = zs;
        }
        rec["sentence"] = tokens;
        return rec;
    });
}

int cmd_decode(const RunConfig& c, const std::string& model, const std::string& input, const std::string& output) {
    const auto lm = open_model(model);
    const VolumeCodec codec(*lm, c.d);
    const std::size_t n_max = resolve_n_max(c, nullptr);
    const Vocabulary& vocab = lm->vocabulary();
    return stream_records(input, output, [&](const ordered_json& j) {
        if (!j.is_object()) throw FormatError("record is not an object");
        DecodeResult r;
        if (c.precision == Precision::Rational && j.contains("z_exact")) {
            std::vector<Rational> z;
            for (const auto& s : j["z_exact"]) z.push_back(parse_rational(s.get<std::string>()));
            r = codec.decode_exact(z, n_max);
        } else if (j.contains("z")) {
            const auto zf = j["z"].get<std::vector<double>>();
            if (c.precision == Precision::Rational) {
                std::vector<Rational> z;
                for (double v : zf) z.push_back(exact_rational(v));
                r = codec.decode_exact(z, n_max);
            } else {
                r = codec.decode(zf, n_max);
            }
        } else {
            throw FormatError("record lacks \"z\"");
        }
        return ordered_json{{"tokens", vocab.decode_tokens(r.sentence)}, {"cap_hit", r.cap_hit}};
    });
}

int cmd_sample(const RunConfig& c, const std::string& model, std::optional<std::size_t> count) {
    const auto lm = open_model(model);
    const VolumeCodec codec(*lm, c.d);
    const std::size_t n_max = resolve_n_max(c, nullptr);
    const std::size_t k = count.value_or(c.samples);
    Rng rng(c.stage_seed("sample"));
    const SamplingBox box = unit_box(c.d);
    std::ostringstream jl, csv;
    csv << "index";
    for (std::size_t a = 0; a < c.d; ++a) csv << ",z" << a;
    csv << ",sentence\n";
    for (std::size_t i = 0; i < k; ++i) {
        const Point z = sample_in_box(box, rng);
        const DecodeResult r = codec.decode(z, n_max);
        const auto tokens = lm->vocabulary().decode_tokens(r.sentence);
        jl << ordered_json{{"z", z}, {"tokens", tokens}, {"cap_hit", r.cap_hit}}.dump() << '\n';
        csv << i << ',' << z_to_csv_row(z) << ',' << csv_quote(lm->vocabulary().join(r.sentence)) << '\n';
    }
    write_atomic(fs::path(c.out_dir) / "samples.jsonl", jl.str());
    write_atomic(fs::path(c.out_dir) / "samples.csv", csv.str());
    write_config(c, "sample_config.yaml");
    std::cout << "decoded " << k << " points -> " << (fs::path(c.out_dir) / "samples.jsonl").string() << '\n';
    return 0;
}

int cmd_evaluate(const RunConfig& c, const std::string& model, const std::string& dataset) {
    const Grammar grammar = load_grammar_checked(c);
    const auto lm = open_model(model);
    if (!(lm->vocabulary() == grammar.vocabulary())) throw VocabularyError("model vocabulary differs from the grammar");
    const fs::path dir = dataset.empty() ? fs::path(c.out_dir) : fs::path(dataset);
    const auto test = load_split(dir, Split::BiasedTest, grammar.vocabulary());
    const auto unbiased = load_split(dir, Split::UnbiasedTest, grammar.vocabulary());
    const BiasMatrix bias = bias_from_json(read_file(dir / "bias.json"));
    const VolumeCodec codec(*lm, c.d);
    const std::size_t n_max = resolve_n_max(c, &grammar);

    EvalReport r;
    r.seed = c.seed;
    r.d = c.d;
    r.n_max = n_max;
    r.precision = c.precision;
    r.model = std::string(model_kind_name(lm->kind()));

    // sampling box from the encodable test sentences
    std::vector<Point> points;
    for (const auto& s : test) {
        try {
            points.push_back(codec.encode(s));
        } catch (const OutOfSupportError&) {
        } catch (const PrecisionError&) {
        }
    }
    r.box_points = points.size();
    r.box_fallback = points.empty();
    const SamplingBox box = points.empty() ? unit_box(c.d) : bounding_box(points);

    Rng rng(c.stage_seed("evaluate"));
    r.generation = generation_metrics(codec, box, c.samples, grammar, rng, n_max);
    r.prediction = prediction_metrics(codec, test, bias, grammar, c.precision, n_max);
    r.generalization = generalization_metrics(codec, unbiased, c.precision, n_max);

    write_atomic(fs::path(c.out_dir) / "report.json", report_to_json(r));
    write_atomic(fs::path(c.out_dir) / "report.csv", report_csv_header() + report_csv_row(r));
    write_config(c, "evaluate_config.yaml");
    std::cout << report_summary(r);
    if (r.box_fallback) std::cout << "note: no test sentence encodes under this model; sampled the unit cube\n";
    return 0;
}

int cmd_interpolate(const RunConfig& c, const std::string& model, bool check_trend) {
    const Grammar grammar = load_grammar_checked(c);
    const auto lm = open_model(model);
    if (!(lm->vocabulary() == grammar.vocabulary())) throw VocabularyError("model vocabulary differs from the grammar");
    const std::size_t n_max = resolve_n_max(c, &grammar);
    const auto curve = interpolation_diversity(*lm, c.d_list, c.pairs, c.steps, n_max, grammar, c.stage_seed("interpolate"));
    const std::string csv = curve_to_csv(curve);
    write_atomic(fs::path(c.out_dir) / "interpolation.csv", csv);
    write_config(c, "interpolate_config.yaml");
    std::cout << csv;
    if (curve.points.size() >= 2) {
        std::vector<double> ds, means;
        for (const auto& p : curve.points) ds.push_back(static_cast<double>(p.d)), means.push_back(p.mean);
        const double rho = spearman(ds, means);
        std::cout << "spearman " << rho << '\n';
        if (check_trend && rho > -0.8) {
            std::cerr << "diversity does not decrease with d (spearman " << rho << ")\n";
            return 1;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AriEL volume coding: sentences to boxes in [0,1]^d and back"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "master seed");
    app.add_option("--d", g.d, "latent dimension");
    app.add_option("--precision", g.precision, "float or rational")->check(CLI::IsMember({"float", "rational"}));
    app.add_option("--n-max", g.n_max, "maximum decoded tokens before EOS");
    app.add_option("--out-dir", g.out_dir, "output directory");
    app.add_option("--config", g.config, "YAML run configuration");

    auto* gen = app.add_subcommand("generate-dataset", "sample the grammar into biased/unbiased splits");

    std::string dataset, model = "", input = "-", output = "-";
    std::optional<std::string> kind;
    std::optional<int> order;
    std::optional<double> alpha;
    bool dump = false, check_trend = false;
    std::optional<std::size_t> count;

    auto* fit = app.add_subcommand("fit", "fit a language model on biased_train");
    fit->add_option("--dataset", dataset, "dataset directory (default: out dir)");
    fit->add_option("--model-kind", kind, "trie or ngram")->check(CLI::IsMember({"trie", "ngram"}));
    fit->add_option("--order", order, "n-gram order");
    fit->add_option("--alpha", alpha, "n-gram add-alpha");
    fit->add_flag("--dump", dump, "also write a JSON dump of the model");

    auto* enc = app.add_subcommand("encode", "sentences (JSONL) to latent points");
    auto* dec = app.add_subcommand("decode", "latent points (JSONL) to sentences");
    for (auto* sub : {enc, dec}) {
        sub->add_option("--model", model, "model file")->required();
        sub->add_option("--input", input, "input JSONL, - for stdin");
        sub->add_option("--output", output, "output JSONL, - for stdout");
    }

    auto* smp = app.add_subcommand("sample", "decode uniform points of the unit cube");
    smp->add_option("--model", model, "model file")->required();
    smp->add_option("--count", count, "number of points");

    auto* ev = app.add_subcommand("evaluate", "generation, prediction and generalization metrics");
    ev->add_option("--model", model, "model file")->required();
    ev->add_option("--dataset", dataset, "dataset directory (default: out dir)");

    auto* itp = app.add_subcommand("interpolate", "diversity along random segments per dimension");
    itp->add_option("--model", model, "model file")->required();
    itp->add_flag("--check-trend", check_trend, "exit 1 unless diversity falls with d");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const RunConfig c = resolve(g);
        if (*gen) return cmd_generate_dataset(c);
        if (*fit) return cmd_fit(c, dataset, kind, order, alpha, dump);
        if (*enc) return cmd_encode(c, model, input, output);
        if (*dec) return cmd_decode(c, model, input, output);
        if (*smp) return cmd_sample(c, model, count);
        if (*ev) return cmd_evaluate(c, model, dataset);
        if (*itp) return cmd_interpolate(c, model, check_trend);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const GrammarError& e) {
        std::cerr << "grammar error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error (" << e.kind() << "): " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
