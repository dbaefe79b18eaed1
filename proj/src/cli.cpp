#include "empeval/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "empeval/classifier.hpp"
#include "empeval/errors.hpp"
#include "empeval/eval.hpp"

namespace empeval::cli {

using nlohmann::json;

namespace {

std::string_view to_string(BackendChoice b) { return b == BackendChoice::Remote ? "remote" : "lexicon"; }

std::string_view to_string(InputFormat f) {
    switch (f) {
        case InputFormat::Csv: return "csv";
        case InputFormat::Conversations: return "conversations";
        default: return "jsonl";
    }
}

BackendChoice backend_from(const std::string& s) {
    if (s == "lexicon") return BackendChoice::Lexicon;
    if (s == "remote") return BackendChoice::Remote;
    throw ConfigError("backend must be 'lexicon' or 'remote', got '" + s + "'");
}

InputFormat input_format_from(const std::string& s) {
    if (s == "jsonl") return InputFormat::Jsonl;
    if (s == "csv") return InputFormat::Csv;
    if (s == "conversations") return InputFormat::Conversations;
    throw ConfigError("input format must be jsonl, csv or conversations, got '" + s + "'");
}

Format output_format_from(const std::string& s) {
    const auto f = parse_format(s);
    if (!f) throw ConfigError("output format must be jsonl or csv, got '" + s + "'");
    return *f;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> known, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown config key '" + (where.empty() ? key : where + "." + key) + "'");
    }
}

double number_at(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    return v.get<double>();
}

long long integer_at(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
    return v.get<long long>();
}

std::string string_at(const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
    return v.get<std::string>();
}

bool bool_at(const json& v, const std::string& key) {
    if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be true or false");
    return v.get<bool>();
}

int bounded_int(long long v, long long lo, const std::string& key) {
    if (v < lo || v > 1'000'000'000) throw ConfigError("config key '" + key + "' out of range");
    return static_cast<int>(v);
}

std::array<double, 3> parse_weight_list(const std::string& text) {
    std::array<double, 3> w{};
    std::stringstream ss(text);
    std::string item;
    std::size_t k = 0;
    while (std::getline(ss, item, ',')) {
        if (k == 3) throw ConfigError("--weights takes exactly three values");
        try {
            std::size_t used = 0;
            w[k] = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("--weights: '" + item + "' is not a number");
        }
        ++k;
    }
    if (k != 3) throw ConfigError("--weights takes exactly three values");
    return w;
}

}  // namespace

EmotionScale parse_scale(const json& doc) {
    if (!doc.is_object()) throw ConfigError("emotion scale must be a JSON object of label -> value");
    std::array<double, 7> values{};
    std::array<bool, 7> seen{};
    for (const auto& [key, v] : doc.items()) {
        const auto label = parse_emotion_label(key);
        if (!label) throw ConfigError("unknown emotion label '" + key + "' in scale");
        values[static_cast<std::size_t>(*label)] = number_at(v, "scale." + key);
        seen[static_cast<std::size_t>(*label)] = true;
    }
    for (EmotionLabel l : kEmotionLabels)
        if (!seen[static_cast<std::size_t>(l)])
            throw ConfigError("emotion scale lacks label '" + std::string(empeval::to_string(l)) + "'");
    return EmotionScale(values);
}

RunConfig apply_config_document(RunConfig cfg, const json& doc, const std::filesystem::path& relative_to) {
    reject_unknown_keys(doc,
                        {"score_config", "backend", "lexicon_path", "endpoint", "input_format", "output_format",
                         "parallelism"},
                        "");
    if (doc.contains("score_config")) {
        const auto& sc = doc["score_config"];
        reject_unknown_keys(sc, {"weights", "base", "scale", "report_flags"}, "score_config");
        if (sc.contains("weights")) {
            const auto& w = sc["weights"];
            if (!w.is_array() || w.size() != 3) throw ConfigError("score_config.weights must hold three numbers");
            for (std::size_t i = 0; i < 3; ++i) cfg.score_config.weights[i] = number_at(w[i], "score_config.weights");
        }
        if (sc.contains("base")) cfg.score_config.base = number_at(sc["base"], "score_config.base");
        if (sc.contains("scale")) cfg.score_config.scale = parse_scale(sc["scale"]);
        if (sc.contains("report_flags")) {
            const auto& rf = sc["report_flags"];
            reject_unknown_keys(rf, {"matched_cues", "emotion_evidence"}, "score_config.report_flags");
            if (rf.contains("matched_cues"))
                cfg.score_config.report_flags.matched_cues = bool_at(rf["matched_cues"], "matched_cues");
            if (rf.contains("emotion_evidence"))
                cfg.score_config.report_flags.emotion_evidence = bool_at(rf["emotion_evidence"], "emotion_evidence");
        }
    }
    if (doc.contains("backend")) cfg.backend = backend_from(string_at(doc["backend"], "backend"));
    if (doc.contains("lexicon_path")) {
        std::filesystem::path p = string_at(doc["lexicon_path"], "lexicon_path");
        cfg.lexicon_path = p.is_relative() && !relative_to.empty() ? relative_to / p : p;
    }
    if (doc.contains("endpoint")) {
        const auto& ep = doc["endpoint"];
        reject_unknown_keys(ep, {"url", "timeout_ms", "retries", "max_in_flight"}, "endpoint");
        if (ep.contains("url")) cfg.endpoint.url = string_at(ep["url"], "endpoint.url");
        if (ep.contains("timeout_ms"))
            cfg.endpoint.timeout_ms = bounded_int(integer_at(ep["timeout_ms"], "endpoint.timeout_ms"), 1, "timeout_ms");
        if (ep.contains("retries"))
            cfg.endpoint.retries = bounded_int(integer_at(ep["retries"], "endpoint.retries"), 0, "retries");
        if (ep.contains("max_in_flight"))
            cfg.endpoint.max_in_flight =
                bounded_int(integer_at(ep["max_in_flight"], "endpoint.max_in_flight"), 1, "max_in_flight");
    }
    if (doc.contains("input_format"))
        cfg.input_format = input_format_from(string_at(doc["input_format"], "input_format"));
    if (doc.contains("output_format"))
        cfg.output_format = output_format_from(string_at(doc["output_format"], "output_format"));
    if (doc.contains("parallelism"))
        cfg.parallelism = static_cast<std::size_t>(bounded_int(integer_at(doc["parallelism"], "parallelism"), 1,
                                                               "parallelism"));
    return cfg;
}

RunConfig load_config(const std::optional<std::filesystem::path>& file, const ConfigOverrides& flags) {
    RunConfig cfg;
    if (file) cfg = apply_config_document(std::move(cfg), read_json_file(*file), file->parent_path());

    if (flags.backend) cfg.backend = backend_from(*flags.backend);
    if (flags.lexicon_path) cfg.lexicon_path = *flags.lexicon_path;
    if (flags.endpoint_url) cfg.endpoint.url = *flags.endpoint_url;
    if (flags.timeout_ms) cfg.endpoint.timeout_ms = bounded_int(*flags.timeout_ms, 1, "--timeout-ms");
    if (flags.retries) cfg.endpoint.retries = bounded_int(*flags.retries, 0, "--retries");
    if (flags.max_in_flight) cfg.endpoint.max_in_flight = bounded_int(*flags.max_in_flight, 1, "--max-in-flight");
    if (flags.weights) cfg.score_config.weights = parse_weight_list(*flags.weights);
    if (flags.base) cfg.score_config.base = *flags.base;
    if (flags.scale_path) cfg.score_config.scale = parse_scale(read_json_file(*flags.scale_path));
    if (flags.output_format) cfg.output_format = output_format_from(*flags.output_format);
    if (flags.input_format) cfg.input_format = input_format_from(*flags.input_format);
    if (flags.parallelism)
        cfg.parallelism = static_cast<std::size_t>(bounded_int(*flags.parallelism, 1, "--parallelism"));
    cfg.verbose = flags.verbose;

    cfg.score_config.validate();
    if (cfg.backend == BackendChoice::Remote) {
        if (cfg.endpoint.url.empty()) throw ConfigError("the remote backend needs an endpoint url");
        cfg.endpoint.validate();
    }
    return cfg;
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json scale;
    for (EmotionLabel l : kEmotionLabels) scale[std::string(empeval::to_string(l))] = c.score_config.scale.value_of(l);
    nlohmann::ordered_json out{
        {"score_config",
         {{"weights", c.score_config.weights},
          {"base", c.score_config.base},
          {"scale", scale},
          {"report_flags",
           {{"matched_cues", c.score_config.report_flags.matched_cues},
            {"emotion_evidence", c.score_config.report_flags.emotion_evidence}}}}},
        {"backend", to_string(c.backend)},
    };
    if (c.lexicon_path) out["lexicon_path"] = c.lexicon_path->string();
    out["endpoint"] = {{"url", c.endpoint.url},
                       {"timeout_ms", c.endpoint.timeout_ms},
                       {"retries", c.endpoint.retries},
                       {"max_in_flight", c.endpoint.max_in_flight}};
    if (c.input_format) out["input_format"] = to_string(*c.input_format);
    out["output_format"] = empeval::to_string(c.output_format);
    out["parallelism"] = c.parallelism;
    return out;
}

namespace {

std::unique_ptr<ClassifierBackend> make_backend(const RunConfig& cfg) {
    Lexicon lexicon = cfg.lexicon_path ? Lexicon::load(*cfg.lexicon_path) : Lexicon::shipped();
    if (cfg.backend == BackendChoice::Remote) return std::make_unique<RemoteBackend>(cfg.endpoint, std::move(lexicon));
    return std::make_unique<LexiconBackend>(std::move(lexicon));
}

Corpus load_input(const std::filesystem::path& path, const RunConfig& cfg) {
    const InputFormat f = cfg.input_format.value_or(format_for_path(path) == Format::Csv ? InputFormat::Csv
                                                                                         : InputFormat::Jsonl);
    if (f != InputFormat::Conversations) return read_corpus(path, f == InputFormat::Csv ? Format::Csv : Format::Jsonl);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_jsonl_conversations(in, path.string());
}

std::string assessment_json(const EmpathyAssessment& a, const AssessmentEvidence& ev, const ReportFlags& flags) {
    std::ostringstream line;
    write_report(std::span(&a, 1), Format::Jsonl, line);
    std::string s = line.str();
    // Strip the closing "}\n" and append diagnostics.
    s.resize(s.size() - 2);
    if (flags.matched_cues) {
        auto cues = nlohmann::ordered_json::array();
        for (const auto& j : ev.categories)
            for (const auto& c : j.matched_cues)
                cues.push_back(nlohmann::ordered_json{{"category", empeval::to_string(j.category)},
                                {"act", empeval::to_string(c.act)},
                                {"phrase", c.phrase}});
        s += ",\"matched_cues\":" + cues.dump();
    }
    if (flags.emotion_evidence) s += ",\"emotion_evidence\":" + json(ev.emotion.evidence).dump();
    s += "}";
    return s;
}

struct Options {
    std::optional<std::string> config_path;
    ConfigOverrides flags;
    // score
    std::optional<std::string> seeker, response;
    std::string pair_id = "cli";
    // batch / correlate / compare
    std::vector<std::string> inputs;
    std::optional<std::string> out_path;
    bool json_only = false;
};

RunConfig resolve(const Options& o, std::ostream& err) {
    std::optional<std::filesystem::path> file;
    if (o.config_path)
        file = *o.config_path;
    else if (const char* env = std::getenv("EMP_EVAL_CONFIG"); env && *env)
        file = env;
    RunConfig cfg = load_config(file, o.flags);
    if (cfg.verbose) err << to_json(cfg).dump(2) << '\n';
    return cfg;
}

int cmd_score(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
    DialoguePair pair;
    if (o.seeker || o.response) {
        if (!o.seeker || !o.response) {
            err << "score: both --seeker and --response are required (or one JSONL record on stdin)\n";
            return kExitUsage;
        }
        pair = DialoguePair{o.pair_id, *o.seeker, *o.response, std::nullopt, std::nullopt};
        pair.validate();
    } else {
        const Corpus c = parse_jsonl_pairs(in, "<stdin>");
        if (c.pairs.size() != 1) {
            err << "score: expected exactly one JSONL record on stdin, got " << c.pairs.size() << '\n';
            return kExitUsage;
        }
        pair = c.pairs.front();
    }
    const RunConfig cfg = resolve(o, err);
    const auto backend = make_backend(cfg);
    AssessmentEvidence ev;
    EmpathyAssessment a;
    try {
        a = assess_pair(pair, *backend, cfg.score_config, &ev);
    } catch (const BackendError& e) {
        throw PairAssessmentError(pair.id, e.what(), std::current_exception());
    }
    out << assessment_json(a, ev, cfg.score_config.report_flags) << '\n';
    return kExitOk;
}

std::vector<EmpathyAssessment> assess(const Corpus& corpus, const RunConfig& cfg) {
    const auto backend = make_backend(cfg);
    return assess_corpus(corpus.pairs, *backend, cfg.score_config, cfg.parallelism);
}

int cmd_batch(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = resolve(o, err);
    const std::filesystem::path target = *o.out_path;
    const Corpus corpus = load_input(o.inputs.front(), cfg);
    const auto assessments = assess(corpus, cfg);

    std::filesystem::path partial = target;
    partial += ".partial";
    try {
        {
            std::ofstream file(partial, std::ios::binary | std::ios::trunc);
            if (!file) throw IoError("cannot write " + partial.string());
            write_report(assessments, cfg.output_format, file);
        }
        std::filesystem::rename(partial, target);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(partial, ec);
        throw;
    }

    out << "pairs=" << assessments.size();
    if (!assessments.empty()) out << " avg_score=" << format_fixed6(aggregate_model_score(assessments));
    out << '\n';
    return kExitOk;
}

int cmd_correlate(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = resolve(o, err);
    const Corpus corpus = load_input(o.inputs.front(), cfg);
    const auto assessments = assess(corpus, cfg);
    const auto report = correlate_with_humans(corpus, assessments);
    out << to_json(report).dump() << '\n';
    if (!o.json_only) out << format_table(report);
    return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = resolve(o, err);
    std::vector<EmpathyAssessment> all;
    for (const auto& path : o.inputs) {
        const Corpus corpus = load_input(path, cfg);
        for (const auto& p : corpus.pairs)
            if (!p.model_tag) throw SchemaError("pair '" + p.id + "' in " + path + " has no model_tag", 0, "model_tag");
        auto part = assess(corpus, cfg);
        all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    const auto table = compare_models(all);
    if (o.json_only)
        out << to_json(table).dump() << '\n';
    else
        out << format_table(table);
    return kExitOk;
}

void add_shared_flags(CLI::App& app, Options& o) {
    auto& f = o.flags;
    app.add_option("--config", o.config_path, "JSON config file (default: $EMP_EVAL_CONFIG)");
    app.add_option("--backend", f.backend, "lexicon|remote");
    app.add_option("--lexicon", f.lexicon_path, "Lexicon JSON file (default: shipped lexicon)");
    app.add_option("--endpoint", f.endpoint_url, "Model server base URL for the remote backend");
    app.add_option("--timeout-ms", f.timeout_ms, "Remote request timeout");
    app.add_option("--retries", f.retries, "Remote retry count");
    app.add_option("--max-in-flight", f.max_in_flight, "Remote concurrent request bound");
    app.add_option("--weights", f.weights, "Category weights w1,w2,w3");
    app.add_option("--base", f.base, "Exponential base (> 1)");
    app.add_option("--scale", f.scale_path, "JSON emotion label -> penalty map");
    app.add_option("--format", f.output_format, "Report format jsonl|csv");
    app.add_option("--input-format", f.input_format, "jsonl|csv|conversations (default: by extension)");
    app.add_option("--out", o.out_path, "Report output path");
    app.add_option("--parallelism", f.parallelism, "Concurrent pair assessments");
    app.add_flag("--verbose", f.verbose, "Echo the resolved config to stderr");
}

int exit_code_for(std::exception_ptr ep, std::ostream& err) {
    try {
        std::rethrow_exception(ep);
    } catch (const PairAssessmentError& e) {
        err << "error: " << e.what() << '\n';
        return kExitBackend;
    } catch (const BackendError& e) {
        err << "error: " << e.what() << '\n';
        return kExitBackend;
    } catch (const DegenerateInputError& e) {
        err << "error: degenerate evaluation: " << e.what() << " (excluded=" << e.excluded() << ")\n";
        return kExitDegenerate;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (...) {
        err << "error: unknown failure\n";
        return kExitUsage;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Automatic empathy scoring for dialogue responses", "emp-eval"};
    app.require_subcommand(1);
    add_shared_flags(app, o);

    auto* score = app.add_subcommand("score", "Score one pair from flags or one JSONL record on stdin");
    score->fallthrough();
    score->add_option("--seeker", o.seeker, "Seeker post");
    score->add_option("--response", o.response, "Response post");
    score->add_option("--id", o.pair_id, "Pair id used in the output");

    auto* batch = app.add_subcommand("batch", "Score a corpus and write a report");
    batch->fallthrough();
    batch->add_option("input", o.inputs, "Input corpus")->required()->expected(1);

    auto* correlate = app.add_subcommand("correlate", "Pearson correlation against human scores");
    correlate->fallthrough();
    correlate->add_option("input", o.inputs, "Input corpus with human_score fields")->required()->expected(1);
    correlate->add_flag("--json", o.json_only, "Print only the JSON line");

    auto* compare = app.add_subcommand("compare", "Average score per model_tag");
    compare->fallthrough();
    compare->add_option("inputs", o.inputs, "Input corpora")->required();
    compare->add_flag("--json", o.json_only, "Print JSON instead of a table");

    std::vector<std::string> argv_storage{"emp-eval"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    }

    try {
        if (*score) return cmd_score(o, in, out, err);
        if (*batch) {
            if (!o.out_path) {
                err << "batch: --out is required\n";
                return kExitUsage;
            }
            return cmd_batch(o, out, err);
        }
        if (*correlate) return cmd_correlate(o, out, err);
        if (*compare) return cmd_compare(o, out, err);
    } catch (...) {
        return exit_code_for(std::current_exception(), err);
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace empeval::cli
