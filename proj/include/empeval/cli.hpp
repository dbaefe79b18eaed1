#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "empeval/ingest.hpp"
#include "empeval/remote.hpp"
#include "empeval/scoring.hpp"

namespace empeval::cli {

enum class BackendChoice { Lexicon, Remote };
enum class InputFormat { Jsonl, Csv, Conversations };

struct RunConfig {
    ScoreConfig score_config = default_config();
    BackendChoice backend = BackendChoice::Lexicon;
    std::optional<std::filesystem::path> lexicon_path;  // shipped lexicon when empty
    EndpointConfig endpoint;
    std::optional<InputFormat> input_format;  // by file extension when empty
    Format output_format = Format::Jsonl;
    std::size_t parallelism = 1;
    bool verbose = false;
};

// Values given on the command line. Each one, when set, beats the file.
struct ConfigOverrides {
    std::optional<std::string> backend;
    std::optional<std::filesystem::path> lexicon_path;
    std::optional<std::string> endpoint_url;
    std::optional<int> timeout_ms;
    std::optional<int> retries;
    std::optional<int> max_in_flight;
    std::optional<std::string> weights;  // "w1,w2,w3"
    std::optional<double> base;
    std::optional<std::filesystem::path> scale_path;
    std::optional<std::string> output_format;
    std::optional<std::string> input_format;
    std::optional<long long> parallelism;
    bool verbose = false;
};

// Defaults, then the JSON config file (if any), then the overrides. Unknown
// keys and out-of-range values throw ConfigError.
RunConfig load_config(const std::optional<std::filesystem::path>& file, const ConfigOverrides& flags);

// Applies one config document on top of `base`; relative lexicon paths are
// resolved against `relative_to`.
RunConfig apply_config_document(RunConfig base, const nlohmann::json& doc,
                                 const std::filesystem::path& relative_to = {});

EmotionScale parse_scale(const nlohmann::json& doc);

nlohmann::ordered_json to_json(const RunConfig& config);

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitBackend = 3,
    kExitDegenerate = 4,
};

// Entry point behind the emp-eval binary. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace empeval::cli
