#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "empeval/types.hpp"

namespace empeval {

enum class Format { Jsonl, Csv };

std::string_view to_string(Format f) noexcept;
std::optional<Format> parse_format(std::string_view name) noexcept;
// ".csv" -> Csv, anything else -> Jsonl.
Format format_for_path(const std::filesystem::path& path) noexcept;

struct Corpus {
    std::vector<DialoguePair> pairs;  // ids unique, source order
    std::string source_name;
    std::string format_version = "1";
};

// One JSON object per non-blank line:
//   {"id", "seeker", "response", "human_score"?, "model_tag"?}
// Errors name the 1-based line.
Corpus parse_jsonl_pairs(std::istream& in, std::string source_name = "<stream>");

// RFC 4180 CSV whose header names at least id, seeker and response;
// human_score and model_tag columns are optional. Errors name the 1-based row
// (the header is row 1).
Corpus parse_csv_pairs(std::istream& in, std::string source_name = "<stream>");

Corpus read_corpus(const std::filesystem::path& path, std::optional<Format> format = std::nullopt);

// Inverse of the two parsers.
void write_corpus(const Corpus& corpus, Format format, std::ostream& out);

enum class SpeakerRole { Seeker, Responder };

struct ConversationTurn {
    SpeakerRole role;
    std::string text;
};

struct ConversationRecord {
    std::string conv_id;
    std::vector<ConversationTurn> turns;  // at least two

    void validate() const;
};

// Merges runs of same-role turns (joined by one space) and emits one pair per
// seeker -> responder adjacency, with id "<conv_id>#<k>" for k = 0, 1, ...
std::vector<DialoguePair> flatten_conversation(const ConversationRecord& conv);

// One {"conv_id": ..., "turns": [{"role": "seeker"|"responder", "text": ...}]}
// per line, flattened into a pair corpus.
Corpus parse_jsonl_conversations(std::istream& in, std::string source_name = "<stream>");

// Report columns: pair_id, c1, c2, c3, emotion, emotion_value,
// non_empathetic_acts, score. Scores carry exactly six decimals; CSV joins
// acts with '|' and always writes the header.
void write_report(std::span<const EmpathyAssessment> assessments, Format format, std::ostream& out);

std::vector<EmpathyAssessment> parse_report(std::istream& in, Format format);

// "%.6f" without locale dependence.
std::string format_fixed6(double value);

}  // namespace empeval
