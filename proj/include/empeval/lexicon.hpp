#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "empeval/text.hpp"
#include "empeval/types.hpp"

namespace empeval {

// A case-insensitive phrase, optionally with one interior "*" slot that
// matches one to three words. Matching is word-aligned and never crosses a
// sentence boundary.
class Pattern {
public:
    static constexpr std::size_t kMaxWildcardWords = 3;

    // Throws SchemaError for an empty phrase, more than one wildcard, a
    // wildcard at either end, or sentence punctuation inside the phrase.
    explicit Pattern(std::string_view source);

    const std::string& source() const noexcept { return source_; }
    // Lowercased words joined by single spaces; the slot is written "*".
    const std::string& normalized() const noexcept { return normalized_; }

    struct Match {
        std::size_t begin;  // byte range in the scanned text
        std::size_t end;
    };
    std::vector<Match> find_all(const std::vector<Token>& tokens) const;

private:
    bool match_at(const std::vector<Token>& tokens, std::size_t start, std::size_t& end_token) const;

    std::string source_;
    std::string normalized_;
    std::vector<std::string> words_;
    std::size_t wildcard_ = std::string::npos;  // index into words_ of the slot
};

class Lexicon {
public:
    // Document shape: {"acts": {"<act>": [patterns]}, "emotions": {"<label>": [patterns]}}.
    // Every empathetic act needs at least three patterns; a phrase may not
    // appear twice under one act. Throws ParseError or SchemaError.
    static Lexicon from_json(std::string_view document);
    static Lexicon load(const std::filesystem::path& path);
    // The lexicon compiled into the library from data/lexicon.json.
    static const Lexicon& shipped();

    const std::vector<Pattern>& act_patterns(DialogueAct act) const noexcept {
        return acts_[static_cast<std::size_t>(act)];
    }
    const std::vector<Pattern>& emotion_patterns(EmotionLabel label) const noexcept {
        return emotions_[static_cast<std::size_t>(label)];
    }

private:
    Lexicon() = default;

    std::array<std::vector<Pattern>, kDialogueActs.size()> acts_;
    std::array<std::vector<Pattern>, kEmotionLabels.size()> emotions_;
};

}  // namespace empeval
