#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace empeval {

std::string_view trim(std::string_view s) noexcept;

// Offset of the first byte of an invalid UTF-8 sequence, or npos.
std::size_t find_invalid_utf8(std::string_view s) noexcept;
inline bool is_valid_utf8(std::string_view s) noexcept { return find_invalid_utf8(s) == std::string_view::npos; }

struct Token {
    enum class Kind { Word, Boundary };
    Kind kind;
    std::string text;    // lowercased; curly apostrophes folded to '\''
    std::size_t begin;   // byte range in the source text
    std::size_t end;
};

// Splits text into lowercased word tokens and sentence boundary tokens
// (. ! ? ; : and newlines). Other punctuation and whitespace separate words
// without producing a token. Apostrophes inside a word stay part of it.
std::vector<Token> tokenize(std::string_view text);

}  // namespace empeval
