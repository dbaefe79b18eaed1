#include "empeval/text.hpp"

#include <cstdint>

namespace empeval {

std::string_view trim(std::string_view s) noexcept {
    constexpr std::string_view ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::size_t find_invalid_utf8(std::string_view s) noexcept {
    const auto* p = reinterpret_cast<const unsigned char*>(s.data());
    const std::size_t n = s.size();
    std::size_t i = 0;
    while (i < n) {
        const unsigned char c = p[i];
        if (c < 0x80) {
            ++i;
            continue;
        }
        std::size_t len;
        std::uint32_t cp;
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return i;
        }
        if (i + len > n) return i;
        for (std::size_t k = 1; k < len; ++k) {
            if ((p[i + k] & 0xC0) != 0x80) return i;
            cp = (cp << 6) | (p[i + k] & 0x3F);
        }
        // Overlong forms, surrogates, out of range.
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
            (cp >= 0xD800 && cp <= 0xDFFF))
            return i;
        i += len;
    }
    return std::string_view::npos;
}

namespace {

bool is_word_byte(unsigned char c) noexcept {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

bool is_boundary_byte(unsigned char c) noexcept {
    return c == '.' || c == '!' || c == '?' || c == ';' || c == ':' || c == '\n';
}

// U+2019 RIGHT SINGLE QUOTATION MARK
bool is_curly_apostrophe(std::string_view s, std::size_t i) noexcept {
    return s.compare(i, 3, "\xE2\x80\x99") == 0;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (is_boundary_byte(c)) {
            if (out.empty() || out.back().kind != Token::Kind::Boundary)
                out.push_back({Token::Kind::Boundary, {}, i, i + 1});
            ++i;
            continue;
        }
        if (!is_word_byte(c) || is_curly_apostrophe(text, i)) {
            ++i;
            continue;
        }
        Token tok{Token::Kind::Word, {}, i, i};
        while (i < n) {
            const auto d = static_cast<unsigned char>(text[i]);
            const bool curly = is_curly_apostrophe(text, i);
            if (d == '\'' || curly) {
                const std::size_t next = i + (curly ? 3 : 1);
                if (next < n && is_word_byte(static_cast<unsigned char>(text[next])) &&
                    !is_curly_apostrophe(text, next)) {
                    tok.text.push_back('\'');
                    i = next;
                    continue;
                }
                break;
            }
            if (!is_word_byte(d) || curly) break;
            tok.text.push_back(d < 0x80 ? static_cast<char>(d >= 'A' && d <= 'Z' ? d - 'A' + 'a' : d)
                                        : static_cast<char>(d));
            ++i;
        }
        tok.end = i;
        out.push_back(std::move(tok));
    }
    return out;
}

}  // namespace empeval
