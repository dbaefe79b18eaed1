#include "empeval/lexicon.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "empeval/errors.hpp"

namespace empeval {

extern const char* const kShippedLexiconJson;

namespace {

std::vector<std::string> pattern_words(std::string_view part, std::string_view source) {
    std::vector<std::string> words;
    for (auto& tok : tokenize(part)) {
        if (tok.kind == Token::Kind::Boundary)
            throw SchemaError("pattern '" + std::string(source) + "' contains sentence punctuation", 0, "pattern");
        words.push_back(std::move(tok.text));
    }
    return words;
}

}  // namespace

Pattern::Pattern(std::string_view source) : source_(source) {
    const auto star = source.find('*');
    if (star == std::string_view::npos) {
        words_ = pattern_words(source, source);
    } else {
        if (source.find('*', star + 1) != std::string_view::npos)
            throw SchemaError("pattern '" + source_ + "' has more than one wildcard", 0, "pattern");
        auto left = pattern_words(source.substr(0, star), source);
        auto right = pattern_words(source.substr(star + 1), source);
        if (left.empty() || right.empty())
            throw SchemaError("pattern '" + source_ + "' has a wildcard at its edge", 0, "pattern");
        wildcard_ = left.size();
        words_ = std::move(left);
        words_.emplace_back("*");
        words_.insert(words_.end(), right.begin(), right.end());
    }
    if (words_.empty()) throw SchemaError("empty pattern", 0, "pattern");
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (i) normalized_ += ' ';
        normalized_ += words_[i];
    }
}

bool Pattern::match_at(const std::vector<Token>& tokens, std::size_t start, std::size_t& end_token) const {
    std::size_t t = start;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        if (w == wildcard_) {
            // Shortest slot fill that lets the rest of the phrase match.
            const std::size_t rest = words_.size() - w - 1;
            for (std::size_t fill = 1; fill <= kMaxWildcardWords; ++fill) {
                const std::size_t after = t + fill;
                if (after + rest > tokens.size()) return false;
                if (tokens[after - 1].kind != Token::Kind::Word) return false;
                bool ok = true;
                for (std::size_t r = 0; r < rest; ++r) {
                    const Token& tok = tokens[after + r];
                    if (tok.kind != Token::Kind::Word || tok.text != words_[w + 1 + r]) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    end_token = after + rest;
                    return true;
                }
            }
            return false;
        }
        if (t >= tokens.size() || tokens[t].kind != Token::Kind::Word || tokens[t].text != words_[w]) return false;
        ++t;
    }
    end_token = t;
    return true;
}

std::vector<Pattern::Match> Pattern::find_all(const std::vector<Token>& tokens) const {
    std::vector<Match> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::size_t end = 0;
        if (tokens[i].kind == Token::Kind::Word && match_at(tokens, i, end))
            out.push_back({tokens[i].begin, tokens[end - 1].end});
    }
    return out;
}

namespace {

std::vector<Pattern> read_pattern_list(const nlohmann::json& list, const std::string& owner) {
    if (!list.is_array()) throw SchemaError("'" + owner + "' must be an array of strings", 0, owner);
    std::vector<Pattern> out;
    std::set<std::string> seen;
    for (const auto& item : list) {
        if (!item.is_string()) throw SchemaError("'" + owner + "' must be an array of strings", 0, owner);
        Pattern p(item.get<std::string>());
        if (!seen.insert(p.normalized()).second)
            throw SchemaError("pattern '" + p.source() + "' listed twice under '" + owner + "'", 0, owner);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

Lexicon Lexicon::from_json(std::string_view document) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("lexicon: ") + e.what(), 0);
    }
    if (!doc.is_object()) throw SchemaError("lexicon must be a JSON object", 0, "");
    for (const auto& [key, _] : doc.items())
        if (key != "acts" && key != "emotions") throw SchemaError("lexicon: unknown key '" + key + "'", 0, key);
    if (!doc.contains("acts") || !doc["acts"].is_object())
        throw SchemaError("lexicon: missing object 'acts'", 0, "acts");

    Lexicon lex;
    for (const auto& [name, list] : doc["acts"].items()) {
        const auto act = parse_dialogue_act(name);
        if (!act) throw SchemaError("lexicon: unknown dialogue act '" + name + "'", 0, name);
        lex.acts_[static_cast<std::size_t>(*act)] = read_pattern_list(list, name);
    }
    for (DialogueAct act : kDialogueActs) {
        if (!is_non_empathetic(act) && lex.act_patterns(act).size() < 3)
            throw SchemaError("lexicon: act '" + std::string(to_string(act)) + "' needs at least 3 patterns", 0,
                              std::string(to_string(act)));
    }

    if (doc.contains("emotions")) {
        if (!doc["emotions"].is_object()) throw SchemaError("lexicon: 'emotions' must be an object", 0, "emotions");
        for (const auto& [name, list] : doc["emotions"].items()) {
            const auto label = parse_emotion_label(name);
            if (!label || *label == EmotionLabel::Neutral)
                throw SchemaError("lexicon: unknown emotion '" + name + "'", 0, name);
            lex.emotions_[static_cast<std::size_t>(*label)] = read_pattern_list(list, name);
        }
    }
    return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open lexicon file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

const Lexicon& Lexicon::shipped() {
    static const Lexicon lex = from_json(kShippedLexiconJson);
    return lex;
}

}  // namespace empeval
