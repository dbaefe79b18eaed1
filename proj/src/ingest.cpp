#include "empeval/ingest.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "empeval/errors.hpp"
#include "empeval/text.hpp"

namespace empeval {

using nlohmann::json;

std::string_view to_string(Format f) noexcept { return f == Format::Csv ? "csv" : "jsonl"; }

std::optional<Format> parse_format(std::string_view name) noexcept {
    if (name == "jsonl") return Format::Jsonl;
    if (name == "csv") return Format::Csv;
    return std::nullopt;
}

Format format_for_path(const std::filesystem::path& path) noexcept {
    return path.extension() == ".csv" ? Format::Csv : Format::Jsonl;
}

std::string format_fixed6(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 6);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

namespace {

std::string shortest(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ec == std::errc{} ? ptr : buf);
}

std::string slurp(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Splits into lines, dropping a trailing '\r' from each.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = nl + 1;
    }
    return lines;
}

void require_utf8(std::string_view text, std::size_t line) {
    if (const auto bad = find_invalid_utf8(text); bad != std::string_view::npos)
        throw ParseError("invalid UTF-8 at byte " + std::to_string(bad), line);
}

json parse_json_line(std::string_view line, std::size_t lineno) {
    require_utf8(line, lineno);
    try {
        return json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), lineno);
    }
}

std::string required_string(const json& obj, const char* field, std::size_t lineno) {
    if (!obj.contains(field)) throw SchemaError(std::string("missing field '") + field + "'", lineno, field);
    if (!obj[field].is_string()) throw SchemaError(std::string("field '") + field + "' must be a string", lineno, field);
    return obj[field].get<std::string>();
}

// Applies DialoguePair::validate but reports the source line.
void validate_at(const DialoguePair& p, std::size_t lineno) {
    try {
        p.validate();
    } catch (const SchemaError& e) {
        throw SchemaError(e.what(), lineno, e.field());
    } catch (const RangeError& e) {
        throw RangeError(e.what(), lineno);
    }
}

class CorpusBuilder {
public:
    explicit CorpusBuilder(std::string source) { corpus_.source_name = std::move(source); }

    void add(DialoguePair p, std::size_t lineno) {
        validate_at(p, lineno);
        if (!ids_.insert(p.id).second) throw DuplicateError("duplicate pair id '" + p.id + "'", lineno);
        corpus_.pairs.push_back(std::move(p));
    }

    Corpus finish() && { return std::move(corpus_); }

private:
    Corpus corpus_;
    std::unordered_set<std::string> ids_;
};

struct CsvRecord {
    std::size_t row;
    std::vector<std::string> fields;
};

std::vector<CsvRecord> read_csv(std::string_view text) {
    std::vector<CsvRecord> records;
    std::size_t i = 0;
    std::size_t row = 0;
    const std::size_t n = text.size();
    while (i < n) {
        ++row;
        CsvRecord rec{row, {}};
        std::string field;
        bool end_of_record = false;
        while (!end_of_record) {
            field.clear();
            if (i < n && text[i] == '"') {
                ++i;
                for (;;) {
                    if (i >= n) throw ParseError("unterminated quoted field", row);
                    if (text[i] == '"') {
                        if (i + 1 < n && text[i + 1] == '"') {
                            field.push_back('"');
                            i += 2;
                            continue;
                        }
                        ++i;
                        break;
                    }
                    field.push_back(text[i++]);
                }
                if (i < n && text[i] != ',' && text[i] != '\n' && !(text[i] == '\r' && i + 1 < n && text[i + 1] == '\n') &&
                    text[i] != '\r')
                    throw ParseError("unexpected character after closing quote", row);
            } else {
                while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') field.push_back(text[i++]);
                if (i < n && text[i] == '\r' && !(i + 1 < n && text[i + 1] == '\n'))
                    throw ParseError("bare carriage return in unquoted field", row);
            }
            rec.fields.push_back(field);
            if (i >= n) {
                end_of_record = true;
            } else if (text[i] == ',') {
                ++i;
                if (i >= n) rec.fields.emplace_back();
            } else {
                if (text[i] == '\r') ++i;
                if (i < n && text[i] == '\n') ++i;
                end_of_record = true;
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

bool blank_record(const CsvRecord& r) { return r.fields.size() == 1 && r.fields[0].empty(); }

bool needs_quotes(std::string_view s) {
    if (s.empty()) return false;
    return s.find_first_of(",\"\r\n") != std::string_view::npos || s.front() == ' ' || s.back() == ' ';
}

std::string csv_field(std::string_view s) {
    if (!needs_quotes(s)) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

Corpus parse_jsonl_pairs(std::istream& in, std::string source_name) {
    const std::string text = slurp(in);
    CorpusBuilder builder(std::move(source_name));
    const auto lines = split_lines(text);
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const std::size_t lineno = k + 1;
        if (trim(lines[k]).empty()) continue;
        const json obj = parse_json_line(lines[k], lineno);
        if (!obj.is_object()) throw ParseError("line is not a JSON object", lineno);

        DialoguePair p;
        p.id = required_string(obj, "id", lineno);
        p.seeker_text = required_string(obj, "seeker", lineno);
        p.response_text = required_string(obj, "response", lineno);
        if (obj.contains("human_score") && !obj["human_score"].is_null()) {
            if (!obj["human_score"].is_number())
                throw SchemaError("field 'human_score' must be a number", lineno, "human_score");
            p.human_score = obj["human_score"].get<double>();
        }
        if (obj.contains("model_tag") && !obj["model_tag"].is_null()) {
            if (!obj["model_tag"].is_string())
                throw SchemaError("field 'model_tag' must be a string", lineno, "model_tag");
            p.model_tag = obj["model_tag"].get<std::string>();
        }
        builder.add(std::move(p), lineno);
    }
    return std::move(builder).finish();
}

Corpus parse_csv_pairs(std::istream& in, std::string source_name) {
    const std::string text = slurp(in);
    require_utf8(text, 0);
    const auto records = read_csv(text);
    CorpusBuilder builder(std::move(source_name));
    if (records.empty()) return std::move(builder).finish();

    const auto& header = records.front().fields;
    auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return c;
        return std::nullopt;
    };
    const auto id_col = column("id");
    const auto seeker_col = column("seeker");
    const auto response_col = column("response");
    const auto score_col = column("human_score");
    const auto tag_col = column("model_tag");
    for (auto [col, name] : {std::pair{id_col, "id"}, {seeker_col, "seeker"}, {response_col, "response"}})
        if (!col) throw SchemaError(std::string("header lacks column '") + name + "'", 1, name);

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (blank_record(rec)) continue;
        if (rec.fields.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(rec.fields.size()),
                             rec.row);
        DialoguePair p;
        p.id = rec.fields[*id_col];
        p.seeker_text = rec.fields[*seeker_col];
        p.response_text = rec.fields[*response_col];
        if (score_col && !rec.fields[*score_col].empty()) {
            const auto v = parse_double(trim(rec.fields[*score_col]));
            if (!v) throw SchemaError("human_score is not a number", rec.row, "human_score");
            p.human_score = *v;
        }
        if (tag_col && !rec.fields[*tag_col].empty()) p.model_tag = rec.fields[*tag_col];
        builder.add(std::move(p), rec.row);
    }
    return std::move(builder).finish();
}

Corpus read_corpus(const std::filesystem::path& path, std::optional<Format> format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    const Format f = format.value_or(format_for_path(path));
    return f == Format::Csv ? parse_csv_pairs(in, path.string()) : parse_jsonl_pairs(in, path.string());
}

void write_corpus(const Corpus& corpus, Format format, std::ostream& out) {
    if (format == Format::Jsonl) {
        for (const auto& p : corpus.pairs) {
            nlohmann::ordered_json obj{{"id", p.id}, {"seeker", p.seeker_text}, {"response", p.response_text}};
            if (p.human_score) obj["human_score"] = *p.human_score;
            if (p.model_tag) obj["model_tag"] = *p.model_tag;
            out << obj.dump() << '\n';
        }
    } else {
        out << "id,seeker,response,human_score,model_tag\r\n";
        for (const auto& p : corpus.pairs) {
            out << csv_field(p.id) << ',' << csv_field(p.seeker_text) << ',' << csv_field(p.response_text) << ','
                << (p.human_score ? shortest(*p.human_score) : std::string()) << ','
                << (p.model_tag ? csv_field(*p.model_tag) : std::string()) << "\r\n";
        }
    }
    if (!out) throw IoError("failed writing corpus");
}

void ConversationRecord::validate() const {
    if (conv_id.empty()) throw SchemaError("conversation id is empty", 0, "conv_id");
    if (turns.size() < 2) throw SchemaError("conversation '" + conv_id + "' has fewer than two turns", 0, "turns");
    for (const auto& t : turns)
        if (trim(t.text).empty()) throw SchemaError("conversation '" + conv_id + "' has an empty turn", 0, "turns");
}

std::vector<DialoguePair> flatten_conversation(const ConversationRecord& conv) {
    conv.validate();
    std::vector<ConversationTurn> merged;
    for (const auto& t : conv.turns) {
        if (!merged.empty() && merged.back().role == t.role) {
            merged.back().text += ' ';
            merged.back().text += t.text;
        } else {
            merged.push_back(t);
        }
    }
    std::vector<DialoguePair> pairs;
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        if (merged[i].role == SpeakerRole::Seeker && merged[i + 1].role == SpeakerRole::Responder) {
            pairs.push_back(DialoguePair{conv.conv_id + "#" + std::to_string(pairs.size()), merged[i].text,
                                         merged[i + 1].text, std::nullopt, std::nullopt});
        }
    }
    return pairs;
}

Corpus parse_jsonl_conversations(std::istream& in, std::string source_name) {
    const std::string text = slurp(in);
    CorpusBuilder builder(std::move(source_name));
    const auto lines = split_lines(text);
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const std::size_t lineno = k + 1;
        if (trim(lines[k]).empty()) continue;
        const json obj = parse_json_line(lines[k], lineno);
        if (!obj.is_object()) throw ParseError("line is not a JSON object", lineno);

        ConversationRecord conv;
        conv.conv_id = required_string(obj, "conv_id", lineno);
        if (!obj.contains("turns") || !obj["turns"].is_array())
            throw SchemaError("field 'turns' must be an array", lineno, "turns");
        for (const auto& t : obj["turns"]) {
            if (!t.is_object()) throw SchemaError("each turn must be an object", lineno, "turns");
            const auto role = required_string(t, "role", lineno);
            if (role != "seeker" && role != "responder")
                throw SchemaError("turn role must be 'seeker' or 'responder'", lineno, "role");
            conv.turns.push_back(
                {role == "seeker" ? SpeakerRole::Seeker : SpeakerRole::Responder, required_string(t, "text", lineno)});
        }
        try {
            conv.validate();
        } catch (const SchemaError& e) {
            throw SchemaError(e.what(), lineno, e.field());
        }
        for (auto& p : flatten_conversation(conv)) builder.add(std::move(p), lineno);
    }
    return std::move(builder).finish();
}

namespace {

constexpr std::string_view kReportHeader = "pair_id,c1,c2,c3,emotion,emotion_value,non_empathetic_acts,score";

std::string joined_acts(const std::vector<DialogueAct>& acts) {
    std::string out;
    for (std::size_t i = 0; i < acts.size(); ++i) {
        if (i) out += '|';
        out += to_string(acts[i]);
    }
    return out;
}

DialogueAct act_or_throw(std::string_view name, std::size_t lineno) {
    const auto act = parse_dialogue_act(name);
    if (!act || !is_non_empathetic(*act))
        throw SchemaError("'" + std::string(name) + "' is not a non-empathetic act", lineno, "non_empathetic_acts");
    return *act;
}

EmotionLabel label_or_throw(std::string_view name, std::size_t lineno) {
    const auto label = parse_emotion_label(name);
    if (!label) throw SchemaError("unknown emotion '" + std::string(name) + "'", lineno, "emotion");
    return *label;
}

int category_or_throw(std::optional<int> v, const char* field, std::size_t lineno) {
    if (!v || !is_category_value(*v)) throw RangeError(std::string(field) + " must be 0, 1 or 2", lineno);
    return *v;
}

}  // namespace

void write_report(std::span<const EmpathyAssessment> assessments, Format format, std::ostream& out) {
    if (format == Format::Jsonl) {
        for (const auto& a : assessments) {
            json acts = json::array();
            for (DialogueAct act : a.non_empathetic_acts) acts.push_back(to_string(act));
            out << "{\"pair_id\":" << json(a.pair_id).dump() << ",\"c1\":" << a.categories.c1()
                << ",\"c2\":" << a.categories.c2() << ",\"c3\":" << a.categories.c3() << ",\"emotion\":\""
                << to_string(a.emotion) << "\",\"emotion_value\":" << json(a.emotion_value).dump()
                << ",\"non_empathetic_acts\":" << acts.dump() << ",\"score\":" << format_fixed6(a.score) << "}\n";
        }
    } else {
        out << kReportHeader << "\r\n";
        for (const auto& a : assessments) {
            out << csv_field(a.pair_id) << ',' << a.categories.c1() << ',' << a.categories.c2() << ','
                << a.categories.c3() << ',' << to_string(a.emotion) << ',' << shortest(a.emotion_value) << ','
                << joined_acts(a.non_empathetic_acts) << ',' << format_fixed6(a.score) << "\r\n";
        }
    }
    out.flush();
    if (!out) throw IoError("failed writing report");
}

std::vector<EmpathyAssessment> parse_report(std::istream& in, Format format) {
    const std::string text = slurp(in);
    std::vector<EmpathyAssessment> out;
    if (format == Format::Jsonl) {
        const auto lines = split_lines(text);
        for (std::size_t k = 0; k < lines.size(); ++k) {
            const std::size_t lineno = k + 1;
            if (trim(lines[k]).empty()) continue;
            const json obj = parse_json_line(lines[k], lineno);
            if (!obj.is_object()) throw ParseError("line is not a JSON object", lineno);
            static constexpr std::array<const char*, 8> keys{
                "pair_id", "c1", "c2", "c3", "emotion", "emotion_value", "non_empathetic_acts", "score"};
            for (const char* key : keys)
                if (!obj.contains(key)) throw SchemaError(std::string("missing field '") + key + "'", lineno, key);
            if (obj.size() != keys.size()) throw SchemaError("unexpected report field", lineno, "");

            EmpathyAssessment a;
            a.pair_id = required_string(obj, "pair_id", lineno);
            auto int_field = [&](const char* f) -> std::optional<int> {
                return obj[f].is_number_integer() ? std::optional<int>(obj[f].get<int>()) : std::nullopt;
            };
            a.categories = CategoryScores(category_or_throw(int_field("c1"), "c1", lineno),
                                          category_or_throw(int_field("c2"), "c2", lineno),
                                          category_or_throw(int_field("c3"), "c3", lineno));
            a.emotion = label_or_throw(required_string(obj, "emotion", lineno), lineno);
            if (!obj["emotion_value"].is_number() || !obj["score"].is_number())
                throw SchemaError("emotion_value and score must be numbers", lineno, "score");
            a.emotion_value = obj["emotion_value"].get<double>();
            a.score = obj["score"].get<double>();
            if (!obj["non_empathetic_acts"].is_array())
                throw SchemaError("non_empathetic_acts must be an array", lineno, "non_empathetic_acts");
            for (const auto& act : obj["non_empathetic_acts"]) {
                if (!act.is_string())
                    throw SchemaError("non_empathetic_acts must hold strings", lineno, "non_empathetic_acts");
                a.non_empathetic_acts.push_back(act_or_throw(act.get<std::string>(), lineno));
            }
            out.push_back(std::move(a));
        }
        return out;
    }

    require_utf8(text, 0);
    const auto records = read_csv(text);
    if (records.empty()) throw SchemaError("report lacks a header row", 1, "");
    {
        std::string header;
        for (std::size_t c = 0; c < records[0].fields.size(); ++c) header += (c ? "," : "") + records[0].fields[c];
        if (header != kReportHeader) throw SchemaError("unexpected report header", 1, "");
    }
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (blank_record(rec)) continue;
        if (rec.fields.size() != 8) throw ParseError("expected 8 fields", rec.row);
        const auto& f = rec.fields;
        EmpathyAssessment a;
        a.pair_id = f[0];
        a.categories = CategoryScores(category_or_throw(parse_int(f[1]), "c1", rec.row),
                                      category_or_throw(parse_int(f[2]), "c2", rec.row),
                                      category_or_throw(parse_int(f[3]), "c3", rec.row));
        a.emotion = label_or_throw(f[4], rec.row);
        const auto ev = parse_double(f[5]);
        const auto sc = parse_double(f[7]);
        if (!ev || !sc) throw SchemaError("emotion_value and score must be numbers", rec.row, "score");
        a.emotion_value = *ev;
        a.score = *sc;
        std::string_view acts(f[6]);
        while (!acts.empty()) {
            const auto bar = acts.find('|');
            a.non_empathetic_acts.push_back(act_or_throw(acts.substr(0, bar), rec.row));
            acts = bar == std::string_view::npos ? std::string_view{} : acts.substr(bar + 1);
        }
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace empeval
