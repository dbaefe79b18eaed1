#include "empeval/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <unordered_map>

#include "empeval/errors.hpp"
#include "empeval/scoring.hpp"

namespace empeval {

namespace {

bool is_constant(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ShapeError("pearson: sequences differ in length (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
    if (x.size() < 2) throw DegenerateInputError("pearson: need at least two observations");
    if (is_constant(x) || is_constant(y)) throw DegenerateInputError("pearson: a sequence has zero variance");

    const double mx = compensated_mean(x);
    const double my = compensated_mean(y);
    CompensatedSum sxy, sxx, syy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy.add(dx * dy);
        sxx.add(dx * dx);
        syy.add(dy * dy);
    }
    const double denom = std::sqrt(sxx.value() * syy.value());
    if (!(denom > 0.0)) throw DegenerateInputError("pearson: a sequence has zero variance");
    return std::clamp(sxy.value() / denom, -1.0, 1.0);
}

CorrelationReport correlate_with_humans(const Corpus& corpus, std::span<const EmpathyAssessment> assessments) {
    std::unordered_map<std::string_view, const EmpathyAssessment*> by_id;
    for (const auto& a : assessments)
        if (!by_id.emplace(a.pair_id, &a).second)
            throw AlignmentError("pair '" + a.pair_id + "' is assessed more than once");
    if (by_id.size() != corpus.pairs.size()) {
        for (const auto& a : assessments) {
            const bool known = std::any_of(corpus.pairs.begin(), corpus.pairs.end(),
                                           [&](const DialoguePair& p) { return p.id == a.pair_id; });
            if (!known) throw AlignmentError("assessment for unknown pair '" + a.pair_id + "'");
        }
    }

    std::vector<double> predicted, human;
    CorrelationReport report;
    for (const auto& p : corpus.pairs) {
        const auto it = by_id.find(p.id);
        if (it == by_id.end()) throw AlignmentError("pair '" + p.id + "' has no assessment");
        if (!p.human_score) {
            ++report.excluded;
            continue;
        }
        predicted.push_back(it->second->score);
        human.push_back(*p.human_score);
    }
    report.n = predicted.size();
    if (report.n < 2)
        throw DegenerateInputError("need at least two pairs with human scores, found " + std::to_string(report.n),
                                   report.excluded);
    try {
        report.pearson_r = pearson(predicted, human);
    } catch (const DegenerateInputError& e) {
        throw DegenerateInputError(e.what(), report.excluded);
    }
    report.mean_predicted = compensated_mean(predicted);
    report.mean_human = compensated_mean(human);
    return report;
}

ComparisonTable compare_models(std::span<const EmpathyAssessment> assessments) {
    std::map<std::string, std::vector<EmpathyAssessment>> groups;
    for (const auto& a : assessments) {
        if (!a.model_tag) throw SchemaError("pair '" + a.pair_id + "' has no model_tag", 0, "model_tag");
        groups[*a.model_tag].push_back(a);
    }
    ComparisonTable table;
    for (const auto& [tag, members] : groups)
        table.rows.push_back({tag, members.size(), aggregate_model_score(members)});
    // std::map iteration is already tag-ascending; stable sort keeps it for ties.
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const ComparisonRow& a, const ComparisonRow& b) { return a.avg_score > b.avg_score; });
    return table;
}

nlohmann::ordered_json to_json(const CorrelationReport& r) {
    return {{"n", r.n},
            {"pearson_r", r.pearson_r},
            {"mean_predicted", r.mean_predicted},
            {"mean_human", r.mean_human},
            {"excluded", r.excluded}};
}

nlohmann::ordered_json to_json(const ComparisonTable& table) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows)
        rows.push_back({{"model_tag", row.model_tag}, {"pair_count", row.pair_count}, {"avg_score", row.avg_score}});
    return {{"rows", rows}};
}

std::string format_table(const CorrelationReport& r) {
    std::ostringstream out;
    out << std::left << std::setw(16) << "n" << r.n << '\n'
        << std::setw(16) << "pearson_r" << format_fixed6(r.pearson_r) << '\n'
        << std::setw(16) << "mean_predicted" << format_fixed6(r.mean_predicted) << '\n'
        << std::setw(16) << "mean_human" << format_fixed6(r.mean_human) << '\n'
        << std::setw(16) << "excluded" << r.excluded << '\n';
    return out.str();
}

std::string format_table(const ComparisonTable& table) {
    std::size_t tag_width = std::string_view("model").size();
    for (const auto& row : table.rows) tag_width = std::max(tag_width, row.model_tag.size());
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(tag_width)) << "model" << "  " << std::right << std::setw(8) << "n"
        << "  " << std::setw(12) << "avg_score" << '\n';
    for (const auto& row : table.rows)
        out << std::left << std::setw(static_cast<int>(tag_width)) << row.model_tag << "  " << std::right
            << std::setw(8) << row.pair_count << "  " << std::setw(12) << format_fixed6(row.avg_score) << '\n';
    return out.str();
}

}  // namespace empeval
