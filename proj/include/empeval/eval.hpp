#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "empeval/ingest.hpp"
#include "empeval/types.hpp"

namespace empeval {

// Sample Pearson coefficient, computed in two passes (means first) and
// clamped to [-1, 1].
//
// Throws ShapeError on a length mismatch and DegenerateInputError when fewer
// than two observations are given or either sequence is constant.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationReport {
    std::size_t n = 0;
    double pearson_r = 0.0;
    double mean_predicted = 0.0;
    double mean_human = 0.0;
    std::size_t excluded = 0;  // pairs without a human score
};

// Pairs lacking a human score are excluded and counted. Every corpus pair
// must have exactly one assessment and vice versa (AlignmentError).
CorrelationReport correlate_with_humans(const Corpus& corpus, std::span<const EmpathyAssessment> assessments);

struct ComparisonRow {
    std::string model_tag;
    std::size_t pair_count = 0;
    double avg_score = 0.0;

    friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;  // avg_score descending, ties by tag
};

// Groups by model_tag; throws SchemaError naming the first untagged pair.
ComparisonTable compare_models(std::span<const EmpathyAssessment> assessments);

nlohmann::ordered_json to_json(const CorrelationReport& report);
nlohmann::ordered_json to_json(const ComparisonTable& table);
std::string format_table(const CorrelationReport& report);
std::string format_table(const ComparisonTable& table);

}  // namespace empeval
