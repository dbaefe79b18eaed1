#pragma once

#include <array>
#include <cmath>
#include <span>

#include "empeval/types.hpp"

namespace empeval {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double compensated_mean(std::span<const double> xs);

// Total map from emotion label to a penalty in [0, 1].
//
// Labels that are compatible with empathy (happiness, neutral, sadness) must
// not be penalized more than the non-empathetic ones (anger, disgust); fear
// and surprise are unconstrained.
class EmotionScale {
public:
    // Throws ConfigError when a value lies outside [0, 1] or the ordering
    // constraint above is violated.
    explicit EmotionScale(const std::array<double, 7>& values_by_label);

    static EmotionScale defaults();

    double value_of(EmotionLabel label) const noexcept { return values_[static_cast<std::size_t>(label)]; }
    const std::array<double, 7>& values() const noexcept { return values_; }

    friend bool operator==(const EmotionScale&, const EmotionScale&) = default;

private:
    std::array<double, 7> values_;
};

struct ReportFlags {
    bool matched_cues = true;
    bool emotion_evidence = true;

    friend bool operator==(const ReportFlags&, const ReportFlags&) = default;
};

struct ScoreConfig {
    std::array<double, 3> weights;
    double base;
    EmotionScale scale;
    ReportFlags report_flags;

    // Throws ConfigError on a non-positive weight or base <= 1.
    void validate() const;

    friend bool operator==(const ScoreConfig&, const ScoreConfig&) = default;
};

// Weights 5/3 so the maximum score is 10, base e, the default scale and
// every report flag on.
ScoreConfig default_config();

// s = sum_i W_i * c_i * base^(-emotion_value)
//
// One emotion value per pair is applied to every category term, so this is
// (W . c) * base^(-emotion_value).
double empathy_score(const CategoryScores& categories, double emotion_value, const ScoreConfig& config);

inline double map_emotion(EmotionLabel label, const EmotionScale& scale) noexcept { return scale.value_of(label); }

// Arithmetic mean of the scores, throws EmptyInputError on an empty span.
double aggregate_model_score(std::span<const EmpathyAssessment> assessments);

// True when `a.score` equals empathy_score applied to its own fields.
bool is_recomputable(const EmpathyAssessment& a, const ScoreConfig& config);

}  // namespace empeval
