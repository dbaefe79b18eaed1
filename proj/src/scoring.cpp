#include "empeval/scoring.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "empeval/errors.hpp"

namespace empeval {

double compensated_mean(std::span<const double> xs) {
    if (xs.empty()) throw EmptyInputError("mean of an empty sequence");
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value() / static_cast<double>(xs.size());
}

EmotionScale::EmotionScale(const std::array<double, 7>& values_by_label) : values_(values_by_label) {
    for (EmotionLabel l : kEmotionLabels) {
        const double v = value_of(l);
        if (!(v >= 0.0 && v <= 1.0))
            throw ConfigError("emotion scale value for '" + std::string(to_string(l)) + "' outside [0, 1]");
    }
    const double compatible_max = std::max({value_of(EmotionLabel::Happiness), value_of(EmotionLabel::Neutral),
                                            value_of(EmotionLabel::Sadness)});
    const double hostile_min = std::min(value_of(EmotionLabel::Anger), value_of(EmotionLabel::Disgust));
    if (compatible_max > hostile_min)
        throw ConfigError("emotion scale penalizes happiness/neutral/sadness more than anger/disgust");
}

EmotionScale EmotionScale::defaults() {
    std::array<double, 7> v{};
    v[static_cast<std::size_t>(EmotionLabel::Happiness)] = 0.0;
    v[static_cast<std::size_t>(EmotionLabel::Neutral)] = 0.0;
    v[static_cast<std::size_t>(EmotionLabel::Sadness)] = 0.2;
    v[static_cast<std::size_t>(EmotionLabel::Surprise)] = 0.4;
    v[static_cast<std::size_t>(EmotionLabel::Fear)] = 0.6;
    v[static_cast<std::size_t>(EmotionLabel::Anger)] = 0.8;
    v[static_cast<std::size_t>(EmotionLabel::Disgust)] = 1.0;
    return EmotionScale(v);
}

void ScoreConfig::validate() const {
    for (std::size_t i = 0; i < weights.size(); ++i)
        if (!(std::isfinite(weights[i]) && weights[i] > 0.0))
            throw ConfigError("weight " + std::to_string(i + 1) + " must be a positive finite number");
    if (!(std::isfinite(base) && base > 1.0)) throw ConfigError("base must be a finite number greater than 1");
}

ScoreConfig default_config() {
    constexpr double w = 5.0 / 3.0;
    return ScoreConfig{{w, w, w}, std::numbers::e, EmotionScale::defaults(), ReportFlags{}};
}

double empathy_score(const CategoryScores& categories, double emotion_value, const ScoreConfig& config) {
    config.validate();
    if (!(emotion_value >= 0.0 && emotion_value <= 1.0))
        throw DomainError("emotion value " + std::to_string(emotion_value) + " outside [0, 1]");
    double weighted = 0.0;
    for (CategoryId c : kCategories)
        weighted += config.weights[static_cast<std::size_t>(index_of(c) - 1)] * categories[c];
    return weighted * std::pow(config.base, -emotion_value);
}

double aggregate_model_score(std::span<const EmpathyAssessment> assessments) {
    if (assessments.empty()) throw EmptyInputError("cannot aggregate an empty set of assessments");
    CompensatedSum s;
    for (const auto& a : assessments) s.add(a.score);
    return s.value() / static_cast<double>(assessments.size());
}

bool is_recomputable(const EmpathyAssessment& a, const ScoreConfig& config) {
    return empathy_score(a.categories, a.emotion_value, config) == a.score;
}

}  // namespace empeval
