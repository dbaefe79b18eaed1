#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "empeval/lexicon.hpp"
#include "empeval/scoring.hpp"
#include "empeval/types.hpp"

namespace empeval {

enum class ClassifierTask { Category1, Category2, Category3, Emotion };

inline constexpr std::array<ClassifierTask, 4> kClassifierTasks{ClassifierTask::Category1, ClassifierTask::Category2,
                                                                ClassifierTask::Category3, ClassifierTask::Emotion};

// Wire names: "category_1", "category_2", "category_3", "emotion".
std::string_view to_string(ClassifierTask task) noexcept;
std::optional<ClassifierTask> parse_classifier_task(std::string_view name) noexcept;
ClassifierTask task_for(CategoryId c) noexcept;

struct Cue {
    DialogueAct act;
    std::string phrase;  // matched text, as written in the response
    std::size_t offset;  // byte offset of the match

    friend bool operator==(const Cue&, const Cue&) = default;
};

struct CategoryJudgement {
    CategoryId category;
    int value;  // {0, 1, 2}
    std::vector<Cue> matched_cues;

    friend bool operator==(const CategoryJudgement&, const CategoryJudgement&) = default;
};

struct EmotionJudgement {
    EmotionLabel label = EmotionLabel::Neutral;
    std::vector<std::string> evidence;

    friend bool operator==(const EmotionJudgement&, const EmotionJudgement&) = default;
};

// Produces category values and an emotion label for a pair.
class ClassifierBackend {
public:
    virtual ~ClassifierBackend() = default;

    virtual CategoryJudgement classify_category(const DialoguePair& pair, CategoryId category) const = 0;
    virtual EmotionJudgement classify_emotion(const DialoguePair& pair) const = 0;
    // Diagnostic only; never affects the score.
    virtual std::vector<DialogueAct> non_empathetic_acts(const DialoguePair& /*pair*/) const { return {}; }
    // False means the engine must serialize calls into this backend.
    virtual bool supports_concurrency() const noexcept = 0;
};

// Counts distinct matching cues among the category's acts over the response:
// 0 cues -> 0, 1 cue -> 1, 2 or more -> 2. Cues are listed in text order, ties
// by act name.
CategoryJudgement lexicon_classify_category(const DialoguePair& pair, CategoryId category, const Lexicon& lexicon);

// Label with the most cue matches in the response; neutral when nothing
// matches. Ties go to the label earliest in kEmotionTieBreak.
EmotionJudgement lexicon_classify_emotion(const DialoguePair& pair, const Lexicon& lexicon);

inline constexpr std::array<EmotionLabel, 6> kEmotionTieBreak{EmotionLabel::Happiness, EmotionLabel::Sadness,
                                                              EmotionLabel::Surprise,  EmotionLabel::Fear,
                                                              EmotionLabel::Anger,     EmotionLabel::Disgust};

// Subset of {disgusted, disapproving, advising} with a cue in the response.
std::vector<DialogueAct> detect_non_empathetic_acts(const DialoguePair& pair, const Lexicon& lexicon);

class LexiconBackend final : public ClassifierBackend {
public:
    explicit LexiconBackend(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}

    CategoryJudgement classify_category(const DialoguePair& pair, CategoryId category) const override {
        return lexicon_classify_category(pair, category, lexicon_);
    }
    EmotionJudgement classify_emotion(const DialoguePair& pair) const override {
        return lexicon_classify_emotion(pair, lexicon_);
    }
    std::vector<DialogueAct> non_empathetic_acts(const DialoguePair& pair) const override {
        return detect_non_empathetic_acts(pair, lexicon_);
    }
    bool supports_concurrency() const noexcept override { return true; }

    const Lexicon& lexicon() const noexcept { return lexicon_; }

private:
    Lexicon lexicon_;
};

// Everything the backend said about one pair, for verbose output.
struct AssessmentEvidence {
    std::vector<CategoryJudgement> categories;
    EmotionJudgement emotion;
};

EmpathyAssessment assess_pair(const DialoguePair& pair, const ClassifierBackend& backend, const ScoreConfig& config,
                              AssessmentEvidence* evidence = nullptr);

// Assesses every pair using up to `parallelism` worker threads. The result
// order matches the input. A failure stops the run and the earliest failed
// pair in input order is rethrown as PairAssessmentError.
std::vector<EmpathyAssessment> assess_corpus(std::span<const DialoguePair> pairs, const ClassifierBackend& backend,
                                             const ScoreConfig& config, std::size_t parallelism = 1);

}  // namespace empeval
