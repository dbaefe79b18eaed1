#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace empeval {

// The three empathy categories. The underlying value is the summation index
// used by the scoring function.
enum class CategoryId : int {
    Category1 = 1,  // emotional reactions
    Category2 = 2,  // explorations
    Category3 = 3,  // interpretations
};

inline constexpr std::array<CategoryId, 3> kCategories{CategoryId::Category1, CategoryId::Category2,
                                                       CategoryId::Category3};

constexpr int index_of(CategoryId c) noexcept { return static_cast<int>(c); }
std::string_view to_string(CategoryId c) noexcept;

// Per-category communication strength, each exactly 0, 1 or 2.
class CategoryScores {
public:
    CategoryScores() = default;
    // Throws DomainError when any value lies outside {0, 1, 2}.
    CategoryScores(int c1, int c2, int c3);

    int operator[](CategoryId c) const noexcept { return values_[static_cast<std::size_t>(index_of(c) - 1)]; }
    void set(CategoryId c, int value);

    int c1() const noexcept { return values_[0]; }
    int c2() const noexcept { return values_[1]; }
    int c3() const noexcept { return values_[2]; }
    int total() const noexcept { return values_[0] + values_[1] + values_[2]; }
    const std::array<int, 3>& values() const noexcept { return values_; }

    friend bool operator==(const CategoryScores&, const CategoryScores&) = default;

private:
    std::array<int, 3> values_{0, 0, 0};
};

bool is_category_value(int v) noexcept;

// Ekman's six basic emotions plus `neutral` for responses with no signal.
enum class EmotionLabel { Anger, Disgust, Fear, Happiness, Sadness, Surprise, Neutral };

inline constexpr std::array<EmotionLabel, 7> kEmotionLabels{
    EmotionLabel::Anger,   EmotionLabel::Disgust,  EmotionLabel::Fear,    EmotionLabel::Happiness,
    EmotionLabel::Sadness, EmotionLabel::Surprise, EmotionLabel::Neutral};

std::string_view to_string(EmotionLabel label) noexcept;
std::optional<EmotionLabel> parse_emotion_label(std::string_view name) noexcept;

// Dialogue acts covered by the lexicon: the empathetic acts of each category
// followed by the three non-empathetic acts.
enum class DialogueAct {
    Wishing,
    Sympathizing,
    Consoling,
    ExpressingCare,
    Acknowledging,
    Appreciating,
    Encouraging,
    Questioning,
    Exploring,
    SharingThoughts,
    SharingOpinion,
    SharingExperience,
    RelatingExperience,
    Disgusted,
    Disapproving,
    Advising,
};

inline constexpr std::array<DialogueAct, 16> kDialogueActs{
    DialogueAct::Wishing,         DialogueAct::Sympathizing,      DialogueAct::Consoling,
    DialogueAct::ExpressingCare,  DialogueAct::Acknowledging,     DialogueAct::Appreciating,
    DialogueAct::Encouraging,     DialogueAct::Questioning,       DialogueAct::Exploring,
    DialogueAct::SharingThoughts, DialogueAct::SharingOpinion,    DialogueAct::SharingExperience,
    DialogueAct::RelatingExperience, DialogueAct::Disgusted,      DialogueAct::Disapproving,
    DialogueAct::Advising};

std::string_view to_string(DialogueAct act) noexcept;
std::optional<DialogueAct> parse_dialogue_act(std::string_view name) noexcept;
// Empty for the non-empathetic acts.
std::optional<CategoryId> category_of(DialogueAct act) noexcept;
bool is_non_empathetic(DialogueAct act) noexcept;

struct DialoguePair {
    std::string id;
    std::string seeker_text;
    std::string response_text;
    std::optional<double> human_score;  // [0, 10]
    std::optional<std::string> model_tag;

    // Throws SchemaError / RangeError (line 0) when an invariant is broken.
    void validate() const;

    friend bool operator==(const DialoguePair&, const DialoguePair&) = default;
};

struct EmpathyAssessment {
    std::string pair_id;
    CategoryScores categories;
    EmotionLabel emotion = EmotionLabel::Neutral;
    double emotion_value = 0.0;
    std::vector<DialogueAct> non_empathetic_acts;  // sorted, unique
    double score = 0.0;
    // Carried over from the pair for model comparison; not part of reports.
    std::optional<std::string> model_tag;

    friend bool operator==(const EmpathyAssessment&, const EmpathyAssessment&) = default;
};

}  // namespace empeval
