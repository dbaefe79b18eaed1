#include "empeval/types.hpp"

#include <cmath>

#include "empeval/errors.hpp"
#include "empeval/text.hpp"

namespace empeval {

std::string_view to_string(CategoryId c) noexcept {
    switch (c) {
        case CategoryId::Category1: return "category_1";
        case CategoryId::Category2: return "category_2";
        case CategoryId::Category3: return "category_3";
    }
    return "category_?";
}

bool is_category_value(int v) noexcept { return v == 0 || v == 1 || v == 2; }

CategoryScores::CategoryScores(int c1, int c2, int c3) {
    set(CategoryId::Category1, c1);
    set(CategoryId::Category2, c2);
    set(CategoryId::Category3, c3);
}

void CategoryScores::set(CategoryId c, int value) {
    if (!is_category_value(value))
        throw DomainError(std::string(to_string(c)) + " value " + std::to_string(value) + " is not in {0,1,2}");
    values_[static_cast<std::size_t>(index_of(c) - 1)] = value;
}

std::string_view to_string(EmotionLabel label) noexcept {
    switch (label) {
        case EmotionLabel::Anger: return "anger";
        case EmotionLabel::Disgust: return "disgust";
        case EmotionLabel::Fear: return "fear";
        case EmotionLabel::Happiness: return "happiness";
        case EmotionLabel::Sadness: return "sadness";
        case EmotionLabel::Surprise: return "surprise";
        case EmotionLabel::Neutral: return "neutral";
    }
    return "neutral";
}

std::optional<EmotionLabel> parse_emotion_label(std::string_view name) noexcept {
    for (EmotionLabel l : kEmotionLabels)
        if (to_string(l) == name) return l;
    return std::nullopt;
}

std::string_view to_string(DialogueAct act) noexcept {
    switch (act) {
        case DialogueAct::Wishing: return "wishing";
        case DialogueAct::Sympathizing: return "sympathizing";
        case DialogueAct::Consoling: return "consoling";
        case DialogueAct::ExpressingCare: return "expressing_care";
        case DialogueAct::Acknowledging: return "acknowledging";
        case DialogueAct::Appreciating: return "appreciating";
        case DialogueAct::Encouraging: return "encouraging";
        case DialogueAct::Questioning: return "questioning";
        case DialogueAct::Exploring: return "exploring";
        case DialogueAct::SharingThoughts: return "sharing_thoughts";
        case DialogueAct::SharingOpinion: return "sharing_opinion";
        case DialogueAct::SharingExperience: return "sharing_experience";
        case DialogueAct::RelatingExperience: return "relating_experience";
        case DialogueAct::Disgusted: return "disgusted";
        case DialogueAct::Disapproving: return "disapproving";
        case DialogueAct::Advising: return "advising";
    }
    return "?";
}

std::optional<DialogueAct> parse_dialogue_act(std::string_view name) noexcept {
    for (DialogueAct a : kDialogueActs)
        if (to_string(a) == name) return a;
    return std::nullopt;
}

std::optional<CategoryId> category_of(DialogueAct act) noexcept {
    switch (act) {
        case DialogueAct::Wishing:
        case DialogueAct::Sympathizing:
        case DialogueAct::Consoling:
        case DialogueAct::ExpressingCare:
        case DialogueAct::Acknowledging:
        case DialogueAct::Appreciating:
        case DialogueAct::Encouraging:
            return CategoryId::Category1;
        case DialogueAct::Questioning:
        case DialogueAct::Exploring:
            return CategoryId::Category2;
        case DialogueAct::SharingThoughts:
        case DialogueAct::SharingOpinion:
        case DialogueAct::SharingExperience:
        case DialogueAct::RelatingExperience:
            return CategoryId::Category3;
        default:
            return std::nullopt;
    }
}

bool is_non_empathetic(DialogueAct act) noexcept { return !category_of(act).has_value(); }

void DialoguePair::validate() const {
    if (id.empty()) throw SchemaError("field 'id' is empty", 0, "id");
    if (trim(seeker_text).empty()) throw SchemaError("field 'seeker' is empty", 0, "seeker");
    if (trim(response_text).empty()) throw SchemaError("field 'response' is empty", 0, "response");
    if (human_score && !(std::isfinite(*human_score) && *human_score >= 0.0 && *human_score <= 10.0))
        throw RangeError("human_score " + std::to_string(*human_score) + " outside [0, 10]", 0);
    if (model_tag && model_tag->empty()) throw SchemaError("field 'model_tag' is empty", 0, "model_tag");
}

}  // namespace empeval
