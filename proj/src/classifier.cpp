#include "empeval/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "empeval/errors.hpp"

namespace empeval {

std::string_view to_string(ClassifierTask task) noexcept {
    switch (task) {
        case ClassifierTask::Category1: return "category_1";
        case ClassifierTask::Category2: return "category_2";
        case ClassifierTask::Category3: return "category_3";
        case ClassifierTask::Emotion: return "emotion";
    }
    return "?";
}

std::optional<ClassifierTask> parse_classifier_task(std::string_view name) noexcept {
    for (ClassifierTask t : kClassifierTasks)
        if (to_string(t) == name) return t;
    return std::nullopt;
}

ClassifierTask task_for(CategoryId c) noexcept {
    switch (c) {
        case CategoryId::Category1: return ClassifierTask::Category1;
        case CategoryId::Category2: return ClassifierTask::Category2;
        case CategoryId::Category3: return ClassifierTask::Category3;
    }
    return ClassifierTask::Category1;
}

namespace {

struct RawCue {
    Cue cue;
    std::size_t pattern;
};

std::vector<RawCue> scan_acts(const std::vector<Token>& tokens, std::string_view text, const Lexicon& lexicon,
                              auto&& act_filter) {
    std::vector<RawCue> out;
    for (DialogueAct act : kDialogueActs) {
        if (!act_filter(act)) continue;
        const auto& patterns = lexicon.act_patterns(act);
        for (std::size_t p = 0; p < patterns.size(); ++p)
            for (const auto& m : patterns[p].find_all(tokens))
                out.push_back({Cue{act, std::string(text.substr(m.begin, m.end - m.begin)), m.begin}, p});
    }
    std::sort(out.begin(), out.end(), [](const RawCue& a, const RawCue& b) {
        return std::forward_as_tuple(a.cue.offset, to_string(a.cue.act), a.pattern, a.cue.phrase.size()) <
               std::forward_as_tuple(b.cue.offset, to_string(b.cue.act), b.pattern, b.cue.phrase.size());
    });
    return out;
}

}  // namespace

CategoryJudgement lexicon_classify_category(const DialoguePair& pair, CategoryId category, const Lexicon& lexicon) {
    const auto tokens = tokenize(pair.response_text);
    auto raw = scan_acts(tokens, pair.response_text, lexicon,
                         [category](DialogueAct act) { return category_of(act) == category; });

    std::set<std::pair<DialogueAct, std::size_t>> distinct;
    CategoryJudgement j{category, 0, {}};
    for (auto& r : raw) {
        distinct.emplace(r.cue.act, r.pattern);
        j.matched_cues.push_back(std::move(r.cue));
    }
    j.value = static_cast<int>(std::min<std::size_t>(distinct.size(), 2));
    return j;
}

EmotionJudgement lexicon_classify_emotion(const DialoguePair& pair, const Lexicon& lexicon) {
    const auto tokens = tokenize(pair.response_text);
    struct Hit {
        std::size_t offset;
        std::string phrase;
    };
    std::array<std::vector<Hit>, kEmotionLabels.size()> hits;
    for (EmotionLabel label : kEmotionTieBreak) {
        auto& bucket = hits[static_cast<std::size_t>(label)];
        for (const auto& p : lexicon.emotion_patterns(label))
            for (const auto& m : p.find_all(tokens))
                bucket.push_back({m.begin, pair.response_text.substr(m.begin, m.end - m.begin)});
        std::stable_sort(bucket.begin(), bucket.end(), [](const Hit& a, const Hit& b) { return a.offset < b.offset; });
    }

    EmotionJudgement j;
    std::size_t best = 0;
    for (EmotionLabel label : kEmotionTieBreak) {
        const auto& bucket = hits[static_cast<std::size_t>(label)];
        if (bucket.size() > best) {
            best = bucket.size();
            j.label = label;
        }
    }
    if (best > 0)
        for (auto& h : hits[static_cast<std::size_t>(j.label)]) j.evidence.push_back(std::move(h.phrase));
    return j;
}

std::vector<DialogueAct> detect_non_empathetic_acts(const DialoguePair& pair, const Lexicon& lexicon) {
    const auto tokens = tokenize(pair.response_text);
    std::vector<DialogueAct> out;
    for (DialogueAct act : kDialogueActs) {
        if (!is_non_empathetic(act)) continue;
        for (const auto& p : lexicon.act_patterns(act)) {
            if (!p.find_all(tokens).empty()) {
                out.push_back(act);
                break;
            }
        }
    }
    return out;
}

EmpathyAssessment assess_pair(const DialoguePair& pair, const ClassifierBackend& backend, const ScoreConfig& config,
                              AssessmentEvidence* evidence) {
    config.validate();
    pair.validate();

    EmpathyAssessment a;
    a.pair_id = pair.id;
    a.model_tag = pair.model_tag;
    for (CategoryId c : kCategories) {
        auto j = backend.classify_category(pair, c);
        if (j.category != c || !is_category_value(j.value))
            throw ProtocolError("backend returned an invalid judgement for " + std::string(to_string(c)),
                                std::to_string(j.value));
        a.categories.set(c, j.value);
        if (evidence) evidence->categories.push_back(std::move(j));
    }
    auto emotion = backend.classify_emotion(pair);
    a.emotion = emotion.label;
    a.emotion_value = map_emotion(a.emotion, config.scale);
    if (evidence) evidence->emotion = std::move(emotion);

    a.non_empathetic_acts = backend.non_empathetic_acts(pair);
    std::sort(a.non_empathetic_acts.begin(), a.non_empathetic_acts.end());
    a.non_empathetic_acts.erase(std::unique(a.non_empathetic_acts.begin(), a.non_empathetic_acts.end()),
                                a.non_empathetic_acts.end());

    a.score = empathy_score(a.categories, a.emotion_value, config);
    return a;
}

std::vector<EmpathyAssessment> assess_corpus(std::span<const DialoguePair> pairs, const ClassifierBackend& backend,
                                             const ScoreConfig& config, std::size_t parallelism) {
    config.validate();
    if (parallelism == 0) throw ConfigError("parallelism must be at least 1");

    std::vector<EmpathyAssessment> results(pairs.size());
    std::vector<std::exception_ptr> failures(pairs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex exclusive;
    const bool serialize = !backend.supports_concurrency();

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= pairs.size() || failed.load()) return;
            try {
                if (serialize) {
                    std::lock_guard lock(exclusive);
                    results[i] = assess_pair(pairs[i], backend, config);
                } else {
                    results[i] = assess_pair(pairs[i], backend, config);
                }
            } catch (...) {
                failures[i] = std::current_exception();
                failed.store(true);
            }
        }
    };

    const std::size_t threads = std::min(parallelism, std::max<std::size_t>(pairs.size(), 1));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!failures[i]) continue;
        try {
            std::rethrow_exception(failures[i]);
        } catch (const std::exception& e) {
            throw PairAssessmentError(pairs[i].id, e.what(), failures[i]);
        }
    }
    return results;
}

}  // namespace empeval
