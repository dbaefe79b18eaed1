#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include <json.hpp>

#include "empeval/classifier.hpp"
#include "empeval/errors.hpp"
#include "empeval/lexicon.hpp"
#include "empeval/text.hpp"

using namespace empeval;

namespace {

DialoguePair pair_with(std::string response, std::string seeker = "I feel like nobody cares about my existence.") {
    return DialoguePair{"t", std::move(seeker), std::move(response), std::nullopt, std::nullopt};
}

const Lexicon& lex() { return Lexicon::shipped(); }

bool has_cue(const CategoryJudgement& j, DialogueAct act) {
    return std::any_of(j.matched_cues.begin(), j.matched_cues.end(), [&](const Cue& c) { return c.act == act; });
}

}  // namespace

TEST(Tokenize, LowercasesAndFoldsCurlyApostrophes) {
    const auto toks = tokenize("I\xE2\x80\x99m SORRY, really. Ok");
    ASSERT_EQ(toks.size(), 5u);
    EXPECT_EQ(toks[0].text, "i'm");
    EXPECT_EQ(toks[1].text, "sorry");
    EXPECT_EQ(toks[2].text, "really");
    EXPECT_EQ(toks[3].kind, Token::Kind::Boundary);
    EXPECT_EQ(toks[4].text, "ok");
    EXPECT_EQ(toks[1].begin, 6u);
    EXPECT_EQ(toks[1].end, 11u);
}

TEST(Pattern, WordBoundaries) {
    const Pattern p("sad");
    EXPECT_EQ(p.find_all(tokenize("I am sad.")).size(), 1u);
    EXPECT_TRUE(p.find_all(tokenize("Sadly, no.")).empty());
    EXPECT_TRUE(p.find_all(tokenize("crusade")).empty());
}

TEST(Pattern, WildcardSpansOneToThreeWords) {
    const Pattern p("that must be * difficult");
    EXPECT_EQ(p.find_all(tokenize("that must be so difficult")).size(), 1u);
    EXPECT_EQ(p.find_all(tokenize("that must be really very incredibly difficult")).size(), 1u);
    EXPECT_TRUE(p.find_all(tokenize("that must be difficult")).empty());
    EXPECT_TRUE(p.find_all(tokenize("that must be a b c d difficult")).empty());
    EXPECT_TRUE(p.find_all(tokenize("that must be so. difficult")).empty());
}

TEST(Pattern, MatchDoesNotCrossSentences) {
    const Pattern p("sorry to hear");
    EXPECT_TRUE(p.find_all(tokenize("I'm sorry. To hear that is odd")).empty());
}

TEST(Pattern, RejectsMalformed) {
    EXPECT_THROW(Pattern(""), SchemaError);
    EXPECT_THROW(Pattern("a * b * c"), SchemaError);
    EXPECT_THROW(Pattern("* edge"), SchemaError);
    EXPECT_THROW(Pattern("two. sentences"), SchemaError);
}

TEST(Lexicon, ShippedLexiconCoversEveryEmpatheticAct) {
    for (DialogueAct act : kDialogueActs)
        if (!is_non_empathetic(act)) EXPECT_GE(lex().act_patterns(act).size(), 3u) << to_string(act);
    for (DialogueAct act : {DialogueAct::Disgusted, DialogueAct::Disapproving, DialogueAct::Advising})
        EXPECT_FALSE(lex().act_patterns(act).empty());
}

TEST(Lexicon, RejectsDuplicatePatternUnderOneAct) {
    nlohmann::json doc = nlohmann::json::parse(R"({"acts":{}})");
    for (DialogueAct act : kDialogueActs)
        if (!is_non_empathetic(act)) doc["acts"][std::string(to_string(act))] = {"a1", "a2", "a3"};
    EXPECT_NO_THROW(Lexicon::from_json(doc.dump()));
    doc["acts"]["wishing"] = {"good luck", "Good  LUCK", "x"};
    EXPECT_THROW(Lexicon::from_json(doc.dump()), SchemaError);
}

TEST(Lexicon, RejectsUnknownNamesAndThinActs) {
    EXPECT_THROW(Lexicon::from_json(R"({"acts":{"hugging":["a"]}})"), SchemaError);
    EXPECT_THROW(Lexicon::from_json(R"({"acts":{"wishing":["a","b","c"]}})"), SchemaError);
    EXPECT_THROW(Lexicon::from_json("{not json"), ParseError);
}

TEST(LexiconClassify, SympathizingCue) {
    const auto j = lexicon_classify_category(
        pair_with("I'm sorry to hear that. Have you tried talking to a friend or family member about your feelings?"),
        CategoryId::Category1, lex());
    EXPECT_GE(j.value, 1);
    EXPECT_TRUE(has_cue(j, DialogueAct::Sympathizing));
}

TEST(LexiconClassify, QuestioningCue) {
    const auto j = lexicon_classify_category(
        pair_with("Have you tried talking to a friend or family member about your feelings?"), CategoryId::Category2,
        lex());
    EXPECT_GE(j.value, 1);
    EXPECT_TRUE(has_cue(j, DialogueAct::Questioning));
}

TEST(LexiconClassify, CueFreeResponse) {
    for (CategoryId c : kCategories) {
        const auto j = lexicon_classify_category(pair_with("The weather report said rain."), c, lex());
        EXPECT_EQ(j.value, 0);
        EXPECT_TRUE(j.matched_cues.empty());
    }
}

TEST(LexiconClassify, TwoDistinctCuesGiveTwo) {
    const auto j = lexicon_classify_category(
        pair_with("Congratulations! I hope you enjoy your new position. What do you do for work?",
                  "I finally got promoted at work."),
        CategoryId::Category1, lex());
    EXPECT_EQ(j.value, 2);
    EXPECT_TRUE(has_cue(j, DialogueAct::Appreciating));
    EXPECT_TRUE(has_cue(j, DialogueAct::Wishing));
}

TEST(LexiconClassify, RepeatedCueCountsOnce) {
    const auto j = lexicon_classify_category(pair_with("Good luck. Good luck!"), CategoryId::Category1, lex());
    EXPECT_EQ(j.value, 1);
    EXPECT_EQ(j.matched_cues.size(), 2u);
}

TEST(LexiconClassify, CuesInTextOrder) {
    const auto j = lexicon_classify_category(pair_with("Well done, and good luck with it."), CategoryId::Category1,
                                             lex());
    ASSERT_EQ(j.matched_cues.size(), 2u);
    EXPECT_EQ(j.matched_cues[0].phrase, "Well done");
    EXPECT_EQ(j.matched_cues[1].phrase, "good luck");
    EXPECT_LT(j.matched_cues[0].offset, j.matched_cues[1].offset);
}

TEST(LexiconEmotion, Examples) {
    EXPECT_EQ(lexicon_classify_emotion(pair_with("Congrats on the promotion!"), lex()).label, EmotionLabel::Happiness);
    const auto none = lexicon_classify_emotion(pair_with("The report is attached."), lex());
    EXPECT_EQ(none.label, EmotionLabel::Neutral);
    EXPECT_TRUE(none.evidence.empty());
}

TEST(LexiconEmotion, TieBreakFavoursHappiness) {
    const auto j = lexicon_classify_emotion(pair_with("I was sad but now I am glad."), lex());
    EXPECT_EQ(j.label, EmotionLabel::Happiness);
    EXPECT_EQ(j.evidence, std::vector<std::string>{"glad"});
}

TEST(LexiconEmotion, MajorityWins) {
    EXPECT_EQ(lexicon_classify_emotion(pair_with("So sad and lonely, glad you wrote."), lex()).label,
              EmotionLabel::Sadness);
}

TEST(NonEmpathetic, Examples) {
    EXPECT_EQ(detect_non_empathetic_acts(pair_with("You should just get over it and move on."), lex()),
              std::vector<DialogueAct>{DialogueAct::Advising});
    EXPECT_TRUE(detect_non_empathetic_acts(pair_with("I care about you."), lex()).empty());
    EXPECT_EQ(detect_non_empathetic_acts(pair_with("That's disgusting, I can't believe you did that."), lex()),
              std::vector<DialogueAct>{DialogueAct::Disgusted});
}

TEST(AssessPair, NobodyCaresPair) {
    LexiconBackend backend(lex());
    const auto cfg = default_config();
    const auto good = assess_pair(
        pair_with("I'm sorry to hear that. Have you tried talking to a friend or family member about your feelings?"),
        backend, cfg);
    const auto terse = assess_pair(pair_with("I do."), backend, cfg);
    EXPECT_GE(good.categories.c1(), 1);
    EXPECT_GE(good.categories.c2(), 1);
    EXPECT_GT(good.score, 0.0);
    EXPECT_GT(good.score, terse.score);
    EXPECT_TRUE(is_recomputable(good, cfg));
}

TEST(AssessPair, CueFreeIsZero) {
    LexiconBackend backend(lex());
    const auto a = assess_pair(pair_with("The weather report said rain."), backend, default_config());
    EXPECT_EQ(a.categories, CategoryScores(0, 0, 0));
    EXPECT_EQ(a.emotion, EmotionLabel::Neutral);
    EXPECT_EQ(a.score, 0.0);
}

TEST(AssessPair, NonEmpatheticActsDoNotChangeScore) {
    LexiconBackend backend(lex());
    const auto cfg = default_config();
    const auto plain = assess_pair(pair_with("I care about you."), backend, cfg);
    const auto advised = assess_pair(pair_with("I care about you. You should move on."), backend, cfg);
    EXPECT_EQ(advised.non_empathetic_acts, std::vector<DialogueAct>{DialogueAct::Advising});
    EXPECT_EQ(plain.score, advised.score);
}

TEST(AssessPair, LinearInWeights) {
    LexiconBackend backend(lex());
    auto cfg = default_config();
    const auto base = assess_pair(pair_with("Good luck! What happened? I think you can do it."), backend, cfg);
    for (auto& w : cfg.weights) w *= 4.0;
    const auto scaled = assess_pair(pair_with("Good luck! What happened? I think you can do it."), backend, cfg);
    EXPECT_EQ(scaled.score, 4.0 * base.score);
}

namespace {

// Cue-bearing and neutral fragments used to build random responses.
const std::vector<std::string> kFragments{
    "I'm so sorry to hear that.", "Have you tried going for a walk?", "Tell me more about it.",
    "I think it will pass.",      "Congrats!",                         "That is gross.",
    "I'm scared for you.",        "You should quit.",                  "The bus was late.",
    "I went through this too.",   "Good luck!",                        "Why do you say that?",
    "Wow, no way.",               "I hate this.",                      "Thanks for sharing.",
    "It's okay to be upset.",     "Lunch is at noon.",                 "In my opinion, rest helps."};

DialoguePair random_pair(std::mt19937_64& rng, int id) {
    std::uniform_int_distribution<std::size_t> pick(0, kFragments.size() - 1);
    std::uniform_int_distribution<int> count(1, 4);
    std::string response;
    for (int k = count(rng); k > 0; --k) response += (response.empty() ? "" : " ") + kFragments[pick(rng)];
    return DialoguePair{"r" + std::to_string(id), "I had a rough day.", response, std::nullopt, std::nullopt};
}

}  // namespace

TEST(AssessPairProperty, EqualsManualComposition) {
    std::mt19937_64 rng(2024);
    LexiconBackend backend(lex());
    const auto cfg = default_config();
    for (int i = 0; i < 50; ++i) {
        const auto p = random_pair(rng, i);
        const auto a = assess_pair(p, backend, cfg);
        const CategoryScores manual(lexicon_classify_category(p, CategoryId::Category1, lex()).value,
                                    lexicon_classify_category(p, CategoryId::Category2, lex()).value,
                                    lexicon_classify_category(p, CategoryId::Category3, lex()).value);
        const double emo = map_emotion(lexicon_classify_emotion(p, lex()).label, cfg.scale);
        EXPECT_EQ(a.categories, manual) << p.response_text;
        EXPECT_EQ(a.emotion_value, emo);
        EXPECT_EQ(a.score, empathy_score(manual, emo, cfg)) << p.response_text;
        EXPECT_TRUE(is_recomputable(a, cfg));
    }
}

TEST(AssessPairProperty, ValuesAlwaysInRange) {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        const auto p = random_pair(rng, i);
        for (CategoryId c : kCategories) {
            const auto j = lexicon_classify_category(p, c, lex());
            EXPECT_TRUE(is_category_value(j.value));
            if (j.value == 0) EXPECT_TRUE(j.matched_cues.empty());
        }
    }
}

TEST(AssessPairProperty, JudgementsIndependentOfPatternOrder) {
    // Same lexicon with every pattern list reversed.
    auto doc = nlohmann::json::parse(R"({"acts":{},"emotions":{}})");
    for (DialogueAct act : kDialogueActs) {
        std::vector<std::string> pats;
        for (const auto& p : lex().act_patterns(act)) pats.push_back(p.source());
        std::reverse(pats.begin(), pats.end());
        doc["acts"][std::string(to_string(act))] = pats;
    }
    for (EmotionLabel l : kEmotionTieBreak) {
        std::vector<std::string> pats;
        for (const auto& p : lex().emotion_patterns(l)) pats.push_back(p.source());
        std::reverse(pats.begin(), pats.end());
        doc["emotions"][std::string(to_string(l))] = pats;
    }
    const Lexicon reversed = Lexicon::from_json(doc.dump());
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const auto p = random_pair(rng, i);
        for (CategoryId c : kCategories)
            EXPECT_EQ(lexicon_classify_category(p, c, lex()), lexicon_classify_category(p, c, reversed));
        EXPECT_EQ(lexicon_classify_emotion(p, lex()).label, lexicon_classify_emotion(p, reversed).label);
    }
}

TEST(AssessPairProperty, MoreCategoriesRankHigher) {
    // Emotion-neutral cue sentences, one per category.
    const std::vector<std::pair<std::string, std::string>> one_category{
        {"I care about you.", "Tell me more."},
        {"Good luck with it.", "I think so."},
        {"What happened?", "I went through this too."},
    };
    LexiconBackend backend(lex());
    const auto cfg = default_config();
    const double none = assess_pair(pair_with("The bus was late."), backend, cfg).score;
    for (const auto& [first, second] : one_category) {
        const double one = assess_pair(pair_with(first), backend, cfg).score;
        const double two = assess_pair(pair_with(first + " " + second), backend, cfg).score;
        EXPECT_GT(two, one) << first << " + " << second;
        EXPECT_GT(one, none) << first;
    }
}

namespace {

class CountingBackend final : public ClassifierBackend {
public:
    CategoryJudgement classify_category(const DialoguePair& p, CategoryId c) const override {
        if (p.id == "boom") throw TransportError("simulated outage");
        return {c, 1, {}};
    }
    EmotionJudgement classify_emotion(const DialoguePair&) const override { return {}; }
    bool supports_concurrency() const noexcept override { return false; }
};

}  // namespace

TEST(AssessCorpus, PreservesOrderAcrossParallelism) {
    std::mt19937_64 rng(17);
    std::vector<DialoguePair> pairs;
    for (int i = 0; i < 300; ++i) pairs.push_back(random_pair(rng, i));
    LexiconBackend backend(lex());
    const auto serial = assess_corpus(pairs, backend, default_config(), 1);
    const auto parallel = assess_corpus(pairs, backend, default_config(), 8);
    EXPECT_EQ(serial, parallel);
    for (std::size_t i = 0; i < pairs.size(); ++i) EXPECT_EQ(serial[i].pair_id, pairs[i].id);
}

TEST(AssessCorpus, FailureNamesThePair) {
    std::vector<DialoguePair> pairs{pair_with("a"), pair_with("b")};
    pairs[0].id = "fine";
    pairs[1].id = "boom";
    CountingBackend backend;
    try {
        assess_corpus(pairs, backend, default_config(), 4);
        FAIL() << "expected PairAssessmentError";
    } catch (const PairAssessmentError& e) {
        EXPECT_EQ(e.pair_id(), "boom");
        EXPECT_THROW(std::rethrow_exception(e.cause()), TransportError);
    }
}
