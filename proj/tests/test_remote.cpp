#include <gtest/gtest.h>

#include <chrono>

#include "empeval/errors.hpp"
#include "empeval/remote.hpp"
#include "mock_server.hpp"

using namespace empeval;
using empeval::testing::MockServer;

namespace {

DialoguePair pair_with(std::string response) {
    return DialoguePair{"p", "seeker text", std::move(response), std::nullopt, std::nullopt};
}

class RemoteTest : public ::testing::Test {
protected:
    void SetUp() override {
        server_ = std::make_unique<MockServer>(MockServer::load_fixture(EMPEVAL_FIXTURE_DIR "/mock_server.json"));
        server_->start();
        endpoint_.url = server_->url();
        endpoint_.timeout_ms = 2000;
        endpoint_.initial_backoff = std::chrono::milliseconds(10);
    }

    std::unique_ptr<MockServer> server_;
    EndpointConfig endpoint_;
};

}  // namespace

TEST_F(RemoteTest, AllFourTasksRoundTrip) {
    const auto p = pair_with("valid");
    EXPECT_EQ(std::get<CategoryJudgement>(remote_classify(ClassifierTask::Category1, p, endpoint_)),
              (CategoryJudgement{CategoryId::Category1, 2, {}}));
    EXPECT_EQ(std::get<CategoryJudgement>(remote_classify(ClassifierTask::Category2, p, endpoint_)).value, 1);
    EXPECT_EQ(std::get<CategoryJudgement>(remote_classify(ClassifierTask::Category3, p, endpoint_)).value, 0);
    const auto emo = std::get<EmotionJudgement>(remote_classify(ClassifierTask::Emotion, p, endpoint_));
    EXPECT_EQ(emo.label, EmotionLabel::Sadness);
    EXPECT_TRUE(emo.evidence.empty());
}

TEST_F(RemoteTest, OutOfRangeValueIsProtocolError) {
    try {
        remote_classify(ClassifierTask::Category1, pair_with("out of range"), endpoint_);
        FAIL();
    } catch (const ProtocolError& e) {
        EXPECT_NE(e.payload().find("7"), std::string::npos);
    }
}

TEST_F(RemoteTest, UnknownLabelIsProtocolError) {
    EXPECT_THROW(remote_classify(ClassifierTask::Emotion, pair_with("bad label"), endpoint_), ProtocolError);
}

TEST_F(RemoteTest, SchemaViolationsAreProtocolErrors) {
    for (const char* r : {"garbage", "string value", "fractional", "extra field"})
        EXPECT_THROW(remote_classify(ClassifierTask::Category1, pair_with(r), endpoint_), ProtocolError) << r;
    EXPECT_THROW(remote_classify(ClassifierTask::Category2, pair_with("wrong task"), endpoint_), ProtocolError);
    EXPECT_THROW(remote_classify(ClassifierTask::Category1, pair_with("accepted"), endpoint_), ProtocolError);
}

TEST_F(RemoteTest, ServerErrorRetriesThenFails) {
    endpoint_.retries = 2;
    try {
        remote_classify(ClassifierTask::Category1, pair_with("server error"), endpoint_);
        FAIL();
    } catch (const ServerError& e) {
        EXPECT_EQ(e.status(), 500);
    }
    EXPECT_EQ(server_->request_count(), 3);
}

TEST_F(RemoteTest, ClientErrorIsNotRetried) {
    EXPECT_THROW(remote_classify(ClassifierTask::Category1, pair_with("client error"), endpoint_), ServerError);
    EXPECT_EQ(server_->request_count(), 1);
}

TEST_F(RemoteTest, UnreachableServerIsTransportError) {
    const std::string url = server_->url();
    server_->stop();
    endpoint_.url = url;
    endpoint_.retries = 1;
    EXPECT_THROW(remote_classify(ClassifierTask::Category1, pair_with("valid"), endpoint_), TransportError);
}

TEST_F(RemoteTest, BackendAssessesPairs) {
    RemoteBackend backend(endpoint_, Lexicon::shipped());
    const auto a = assess_pair(pair_with("valid"), backend, default_config());
    EXPECT_EQ(a.categories, CategoryScores(2, 1, 0));
    EXPECT_EQ(a.emotion, EmotionLabel::Sadness);
    EXPECT_DOUBLE_EQ(a.score, 5.0 * std::exp(-0.2));
}

TEST_F(RemoteTest, BackendUnderParallelLoad) {
    endpoint_.max_in_flight = 3;
    RemoteBackend backend(endpoint_);
    std::vector<DialoguePair> pairs;
    for (int i = 0; i < 40; ++i)
        pairs.push_back(DialoguePair{"p" + std::to_string(i), "s", "anything", std::nullopt, std::nullopt});
    const auto out = assess_corpus(pairs, backend, default_config(), 8);
    ASSERT_EQ(out.size(), pairs.size());
    for (const auto& a : out) EXPECT_EQ(a.categories, CategoryScores(1, 1, 0));
    EXPECT_EQ(server_->request_count(), 160);
}

TEST(RemoteConfig, RejectsBadEndpoints) {
    EndpointConfig e;
    e.url = "https://example.com";
    EXPECT_THROW(e.validate(), ConfigError);
    e.url = "http://host:99999";
    EXPECT_THROW(e.validate(), ConfigError);
    e.url = "http://host:8080/prefix";
    EXPECT_NO_THROW(e.validate());
    e.max_in_flight = 0;
    EXPECT_THROW(e.validate(), ConfigError);
}

TEST(RemoteReply, ParsesValidBodies) {
    EXPECT_EQ(std::get<CategoryJudgement>(parse_remote_reply(ClassifierTask::Category3, R"({"task":"category_3","value":2})")).category,
              CategoryId::Category3);
    EXPECT_THROW(parse_remote_reply(ClassifierTask::Emotion, R"({"task":"emotion"})"), ProtocolError);
    EXPECT_THROW(parse_remote_reply(ClassifierTask::Category1, R"([1,2])"), ProtocolError);
}
