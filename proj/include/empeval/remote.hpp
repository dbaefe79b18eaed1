#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "empeval/classifier.hpp"

namespace empeval {

struct EndpointConfig {
    std::string url;  // http://host[:port][/prefix]
    int timeout_ms = 5000;
    int retries = 2;
    int max_in_flight = 8;
    std::chrono::milliseconds initial_backoff{250};

    void validate() const;
};

using RemoteJudgement = std::variant<CategoryJudgement, EmotionJudgement>;

// POSTs {"task","seeker","response"} to <url>/v1/classify and validates the
// reply. Network failures and 5xx replies are retried `retries` times with
// exponential backoff; 4xx replies and schema violations are not.
//
// Throws TransportError (network), ServerError (HTTP >= 400) or ProtocolError
// (any other status, or a body that violates the schema).
RemoteJudgement remote_classify(ClassifierTask task, const DialoguePair& pair, const EndpointConfig& endpoint);

// Judgement parsing without the transport, exposed for tests.
RemoteJudgement parse_remote_reply(ClassifierTask task, const std::string& body);

class RemoteBackend final : public ClassifierBackend {
public:
    // `diagnostics` supplies non-empathetic act detection; the wire protocol
    // has no task for it.
    explicit RemoteBackend(EndpointConfig endpoint, std::optional<Lexicon> diagnostics = std::nullopt);
    ~RemoteBackend() override;

    CategoryJudgement classify_category(const DialoguePair& pair, CategoryId category) const override;
    EmotionJudgement classify_emotion(const DialoguePair& pair) const override;
    std::vector<DialogueAct> non_empathetic_acts(const DialoguePair& pair) const override;
    bool supports_concurrency() const noexcept override { return true; }

    const EndpointConfig& endpoint() const noexcept { return endpoint_; }

private:
    RemoteJudgement call(ClassifierTask task, const DialoguePair& pair) const;

    EndpointConfig endpoint_;
    std::optional<Lexicon> diagnostics_;
    struct Limiter;
    std::unique_ptr<Limiter> limiter_;
};

}  // namespace empeval
