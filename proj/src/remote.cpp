#include "empeval/remote.hpp"

#include <charconv>
#include <condition_variable>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "empeval/errors.hpp"

namespace empeval {

namespace {

struct ParsedUrl {
    std::string host;
    int port = 80;
    std::string prefix;
};

ParsedUrl parse_url(const std::string& url) {
    constexpr std::string_view scheme = "http://";
    if (url.rfind(scheme, 0) != 0) throw ConfigError("endpoint url must start with http:// (got '" + url + "')");
    std::string_view rest(url);
    rest.remove_prefix(scheme.size());
    ParsedUrl out;
    const auto slash = rest.find('/');
    std::string_view authority = rest.substr(0, slash);
    if (slash != std::string_view::npos) out.prefix = std::string(rest.substr(slash));
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
    const auto colon = authority.rfind(':');
    if (colon != std::string_view::npos) {
        const auto port_text = authority.substr(colon + 1);
        auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), out.port);
        if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || out.port <= 0 || out.port > 65535)
            throw ConfigError("endpoint url has an invalid port: '" + url + "'");
        authority = authority.substr(0, colon);
    }
    if (authority.empty()) throw ConfigError("endpoint url has no host: '" + url + "'");
    out.host = std::string(authority);
    return out;
}

}  // namespace

void EndpointConfig::validate() const {
    parse_url(url);
    if (timeout_ms <= 0) throw ConfigError("timeout_ms must be positive");
    if (retries < 0) throw ConfigError("retries must be non-negative");
    if (max_in_flight < 1) throw ConfigError("max_in_flight must be at least 1");
}

RemoteJudgement parse_remote_reply(ClassifierTask task, const std::string& body) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error&) {
        throw ProtocolError("reply is not valid JSON", body);
    }
    if (!doc.is_object()) throw ProtocolError("reply is not a JSON object", body);

    const bool emotion = task == ClassifierTask::Emotion;
    const char* payload_key = emotion ? "label" : "value";
    for (const auto& [key, _] : doc.items())
        if (key != "task" && key != payload_key) throw ProtocolError("reply has unexpected field '" + key + "'", body);
    if (!doc.contains("task") || !doc["task"].is_string() || doc["task"].get<std::string>() != to_string(task))
        throw ProtocolError("reply task does not match request task '" + std::string(to_string(task)) + "'", body);
    if (!doc.contains(payload_key)) throw ProtocolError(std::string("reply lacks '") + payload_key + "'", body);

    const auto& payload = doc[payload_key];
    if (emotion) {
        if (!payload.is_string()) throw ProtocolError("emotion label is not a string", body);
        const auto label = parse_emotion_label(payload.get<std::string>());
        if (!label) throw ProtocolError("unknown emotion label '" + payload.get<std::string>() + "'", body);
        return EmotionJudgement{*label, {}};
    }
    if (!payload.is_number_integer()) throw ProtocolError("category value is not an integer", body);
    const auto v = payload.get<long long>();
    if (v < 0 || v > 2) throw ProtocolError("category value " + std::to_string(v) + " outside {0,1,2}", body);
    const auto category = static_cast<CategoryId>(static_cast<int>(task) + 1);
    return CategoryJudgement{category, static_cast<int>(v), {}};
}

RemoteJudgement remote_classify(ClassifierTask task, const DialoguePair& pair, const EndpointConfig& endpoint) {
    endpoint.validate();
    const auto url = parse_url(endpoint.url);
    const std::string path = url.prefix + "/v1/classify";
    const std::string body =
        nlohmann::json{{"task", to_string(task)}, {"seeker", pair.seeker_text}, {"response", pair.response_text}}
            .dump();

    httplib::Client client(url.host, url.port);
    const auto timeout = std::chrono::milliseconds(endpoint.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    auto backoff = endpoint.initial_backoff;
    std::string last_failure;
    int last_status = 0;
    for (int attempt = 0; attempt <= endpoint.retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        auto res = client.Post(path, body, "application/json");
        if (!res) {
            last_status = 0;
            last_failure = "request to " + endpoint.url + path + " failed: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_status = res->status;
            last_failure = "server returned HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status >= 400) throw ServerError("server returned HTTP " + std::to_string(res->status), res->status);
        if (res->status != 200)
            throw ProtocolError("unexpected HTTP status " + std::to_string(res->status), res->body);
        return parse_remote_reply(task, res->body);
    }
    const std::string msg = last_failure + " (after " + std::to_string(endpoint.retries + 1) + " attempts)";
    if (last_status != 0) throw ServerError(msg, last_status);
    throw TransportError(msg);
}

struct RemoteBackend::Limiter {
    explicit Limiter(int limit) : available(limit) {}

    void acquire() {
        std::unique_lock lock(mu);
        cv.wait(lock, [this] { return available > 0; });
        --available;
    }
    void release() {
        {
            std::lock_guard lock(mu);
            ++available;
        }
        cv.notify_one();
    }

    std::mutex mu;
    std::condition_variable cv;
    int available;
};

RemoteBackend::RemoteBackend(EndpointConfig endpoint, std::optional<Lexicon> diagnostics)
    : endpoint_(std::move(endpoint)), diagnostics_(std::move(diagnostics)) {
    endpoint_.validate();
    limiter_ = std::make_unique<Limiter>(endpoint_.max_in_flight);
}

RemoteBackend::~RemoteBackend() = default;

RemoteJudgement RemoteBackend::call(ClassifierTask task, const DialoguePair& pair) const {
    limiter_->acquire();
    struct Release {
        Limiter& l;
        ~Release() { l.release(); }
    } release{*limiter_};
    return remote_classify(task, pair, endpoint_);
}

CategoryJudgement RemoteBackend::classify_category(const DialoguePair& pair, CategoryId category) const {
    return std::get<CategoryJudgement>(call(task_for(category), pair));
}

EmotionJudgement RemoteBackend::classify_emotion(const DialoguePair& pair) const {
    return std::get<EmotionJudgement>(call(ClassifierTask::Emotion, pair));
}

std::vector<DialogueAct> RemoteBackend::non_empathetic_acts(const DialoguePair& pair) const {
    if (!diagnostics_) return {};
    return detect_non_empathetic_acts(pair, *diagnostics_);
}

}  // namespace empeval
