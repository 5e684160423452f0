#include "ledgerlift/live_backend.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include <cstdlib>

#include "ledgerlift/digest.hpp"

using nlohmann::json;

namespace ledgerlift {

LiveBackendOptions LiveBackendOptions::from_env() {
    LiveBackendOptions options;
    const char* key = std::getenv(kApiKeyEnv);
    if (!key || !*key)
        throw Error(ErrorCode::InvalidConfig, std::string(kApiKeyEnv) + " is not set");
    options.api_key = key;
    return options;
}

LiveBackend::LiveBackend(LiveBackendOptions options) : options_(std::move(options)) {
    if (options_.api_key.empty()) throw Error(ErrorCode::InvalidConfig, "live backend needs an API key");
}

std::string live_request_body(const BackendRequest& request, const std::string& image_mime) {
    json parts = json::array();
    parts.push_back({{"text", request.prompt}});
    if (request.image) {
        parts.push_back({{"inline_data", {{"mime_type", image_mime}, {"data", base64_encode(*request.image)}}}});
    }
    json body = {{"contents", json::array({{{"role", "user"}, {"parts", parts}}})}};
    return body.dump();
}

BackendReply parse_live_response(const std::string& body) {
    BackendReply reply;
    try {
        auto j = json::parse(body);
        const auto& candidates = j.at("candidates");
        if (candidates.empty()) throw Error(ErrorCode::BackendFailure, "response has no candidates");
        for (const auto& part : candidates.at(0).at("content").at("parts")) {
            if (part.value("thought", false)) continue;
            if (part.contains("text")) reply.text += part.at("text").get<std::string>();
        }
        if (j.contains("usageMetadata")) {
            const auto& u = j.at("usageMetadata");
            reply.usage.input_tokens = u.value("promptTokenCount", std::int64_t{0});
            reply.usage.thought_tokens = u.value("thoughtsTokenCount", std::int64_t{0});
            reply.usage.output_tokens = u.value("candidatesTokenCount", std::int64_t{0});
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BackendFailure, std::string("malformed response: ") + e.what());
    }
    return reply;
}

BackendReply LiveBackend::send(const BackendRequest& request) {
    httplib::Client client(options_.host);
    client.set_read_timeout(options_.timeout_seconds, 0);
    client.set_write_timeout(options_.timeout_seconds, 0);
    httplib::Headers headers = {{"x-goog-api-key", options_.api_key}};
    auto path = "/v1beta/models/" + options_.model + ":generateContent";
    auto res = client.Post(path, headers, live_request_body(request, options_.image_mime), "application/json");
    if (!res) throw Error(ErrorCode::BackendFailure, "transport error: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw Error(ErrorCode::BackendFailure,
                    "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 500));
    return parse_live_response(res->body);
}

}  // namespace ledgerlift
