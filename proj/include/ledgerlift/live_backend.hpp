#pragma once

#include <string>

#include "ledgerlift/extraction.hpp"

namespace ledgerlift {

inline constexpr const char* kApiKeyEnv = "LEDGERLIFT_API_KEY";

struct LiveBackendOptions {
    std::string host = "https://generativelanguage.googleapis.com";
    std::string model = "gemini-2.5-pro";
    std::string api_key;
    std::string image_mime = "image/jpeg";
    int timeout_seconds = 600;

    // Reads the key from LEDGERLIFT_API_KEY; throws InvalidConfig when unset.
    static LiveBackendOptions from_env();
};

// generateContent client: prompt text plus one inline image per request.
// Token usage comes from the response's usage metadata.
class LiveBackend final : public BackendAdapter {
public:
    explicit LiveBackend(LiveBackendOptions options);

    std::string name() const override { return "live:" + options_.model; }
    BackendReply send(const BackendRequest& request) override;

private:
    LiveBackendOptions options_;
};

// Exposed for tests: builds the request body and decodes a response body.
std::string live_request_body(const BackendRequest& request, const std::string& image_mime);
BackendReply parse_live_response(const std::string& body);

}  // namespace ledgerlift
