// Sends one tiny request to the live backend. Needs LEDGERLIFT_API_KEY and
// network access, so it is not part of ctest.
// usage: live_smoke [model]

#include <iostream>

#include "ledgerlift/live_backend.hpp"

using namespace ledgerlift;

int main(int argc, char** argv) {
    try {
        auto options = LiveBackendOptions::from_env();
        if (argc > 1) options.model = argv[1];
        LiveBackend backend(options);
        auto reply = send_with_retry(backend, {std::string(kTaskMeta), "Reply with the single word NO_TABLES.", std::nullopt},
                                     RetryPolicy{});
        std::cout << "reply: " << reply.text << "\n"
                  << "tokens: " << reply.usage.input_tokens << " in, " << reply.usage.thought_tokens << " thought, "
                  << reply.usage.output_tokens << " out\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "live_smoke: " << e.what() << "\n";
        return 1;
    }
}
