#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ledgerlift/core.hpp"
#include "ledgerlift/ingest.hpp"

namespace ledgerlift {

struct TokenUsage {
    std::int64_t input_tokens = 0;
    std::int64_t thought_tokens = 0;
    std::int64_t output_tokens = 0;

    TokenUsage& operator+=(const TokenUsage& o) {
        input_tokens += o.input_tokens;
        thought_tokens += o.thought_tokens;
        output_tokens += o.output_tokens;
        return *this;
    }
    friend TokenUsage operator+(TokenUsage a, const TokenUsage& b) { return a += b; }
    friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

TokenUsage accumulate_usage(std::span<const TokenUsage> usages);

// ---------------------------------------------------------------------------
// Backends

inline constexpr std::string_view kTaskExtract = "extract";
inline constexpr std::string_view kTaskMeta = "meta";

struct BackendRequest {
    std::string task;  // kTaskExtract or kTaskMeta
    std::string prompt;
    std::optional<std::vector<std::byte>> image;
};

struct BackendReply {
    std::string text;
    TokenUsage usage;
};

// One request carries prompt text plus at most one page image. Transient
// failures are reported as Error{BackendFailure}.
class BackendAdapter {
public:
    virtual ~BackendAdapter() = default;
    virtual std::string name() const = 0;
    virtual BackendReply send(const BackendRequest& request) = 0;
};

inline constexpr const char* kFixtureIndexName = "index.tsv";

// index.tsv line: task<TAB>image_sha256|-<TAB>response_file<TAB>input<TAB>thought<TAB>output
struct FixtureEntry {
    std::string task;
    std::string image_digest;  // "-" for text-only requests
    std::string response_file;
    TokenUsage usage;
};

void write_fixture_index(const std::filesystem::path& dir, std::span<const FixtureEntry> entries);
std::vector<FixtureEntry> read_fixture_index(const std::filesystem::path& dir);

// Replays canned responses keyed by (task, image digest).
class FixtureBackend final : public BackendAdapter {
public:
    explicit FixtureBackend(std::filesystem::path dir);

    std::string name() const override { return "fixture"; }
    BackendReply send(const BackendRequest& request) override;

private:
    std::filesystem::path dir_;
    std::map<std::pair<std::string, std::string>, FixtureEntry> entries_;
};

struct RetryPolicy {
    int attempts = 3;
    std::chrono::milliseconds base_delay{1000};
};

// Exponential backoff: waits base_delay * 2^(k-1) after the k-th failure.
BackendReply send_with_retry(BackendAdapter& backend, const BackendRequest& request,
                             const RetryPolicy& policy);

// ---------------------------------------------------------------------------
// Wire format of page responses

inline constexpr std::string_view kSegmentHeader = "### ARCHETYPE:";
inline constexpr std::string_view kContinuesMarker = "### TABLE_CONTINUES";
inline constexpr std::string_view kNoTables = "NO_TABLES";

struct RawLine {
    int index = 0;  // 1-based line number in the page response
    std::string text;
    friend bool operator==(const RawLine&, const RawLine&) = default;
};

struct Segment {
    Archetype archetype = Archetype::ObjectHead;
    std::vector<RawLine> lines;
    bool continues = false;  // table runs on past the end of the page
    friend bool operator==(const Segment&, const Segment&) = default;
};

struct QuarantinedLine {
    int page = 0;
    int index = 0;
    std::string text;
    std::string reason;
    friend bool operator==(const QuarantinedLine&, const QuarantinedLine&) = default;
};

struct RawPageExtract {
    int page = 0;
    std::vector<Segment> segments;
    TokenUsage usage;
    bool table_free = false;
    std::vector<int> control_lines;  // headers, markers and NO_TABLES
    std::vector<QuarantinedLine> quarantine;

    friend bool operator==(const RawPageExtract&, const RawPageExtract&) = default;
};

// Splits a response into archetype-tagged segments. Lines under an unknown or
// malformed header, and lines outside any segment, go to quarantine.
RawPageExtract parse_page_response(int page, std::string_view response, TokenUsage usage = {});

// ---------------------------------------------------------------------------
// Sequential context

struct OpenTable {
    Archetype archetype = Archetype::ObjectHead;
    std::vector<std::string> code_path;
    friend bool operator==(const OpenTable&, const OpenTable&) = default;
};

struct ContextBlock {
    int prev_page = 0;  // 0 before the first page
    std::vector<std::string> tail_rows;
    std::optional<OpenTable> open_table;

    bool empty() const { return prev_page == 0 && tail_rows.empty() && !open_table; }
    std::string serialize() const;
    static ContextBlock parse(std::string_view serialized);

    friend bool operator==(const ContextBlock&, const ContextBlock&) = default;
};

inline constexpr std::size_t kDefaultContextRows = 20;

ContextBlock carry_context(const RawPageExtract& prev, std::size_t limit);

std::string build_page_prompt(std::string_view extraction_prompt, const ContextBlock& context,
                              const PageImage& image);

RawPageExtract extract_page(const PageImage& image, const ContextBlock& context,
                            std::string_view prompt, BackendAdapter& backend,
                            const RetryPolicy& retry = {});

struct ExtractionRun {
    std::vector<RawPageExtract> pages;
    TokenUsage total;
};

// Strictly sequential; page k sees only context derived from page k-1.
// A page that still fails after retries halts the run.
ExtractionRun extract_document(std::span<const PageImage> pages, std::string_view prompt,
                               BackendAdapter& backend, std::size_t context_rows,
                               const RetryPolicy& retry = {},
                               const std::function<void(const RawPageExtract&)>& on_page = {});

// ---------------------------------------------------------------------------
// Meta-prompting

std::string_view static_extraction_prompt();
std::string_view default_document_structure();

// Archetype display names and column names absent from `prompt`.
std::vector<std::string> missing_prompt_terms(std::string_view prompt);

struct GeneratedPrompt {
    std::string text;
    bool fallback = false;
    std::optional<ErrorCode> error;  // IncompletePrompt when the fallback was used
    std::string warning;
    TokenUsage usage;
};

// Asks the backend to write the extraction prompt from the document profile,
// the archetype schemas and sample pages (one request per page, each refining
// the previous draft).
GeneratedPrompt generate_extraction_prompt(std::string_view doc_profile,
                                           std::span<const Archetype> schemas,
                                           std::span<const PageImage> sample_pages,
                                           BackendAdapter& backend, const RetryPolicy& retry = {});

// ---------------------------------------------------------------------------
// Persistence: one JSON object per line.

std::string to_json_line(const RawPageExtract& extract);
RawPageExtract raw_extract_from_json(std::string_view line);
void write_raw_extracts(const std::filesystem::path& path, std::span<const RawPageExtract> pages);
std::vector<RawPageExtract> read_raw_extracts(const std::filesystem::path& path);

}  // namespace ledgerlift
