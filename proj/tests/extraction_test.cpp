#include <gtest/gtest.h>

#include "ledgerlift/digest.hpp"
#include "ledgerlift/extraction.hpp"
#include "test_util.hpp"

using namespace ledgerlift;
using testutil::ScriptedBackend;
using testutil::TempDir;

namespace {

const char* kTwoSegments =
    "### ARCHETYPE: Minor Head\n"
    "1,Data,2039,00,001,,,,Direction,Revenue,Voted,1,2,3,4\n"
    "\n"
    "1,Total,2039,00,,,,,Total 00,,,1,2,3,4\n"
    "### ARCHETYPE: Object Head\n"
    "1,Data,2039,00,001,01,01,059,Salaries,Revenue,Voted,5,6,7,8\n"
    "### TABLE_CONTINUES\n";

std::vector<PageImage> make_pages(const TempDir& dir, int n) {
    std::vector<PageImage> pages;
    for (int i = 1; i <= n; ++i) {
        auto path = dir / ("p" + std::to_string(i) + ".img");
        write_text(path, "image " + std::to_string(i));
        pages.push_back({i, path, 300, Orientation::Portrait});
    }
    return pages;
}

RetryPolicy fast_retry(int attempts = 3) { return {attempts, std::chrono::milliseconds(1)}; }

}  // namespace

TEST(WireFormat, ParsesSegmentsAndKeepsLineIndices) {
    auto page = parse_page_response(3, kTwoSegments, {1, 2, 3});
    ASSERT_EQ(page.segments.size(), 2u);
    EXPECT_EQ(page.segments[0].archetype, Archetype::MinorHead);
    EXPECT_EQ(page.segments[0].lines.size(), 2u);
    EXPECT_EQ(page.segments[0].lines[1].index, 4);  // blank line 3 still counts
    EXPECT_FALSE(page.segments[0].continues);
    EXPECT_EQ(page.segments[1].archetype, Archetype::ObjectHead);
    EXPECT_TRUE(page.segments[1].continues);
    EXPECT_EQ(page.control_lines, (std::vector<int>{1, 5, 7}));
    EXPECT_TRUE(page.quarantine.empty());
    EXPECT_FALSE(page.table_free);
    EXPECT_EQ(page.usage, (TokenUsage{1, 2, 3}));
}

TEST(WireFormat, NoTablesAndQuarantine) {
    EXPECT_TRUE(parse_page_response(1, "NO_TABLES\n").table_free);

    auto page = parse_page_response(2,
                                    "stray line before any header\n"
                                    "### ARCHETYPE: Receipts\n"
                                    "2,Data,1,2\n"
                                    "### ARCHETYPE: Sub Head\n"
                                    "2,Data,2039,00,001,01,,,Thing,Revenue,Voted,1,1,1,1\n"
                                    "### WHATEVER\n"
                                    "under a malformed header\n");
    ASSERT_EQ(page.segments.size(), 1u);
    EXPECT_EQ(page.segments[0].lines.size(), 1u);
    ASSERT_EQ(page.quarantine.size(), 5u);
    EXPECT_EQ(page.quarantine[0].reason, "line outside any segment");
    EXPECT_EQ(page.quarantine[1].index, 2);
    EXPECT_NE(page.quarantine[2].reason.find("Receipts"), std::string::npos);
    EXPECT_EQ(page.quarantine[4].reason, "malformed segment header");
}

TEST(Context, CarriesTailRowsAndOpenTable) {
    auto page = parse_page_response(3, kTwoSegments);
    auto ctx = carry_context(page, 2);
    EXPECT_EQ(ctx.prev_page, 3);
    ASSERT_EQ(ctx.tail_rows.size(), 2u);
    EXPECT_EQ(ctx.tail_rows[1], "1,Data,2039,00,001,01,01,059,Salaries,Revenue,Voted,5,6,7,8");
    ASSERT_TRUE(ctx.open_table.has_value());
    EXPECT_EQ(ctx.open_table->archetype, Archetype::ObjectHead);
    EXPECT_EQ(ctx.open_table->code_path, (std::vector<std::string>{"2039", "00", "001", "01", "01", "059"}));

    EXPECT_EQ(carry_context(page, 50).tail_rows.size(), 3u);
    EXPECT_FALSE(carry_context(parse_page_response(1, "NO_TABLES"), 5).open_table.has_value());
    EXPECT_THROW(carry_context(page, 0), Error);
}

TEST(Context, SerializeParseRoundTrip) {
    auto ctx = carry_context(parse_page_response(3, kTwoSegments), 20);
    EXPECT_EQ(ContextBlock::parse(ctx.serialize()), ctx);
    ContextBlock empty;
    EXPECT_TRUE(empty.empty());
    EXPECT_EQ(ContextBlock::parse(empty.serialize()), empty);
    EXPECT_THROW(ContextBlock::parse("{not json"), Error);
}

TEST(Fixtures, ReplayByTaskAndImageDigest) {
    TempDir dir;
    write_text(dir / "responses/one.txt", "NO_TABLES\n");
    write_text(dir / "responses/meta.txt", "prompt text");
    auto image = testutil::bytes("image 1");
    std::vector<FixtureEntry> entries{{"extract", sha256_hex(image), "responses/one.txt", {10, 20, 30}},
                                      {"meta", sha256_hex(image), "responses/meta.txt", {1, 1, 1}}};
    write_fixture_index(dir.path(), entries);
    auto reread = read_fixture_index(dir.path());
    ASSERT_EQ(reread.size(), 2u);
    EXPECT_EQ(reread[0].usage, (TokenUsage{10, 20, 30}));

    FixtureBackend backend(dir.path());
    auto reply = backend.send({"extract", "anything", image});
    EXPECT_EQ(reply.text, "NO_TABLES\n");
    EXPECT_EQ(reply.usage, (TokenUsage{10, 20, 30}));
    EXPECT_EQ(backend.send({"meta", "x", image}).text, "prompt text");

    try {
        backend.send({"extract", "x", testutil::bytes("other image")});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BackendFailure);
    }
    try {
        FixtureBackend missing(dir / "nope");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
    }
}

TEST(Retry, RetriesBackendFailuresOnly) {
    ScriptedBackend flaky([](const BackendRequest&, int call) -> BackendReply {
        if (call < 2) throw Error(ErrorCode::BackendFailure, "503");
        return {"ok", {}};
    });
    EXPECT_EQ(send_with_retry(flaky, {"extract", "p", std::nullopt}, fast_retry()).text, "ok");
    EXPECT_EQ(flaky.calls, 3);

    ScriptedBackend dead([](const BackendRequest&, int) -> BackendReply {
        throw Error(ErrorCode::BackendFailure, "503");
    });
    try {
        send_with_retry(dead, {"extract", "p", std::nullopt}, fast_retry());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BackendFailure);
    }
    EXPECT_EQ(dead.calls, 3);

    ScriptedBackend broken([](const BackendRequest&, int) -> BackendReply {
        throw Error(ErrorCode::InvalidArgument, "bad request");
    });
    EXPECT_THROW(send_with_retry(broken, {"extract", "p", std::nullopt}, fast_retry()), Error);
    EXPECT_EQ(broken.calls, 1);
}

TEST(Retry, BackoffDoubles) {
    ScriptedBackend dead([](const BackendRequest&, int) -> BackendReply {
        throw Error(ErrorCode::BackendFailure, "timeout");
    });
    auto start = std::chrono::steady_clock::now();
    EXPECT_THROW(send_with_retry(dead, {"extract", "p", std::nullopt}, {3, std::chrono::milliseconds(20)}), Error);
    // 20 ms after the first failure, 40 ms after the second.
    EXPECT_GE(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(60));
}

TEST(Extraction, SequentialContextFromPreviousPageOnly) {
    TempDir dir;
    auto pages = make_pages(dir, 3);
    ScriptedBackend backend([](const BackendRequest&, int call) -> BackendReply {
        std::string row = std::to_string(call + 1) + ",Data,2039,00,00" + std::to_string(call + 1) +
                          ",,,,Row from page " + std::to_string(call + 1) + ",Revenue,Voted,1,1,1,1\n";
        return {"### ARCHETYPE: Minor Head\n" + row + "### TABLE_CONTINUES\n", {100, 10, 1}};
    });
    auto run = extract_document(pages, "PROMPT", backend, 1, fast_retry());
    ASSERT_EQ(run.pages.size(), 3u);
    EXPECT_EQ(run.total, (TokenUsage{300, 30, 3}));
    ASSERT_EQ(backend.requests.size(), 3u);
    EXPECT_NE(backend.requests[0].prompt.find("first page"), std::string::npos);
    EXPECT_NE(backend.requests[1].prompt.find("Row from page 1"), std::string::npos);
    EXPECT_NE(backend.requests[2].prompt.find("Row from page 2"), std::string::npos);
    EXPECT_EQ(backend.requests[2].prompt.find("Row from page 1"), std::string::npos);
    EXPECT_EQ(*backend.requests[1].image, testutil::bytes("image 2"));
    EXPECT_EQ(backend.requests[0].task, "extract");
}

TEST(Extraction, FailingPageHaltsWithPageNumber) {
    TempDir dir;
    auto pages = make_pages(dir, 3);
    ScriptedBackend backend([](const BackendRequest& r, int) -> BackendReply {
        if (r.prompt.find("Page number: 2") != std::string::npos) throw Error(ErrorCode::BackendFailure, "down");
        return {"NO_TABLES", {}};
    });
    std::vector<int> seen;
    try {
        extract_document(pages, "PROMPT", backend, 5, fast_retry(2),
                         [&](const RawPageExtract& p) { seen.push_back(p.page); });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BackendFailure);
        EXPECT_NE(std::string(e.what()).find("page 2"), std::string::npos);
    }
    EXPECT_EQ(seen, std::vector<int>{1});
    EXPECT_THROW(extract_page(pages[0], {}, "  ", backend), Error);
}

TEST(MetaPrompt, StaticPromptIsComplete) {
    EXPECT_TRUE(missing_prompt_terms(static_extraction_prompt()).empty());
    auto missing = missing_prompt_terms("Only Object Head and Description");
    EXPECT_EQ(missing.size(), 5u + 15u - 2u);
    EXPECT_FALSE(default_document_structure().empty());
}

TEST(MetaPrompt, RefinesAcrossSamplePages) {
    TempDir dir;
    auto pages = make_pages(dir, 2);
    ScriptedBackend backend([](const BackendRequest& r, int call) -> BackendReply {
        EXPECT_EQ(r.task, "meta");
        if (call == 1) EXPECT_NE(r.prompt.find("DRAFT-1"), std::string::npos);
        return {call == 0 ? std::string("DRAFT-1") : std::string(static_extraction_prompt()), {7, 8, 9}};
    });
    auto generated = generate_extraction_prompt("profile", kAllArchetypes, pages, backend, fast_retry());
    EXPECT_FALSE(generated.fallback);
    EXPECT_EQ(generated.text, static_extraction_prompt());
    EXPECT_EQ(generated.usage, (TokenUsage{14, 16, 18}));
}

TEST(MetaPrompt, IncompleteDraftFallsBackToStaticPrompt) {
    TempDir dir;
    auto pages = make_pages(dir, 1);
    ScriptedBackend backend([](const BackendRequest&, int) -> BackendReply { return {"Extract the tables.", {}}; });
    auto generated = generate_extraction_prompt("profile", kAllArchetypes, pages, backend, fast_retry());
    EXPECT_TRUE(generated.fallback);
    EXPECT_EQ(generated.error, ErrorCode::IncompletePrompt);
    EXPECT_EQ(generated.text, static_extraction_prompt());
    EXPECT_NE(generated.warning.find("Object_Head"), std::string::npos);

    std::vector<Archetype> partial{Archetype::ObjectHead};
    EXPECT_THROW(generate_extraction_prompt("p", partial, pages, backend), Error);
    EXPECT_THROW(generate_extraction_prompt("p", kAllArchetypes, {}, backend), Error);
}

TEST(Persistence, JsonLinesRoundTrip) {
    TempDir dir;
    std::vector<RawPageExtract> pages{parse_page_response(1, kTwoSegments, {1, 2, 3}),
                                      parse_page_response(2, "NO_TABLES"),
                                      parse_page_response(3, "junk\n### ARCHETYPE: Minor Head\n3,Data\n")};
    write_raw_extracts(dir / "raw.jsonl", pages);
    EXPECT_EQ(read_raw_extracts(dir / "raw.jsonl"), pages);
}

TEST(Usage, AccumulatesComponentwise) {
    std::vector<TokenUsage> u{{1, 2, 3}, {10, 20, 30}, {100, 200, 300}};
    EXPECT_EQ(accumulate_usage(u), (TokenUsage{111, 222, 333}));
    EXPECT_EQ(accumulate_usage({}), TokenUsage{});
}
