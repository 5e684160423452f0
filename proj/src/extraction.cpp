#include "ledgerlift/extraction.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <thread>

#include "ledgerlift/assets.hpp"
#include "ledgerlift/csv.hpp"
#include "ledgerlift/digest.hpp"
#include "ledgerlift/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ledgerlift {

TokenUsage accumulate_usage(std::span<const TokenUsage> usages) {
    TokenUsage total;
    for (const auto& u : usages) total += u;
    return total;
}

// ---------------------------------------------------------------------------

void write_fixture_index(const fs::path& dir, std::span<const FixtureEntry> entries) {
    std::ostringstream out;
    for (const auto& e : entries) {
        out << e.task << '\t' << e.image_digest << '\t' << e.response_file << '\t'
            << e.usage.input_tokens << '\t' << e.usage.thought_tokens << '\t'
            << e.usage.output_tokens << '\n';
    }
    write_text(dir / kFixtureIndexName, out.str());
}

std::vector<FixtureEntry> read_fixture_index(const fs::path& dir) {
    auto index = dir / kFixtureIndexName;
    if (!fs::is_regular_file(index)) throw Error(ErrorCode::FileNotFound, index.string());
    std::vector<FixtureEntry> entries;
    int line_no = 0;
    for (const auto& line : text::split_lines(read_text(index))) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        std::vector<std::string> cols;
        std::istringstream ss(line);
        for (std::string col; std::getline(ss, col, '\t');) cols.push_back(col);
        if (cols.size() != 6)
            throw Error(ErrorCode::InvalidArgument,
                        index.string() + ":" + std::to_string(line_no) + ": expected 6 fields");
        FixtureEntry e{cols[0], cols[1], cols[2], {}};
        try {
            e.usage = {std::stoll(cols[3]), std::stoll(cols[4]), std::stoll(cols[5])};
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument,
                        index.string() + ":" + std::to_string(line_no) + ": bad token count");
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

FixtureBackend::FixtureBackend(fs::path dir) : dir_(std::move(dir)) {
    if (!fs::is_directory(dir_)) throw Error(ErrorCode::FileNotFound, "fixtures dir " + dir_.string());
    for (auto& e : read_fixture_index(dir_)) {
        auto key = std::make_pair(e.task, e.image_digest);
        entries_[key] = std::move(e);
    }
}

BackendReply FixtureBackend::send(const BackendRequest& request) {
    std::string digest = request.image ? sha256_hex(*request.image) : "-";
    auto it = entries_.find({request.task, digest});
    if (it == entries_.end())
        throw Error(ErrorCode::BackendFailure,
                    "no fixture for task '" + request.task + "' image " + digest);
    return {read_text(dir_ / it->second.response_file), it->second.usage};
}

BackendReply send_with_retry(BackendAdapter& backend, const BackendRequest& request,
                             const RetryPolicy& policy) {
    int attempts = std::max(1, policy.attempts);
    std::string last_error;
    for (int k = 1; k <= attempts; ++k) {
        try {
            return backend.send(request);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BackendFailure) throw;
            last_error = e.what();
        }
        if (k < attempts && policy.base_delay.count() > 0)
            std::this_thread::sleep_for(policy.base_delay * (1 << (k - 1)));
    }
    throw Error(ErrorCode::BackendFailure, backend.name() + " failed after " +
                                               std::to_string(attempts) + " attempts: " + last_error);
}

// ---------------------------------------------------------------------------

RawPageExtract parse_page_response(int page, std::string_view response, TokenUsage usage) {
    RawPageExtract out;
    out.page = page;
    out.usage = usage;

    enum class State { Outside, InSegment, Rejected };
    State state = State::Outside;
    std::string reject_reason;

    auto lines = text::split_lines(response);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        int index = static_cast<int>(i + 1);
        const std::string& raw = lines[i];
        auto line = text::trim(raw);
        if (line.empty()) continue;

        if (line == kNoTables) {
            out.table_free = true;
            out.control_lines.push_back(index);
            continue;
        }
        if (line.rfind(kSegmentHeader, 0) == 0) {
            auto name = line.substr(kSegmentHeader.size());
            if (auto a = archetype_from_name(name)) {
                out.segments.push_back({*a, {}, false});
                out.control_lines.push_back(index);
                state = State::InSegment;
            } else {
                reject_reason = "unknown archetype '" + std::string(text::trim(name)) + "'";
                out.quarantine.push_back({page, index, raw, reject_reason});
                state = State::Rejected;
            }
            continue;
        }
        if (line == kContinuesMarker && state == State::InSegment) {
            out.segments.back().continues = true;
            out.control_lines.push_back(index);
            continue;
        }
        if (line.rfind("###", 0) == 0) {
            reject_reason = "malformed segment header";
            out.quarantine.push_back({page, index, raw, reject_reason});
            state = State::Rejected;
            continue;
        }
        switch (state) {
            case State::InSegment: out.segments.back().lines.push_back({index, raw}); break;
            case State::Rejected: out.quarantine.push_back({page, index, raw, reject_reason}); break;
            case State::Outside:
                out.quarantine.push_back({page, index, raw, "line outside any segment"});
                break;
        }
    }
    if (!out.segments.empty()) out.table_free = false;
    return out;
}

// ---------------------------------------------------------------------------

std::string ContextBlock::serialize() const {
    json j;
    j["prev_page"] = prev_page;
    j["tail_rows"] = tail_rows;
    if (open_table) {
        j["open_table"] = {{"archetype", archetype_name(open_table->archetype)},
                           {"code_path", open_table->code_path}};
    } else {
        j["open_table"] = nullptr;
    }
    return j.dump(2);
}

ContextBlock ContextBlock::parse(std::string_view serialized) {
    ContextBlock block;
    try {
        auto j = json::parse(serialized);
        block.prev_page = j.at("prev_page").get<int>();
        block.tail_rows = j.at("tail_rows").get<std::vector<std::string>>();
        const auto& ot = j.at("open_table");
        if (!ot.is_null()) {
            auto a = archetype_from_name(ot.at("archetype").get<std::string>());
            if (!a) throw Error(ErrorCode::InvalidArgument, "unknown archetype in context");
            block.open_table = OpenTable{*a, ot.at("code_path").get<std::vector<std::string>>()};
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("context block: ") + e.what());
    }
    return block;
}

ContextBlock carry_context(const RawPageExtract& prev, std::size_t limit) {
    if (limit < 1) throw Error(ErrorCode::InvalidArgument, "context row limit must be at least 1");
    ContextBlock block;
    block.prev_page = prev.page;

    std::vector<const RawLine*> all;
    for (const auto& seg : prev.segments)
        for (const auto& l : seg.lines) all.push_back(&l);
    std::size_t keep = std::min(limit, all.size());
    for (std::size_t i = all.size() - keep; i < all.size(); ++i) block.tail_rows.push_back(all[i]->text);

    if (!prev.segments.empty() && prev.segments.back().continues) {
        const auto& seg = prev.segments.back();
        OpenTable open{seg.archetype, {}};
        if (!seg.lines.empty()) {
            auto cells = csv::split_line(seg.lines.back().text);
            for (std::size_t c = kFirstLevelCol; c < kFirstLevelCol + 6 && c < cells.size(); ++c) {
                auto code = text::trim(cells[c]);
                if (code.empty() || !is_numeric_token(code)) break;
                open.code_path.emplace_back(code);
            }
        }
        block.open_table = std::move(open);
    }
    return block;
}

std::string build_page_prompt(std::string_view extraction_prompt, const ContextBlock& context,
                              const PageImage& image) {
    std::ostringstream out;
    out << extraction_prompt << "\n\n## Current page\nPage number: " << image.page_number
        << " (" << to_string(image.orientation) << ")\n\n## Context from the previous page\n";
    if (context.empty()) out << "None. This is the first page of the document.\n";
    else out << context.serialize() << "\n";
    return out.str();
}

RawPageExtract extract_page(const PageImage& image, const ContextBlock& context,
                            std::string_view prompt, BackendAdapter& backend, const RetryPolicy& retry) {
    if (text::trim(prompt).empty()) throw Error(ErrorCode::InvalidArgument, "extraction prompt is empty");
    BackendRequest request{std::string(kTaskExtract), build_page_prompt(prompt, context, image),
                           read_binary(image.image_path)};
    auto reply = send_with_retry(backend, request, retry);
    return parse_page_response(image.page_number, reply.text, reply.usage);
}

ExtractionRun extract_document(std::span<const PageImage> pages, std::string_view prompt,
                               BackendAdapter& backend, std::size_t context_rows,
                               const RetryPolicy& retry,
                               const std::function<void(const RawPageExtract&)>& on_page) {
    ExtractionRun run;
    ContextBlock context;
    for (const auto& page : pages) {
        RawPageExtract extract;
        try {
            extract = extract_page(page, context, prompt, backend, retry);
        } catch (const Error& e) {
            throw e.within("page " + std::to_string(page.page_number));
        }
        context = carry_context(extract, context_rows);
        run.total += extract.usage;
        if (on_page) on_page(extract);
        run.pages.push_back(std::move(extract));
    }
    return run;
}

// ---------------------------------------------------------------------------

std::string_view static_extraction_prompt() { return assets::kStaticPrompt; }
std::string_view default_document_structure() { return assets::kDocumentStructure; }

std::vector<std::string> missing_prompt_terms(std::string_view prompt) {
    std::vector<std::string> missing;
    for (auto a : kAllArchetypes) {
        if (prompt.find(archetype_name(a)) == std::string_view::npos)
            missing.emplace_back(archetype_name(a));
    }
    for (auto col : kColumns) {
        if (prompt.find(col) == std::string_view::npos) missing.emplace_back(col);
    }
    return missing;
}

namespace {

std::string meta_prompt(std::string_view doc_profile, std::span<const Archetype> schemas,
                        std::string_view draft) {
    std::ostringstream out;
    out << "You are preparing instructions for a model that will read scanned pages of a "
           "government fiscal document one page at a time and transcribe every table row "
           "into CSV.\n\n## Document structure\n"
        << doc_profile << "\n\n## CSV schemas\nEvery table belongs to one of these archetypes:\n";
    for (auto a : schemas)
        out << "- " << archetype_name(a) << " (deepest level: depth " << archetype_depth(a) << ")\n";
    out << "\nAll archetypes share this header line:\n" << table_header_line()
        << "\nLevel columns deeper than the archetype stay empty. Row_Type is Header, Data or "
           "Total.\n\n## Response format required from the extraction model\n"
        << "Each table segment starts with a line `" << kSegmentHeader
        << " <archetype name>`, followed by CSV lines. A segment whose table continues on the "
           "next page ends with `"
        << kContinuesMarker << "`. A page without tables is answered with `" << kNoTables
        << "`.\n\n## Task\nUsing the attached sample page, write the complete extraction prompt. "
           "It must name every archetype and every column listed above.\n";
    if (!draft.empty()) out << "\n## Current draft\nRefine this draft:\n" << draft << "\n";
    return out.str();
}

}  // namespace

GeneratedPrompt generate_extraction_prompt(std::string_view doc_profile, std::span<const Archetype> schemas,
                                           std::span<const PageImage> sample_pages,
                                           BackendAdapter& backend, const RetryPolicy& retry) {
    if (sample_pages.empty()) throw Error(ErrorCode::InvalidArgument, "at least one sample page is required");
    for (auto a : kAllArchetypes) {
        if (std::find(schemas.begin(), schemas.end(), a) == schemas.end())
            throw Error(ErrorCode::InvalidArgument,
                        "schema set must include " + std::string(archetype_name(a)));
    }

    GeneratedPrompt result;
    std::string draft;
    for (const auto& page : sample_pages) {
        BackendRequest request{std::string(kTaskMeta), meta_prompt(doc_profile, schemas, draft),
                               read_binary(page.image_path)};
        auto reply = send_with_retry(backend, request, retry);
        result.usage += reply.usage;
        draft = reply.text;
    }

    auto missing = missing_prompt_terms(draft);
    if (missing.empty()) {
        result.text = draft;
        return result;
    }
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    result.text = std::string(static_extraction_prompt());
    result.fallback = true;
    result.error = ErrorCode::IncompletePrompt;
    result.warning = "generated prompt omits: " + list + "; using the static prompt";
    return result;
}

// ---------------------------------------------------------------------------

std::string to_json_line(const RawPageExtract& e) {
    json j;
    j["page"] = e.page;
    j["table_free"] = e.table_free;
    j["usage"] = {{"input_tokens", e.usage.input_tokens},
                  {"thought_tokens", e.usage.thought_tokens},
                  {"output_tokens", e.usage.output_tokens}};
    j["segments"] = json::array();
    for (const auto& s : e.segments) {
        json lines = json::array();
        for (const auto& l : s.lines) lines.push_back({l.index, l.text});
        j["segments"].push_back(
            {{"archetype", archetype_name(s.archetype)}, {"continues", s.continues}, {"lines", lines}});
    }
    j["control_lines"] = e.control_lines;
    j["quarantine"] = json::array();
    for (const auto& q : e.quarantine)
        j["quarantine"].push_back({{"line", q.index}, {"text", q.text}, {"reason", q.reason}});
    return j.dump();
}

RawPageExtract raw_extract_from_json(std::string_view line) {
    RawPageExtract e;
    try {
        auto j = json::parse(line);
        e.page = j.at("page").get<int>();
        e.table_free = j.at("table_free").get<bool>();
        const auto& u = j.at("usage");
        e.usage = {u.at("input_tokens").get<std::int64_t>(), u.at("thought_tokens").get<std::int64_t>(),
                   u.at("output_tokens").get<std::int64_t>()};
        for (const auto& s : j.at("segments")) {
            auto a = archetype_from_name(s.at("archetype").get<std::string>());
            if (!a) throw Error(ErrorCode::SegmentParseError, "unknown archetype in stored extract");
            Segment seg{*a, {}, s.at("continues").get<bool>()};
            for (const auto& l : s.at("lines")) seg.lines.push_back({l.at(0).get<int>(), l.at(1).get<std::string>()});
            e.segments.push_back(std::move(seg));
        }
        e.control_lines = j.at("control_lines").get<std::vector<int>>();
        for (const auto& q : j.at("quarantine"))
            e.quarantine.push_back({e.page, q.at("line").get<int>(), q.at("text").get<std::string>(),
                                    q.at("reason").get<std::string>()});
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::InvalidArgument, std::string("stored extract: ") + ex.what());
    }
    return e;
}

void write_raw_extracts(const fs::path& path, std::span<const RawPageExtract> pages) {
    std::string out;
    for (const auto& p : pages) out += to_json_line(p) + "\n";
    write_text(path, out);
}

std::vector<RawPageExtract> read_raw_extracts(const fs::path& path) {
    std::vector<RawPageExtract> pages;
    for (const auto& line : text::split_lines(read_text(path))) {
        if (text::trim(line).empty()) continue;
        pages.push_back(raw_extract_from_json(line));
    }
    return pages;
}

}  // namespace ledgerlift
