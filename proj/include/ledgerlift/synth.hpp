#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ledgerlift/core.hpp"
#include "ledgerlift/extraction.hpp"
#include "ledgerlift/validation.hpp"

namespace ledgerlift {

struct CorpusSpec {
    std::uint64_t seed = 7;
    int major_heads = 3;
    int fanout_min = 2;
    int fanout_max = 3;
    int pages = 200;
    UnitContext unit{UnitScale::Lakh};
    int sample_pages = 2;                    // pages answered by meta fixtures
    std::optional<TokenUsage> usage_target;  // split exactly across all fixture entries
};

void validate_spec(const CorpusSpec& spec);

struct Corpus {
    CorpusSpec spec;
    TableSet tables;                         // ground truth, page/line set
    std::vector<std::string> responses;      // page k at index k-1
    std::vector<std::vector<std::byte>> images;
    std::vector<TokenUsage> page_usage;
    std::vector<std::string> meta_responses;  // one per sample page
    std::vector<TokenUsage> meta_usage;
};

Corpus generate_corpus(const CorpusSpec& spec);

enum class ErrorKind { DigitPerturb, DescriptionSplit, MissingCodeCell, HeaderNoise };
std::string_view to_string(ErrorKind kind);
ErrorKind error_kind_from_name(std::string_view name);

struct LedgerEntry {
    int page = 0;
    int line = 0;  // in the corrupted response
    ErrorKind kind = ErrorKind::DigitPerturb;
    std::string original;  // empty for an inserted line
    std::string corrupted;
    friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

struct Injection {
    std::vector<std::string> responses;
    std::vector<LedgerEntry> ledger;  // sorted by (page, line)
};

// Kinds are dealt round-robin; targets are distinct rows.
// Throws InsufficientTargets when a kind runs out of eligible rows.
Injection inject_errors(std::span<const std::string> responses, std::span<const ErrorKind> kinds, int count,
                        std::uint64_t seed);

std::string render_ledger(std::span<const LedgerEntry> ledger);
std::vector<LedgerEntry> parse_ledger(std::string_view csv_text);

// tables/, pages/ (+ manifest.tsv), fixtures/ (+ index.tsv), ledger.csv.
// With an injection, fixtures replay the corrupted responses.
void write_corpus(const Corpus& corpus, const std::filesystem::path& out, const Injection* injection = nullptr);

}  // namespace ledgerlift
