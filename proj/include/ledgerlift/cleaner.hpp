#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ledgerlift/core.hpp"
#include "ledgerlift/extraction.hpp"

namespace ledgerlift {

enum class RepairKind { None, MergeDescription, InsertEmptyCode, DropHeaderLine };
std::string_view to_string(RepairKind kind);

struct RepairAction {
    int page = 0;
    int raw_line_index = 0;
    RepairKind kind = RepairKind::None;
    std::string detail;

    friend bool operator==(const RepairAction&, const RepairAction&) = default;
};

// Works on the archetype column positions: cell 0 is the page, cell 1 the row
// type, content starts at cell 2. Total when the first text cell starts with
// "Total"; Header when no content cell is numeric (so no level code either).
RowKind classify_row(std::span<const std::string> fields);

struct RealignResult {
    std::vector<std::string> fields;
    RepairKind kind = RepairKind::None;
    std::string detail;
};

// Repairs the modeled misalignments: a description spilled across adjacent
// text cells (leftmost pair merged first) and a Total row that lost one empty
// level cell. Numeric cells are never merged or dropped. Throws
// Error{Unrepairable} when no modeled repair gives the archetype width.
RealignResult realign_row(std::span<const std::string> fields, Archetype archetype);

struct CleanRow {
    Archetype archetype = Archetype::ObjectHead;
    ExtractedRow row;
    RepairAction action;

    friend bool operator==(const CleanRow&, const CleanRow&) = default;
};

struct CleanResult {
    std::vector<CleanRow> rows;            // source order
    std::vector<RepairAction> log;         // every action other than None
    std::vector<QuarantinedLine> quarantine;

    std::vector<ExtractedRow> rows_for(Archetype archetype) const;
    void append(CleanResult other);
};

CleanResult clean_table(const RawPageExtract& raw, UnitContext unit);
CleanResult clean_pages(std::span<const RawPageExtract> pages, UnitContext unit);

// Re-serializes cleaned rows in the wire layout (base unit, original line
// numbers), one extract per page.
std::vector<RawPageExtract> to_raw_extracts(std::span<const CleanRow> rows);

// Archetype table files: the shared header, then one line per row in base
// units. Row provenance (page, line) goes to a sidecar `<name>.sources.tsv`.
std::string render_table(std::span<const ExtractedRow> rows);
void write_table(const std::filesystem::path& csv_path, std::span<const ExtractedRow> rows);
std::vector<ExtractedRow> read_table(const std::filesystem::path& csv_path, Archetype archetype);
std::filesystem::path table_path(const std::filesystem::path& dir, Archetype archetype);

std::string render_repair_log(std::span<const RepairAction> log);
std::string render_quarantine(std::span<const QuarantinedLine> lines);

}  // namespace ledgerlift
