#include "ledgerlift/cleaner.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ledgerlift/csv.hpp"
#include "ledgerlift/digest.hpp"
#include "ledgerlift/text.hpp"

namespace fs = std::filesystem;

namespace ledgerlift {

std::string_view to_string(RepairKind kind) {
    switch (kind) {
        case RepairKind::None: return "None";
        case RepairKind::MergeDescription: return "MergeDescription";
        case RepairKind::InsertEmptyCode: return "InsertEmptyCode";
        case RepairKind::DropHeaderLine: return "DropHeaderLine";
    }
    return "None";
}

namespace {

bool is_text_cell(std::string_view cell) {
    auto t = text::trim(cell);
    return !t.empty() && !is_numeric_token(t);
}

bool is_number_cell(std::string_view cell) {
    auto t = text::trim(cell);
    return !t.empty() && is_numeric_token(t);
}

}  // namespace

RowKind classify_row(std::span<const std::string> fields) {
    bool any_number = false;
    std::string_view first_text;
    for (std::size_t i = kFirstLevelCol; i < fields.size(); ++i) {
        if (is_number_cell(fields[i])) any_number = true;
        else if (first_text.empty() && is_text_cell(fields[i])) first_text = text::trim(fields[i]);
    }
    if (text::istarts_with(first_text, "total")) return RowKind::Total;
    if (!any_number) return RowKind::Header;
    return RowKind::Data;
}

RealignResult realign_row(std::span<const std::string> fields, Archetype archetype) {
    RealignResult out{std::vector<std::string>(fields.begin(), fields.end()), RepairKind::None, {}};
    auto& cells = out.fields;
    const std::size_t width = column_layout(archetype).size();

    if (cells.size() > width) {
        std::vector<std::string> merged;
        while (cells.size() > width) {
            std::size_t at = cells.size();
            for (std::size_t i = kFirstLevelCol; i + 1 < cells.size(); ++i) {
                if (is_text_cell(cells[i]) && is_text_cell(cells[i + 1])) {
                    at = i;
                    break;
                }
            }
            if (at == cells.size())
                throw Error(ErrorCode::Unrepairable,
                            std::to_string(cells.size()) + " fields and no adjacent text cells to merge");
            cells[at] = std::string(text::trim(cells[at])) + " " + std::string(text::trim(cells[at + 1]));
            cells.erase(cells.begin() + static_cast<long>(at) + 1);
            merged.push_back(std::to_string(at) + "+" + std::to_string(at + 1));
        }
        out.kind = RepairKind::MergeDescription;
        out.detail = "merged cells";
        for (const auto& m : merged) out.detail += " " + m;
        return out;
    }

    if (cells.size() + 1 == width && classify_row(cells) == RowKind::Total) {
        std::size_t codes = 0;
        while (kFirstLevelCol + codes < cells.size() && codes < 6 &&
               is_number_cell(cells[kFirstLevelCol + codes]))
            ++codes;
        if (codes == 0 || codes >= 6)
            throw Error(ErrorCode::Unrepairable, "total row has no missing level cell to restore");
        std::size_t at = kFirstLevelCol + codes;
        cells.insert(cells.begin() + static_cast<long>(at), std::string());
        out.kind = RepairKind::InsertEmptyCode;
        out.detail = "inserted empty " + std::string(level_column(level_at_depth(static_cast<int>(codes) + 1)));
        return out;
    }

    if (cells.size() != width)
        throw Error(ErrorCode::Unrepairable, std::to_string(cells.size()) + " fields, expected " +
                                                 std::to_string(width));
    return out;
}

std::vector<ExtractedRow> CleanResult::rows_for(Archetype archetype) const {
    std::vector<ExtractedRow> out;
    for (const auto& r : rows)
        if (r.archetype == archetype) out.push_back(r.row);
    return out;
}

void CleanResult::append(CleanResult other) {
    std::move(other.rows.begin(), other.rows.end(), std::back_inserter(rows));
    std::move(other.log.begin(), other.log.end(), std::back_inserter(log));
    std::move(other.quarantine.begin(), other.quarantine.end(), std::back_inserter(quarantine));
}

CleanResult clean_table(const RawPageExtract& raw, UnitContext unit) {
    CleanResult out;
    for (const auto& segment : raw.segments) {
        for (const auto& line : segment.lines) {
            auto fields = csv::split_line(line.text);
            if (classify_row(fields) == RowKind::Header) {
                out.log.push_back({raw.page, line.index, RepairKind::DropHeaderLine,
                                   "dropped header: " + std::string(text::trim(line.text))});
                continue;
            }
            RealignResult fixed;
            try {
                fixed = realign_row(fields, segment.archetype);
            } catch (const Error& e) {
                out.quarantine.push_back({raw.page, line.index, line.text, e.what()});
                continue;
            }
            fixed.fields[kPageCol] = std::to_string(raw.page);
            fixed.fields[kRowTypeCol] = std::string(to_string(classify_row(fixed.fields)));
            try {
                ExtractedRow row = parse_row(fixed.fields, segment.archetype, raw.page, unit);
                row.line = line.index;
                RepairAction action{raw.page, line.index, fixed.kind, fixed.detail};
                if (action.kind != RepairKind::None) out.log.push_back(action);
                out.rows.push_back({segment.archetype, std::move(row), std::move(action)});
            } catch (const Error& e) {
                out.quarantine.push_back({raw.page, line.index, line.text, e.what()});
            }
        }
    }
    return out;
}

CleanResult clean_pages(std::span<const RawPageExtract> pages, UnitContext unit) {
    CleanResult out;
    for (const auto& p : pages) out.append(clean_table(p, unit));
    return out;
}

std::vector<RawPageExtract> to_raw_extracts(std::span<const CleanRow> rows) {
    std::vector<RawPageExtract> pages;
    for (const auto& r : rows) {
        if (pages.empty() || pages.back().page != r.row.page) {
            pages.emplace_back();
            pages.back().page = r.row.page;
        }
        auto& page = pages.back();
        if (page.segments.empty() || page.segments.back().archetype != r.archetype)
            page.segments.push_back({r.archetype, {}, false});
        auto cells = render_row(r.row);
        page.segments.back().lines.push_back({r.row.line, csv::join_line(cells)});
    }
    return pages;
}

std::string render_table(std::span<const ExtractedRow> rows) {
    std::string out = table_header_line() + "\n";
    for (const auto& r : rows) out += csv::join_line(render_row(r)) + "\n";
    return out;
}

fs::path table_path(const fs::path& dir, Archetype archetype) {
    return dir / (std::string(archetype_key(archetype)) + ".csv");
}

namespace {

fs::path sources_path(const fs::path& csv_path) {
    auto p = csv_path;
    p.replace_extension(".sources.tsv");
    return p;
}

}  // namespace

void write_table(const fs::path& csv_path, std::span<const ExtractedRow> rows) {
    write_text(csv_path, render_table(rows));
    std::ostringstream src;
    for (const auto& r : rows) src << r.page << '\t' << r.line << '\n';
    write_text(sources_path(csv_path), src.str());
}

std::vector<ExtractedRow> read_table(const fs::path& csv_path, Archetype archetype) {
    auto lines = text::split_lines(read_text(csv_path));
    if (lines.empty() || lines.front() != table_header_line())
        throw Error(ErrorCode::InvalidArgument, csv_path.string() + ": missing archetype header");

    std::vector<int> source_lines;
    if (fs::exists(sources_path(csv_path))) {
        for (const auto& l : text::split_lines(read_text(sources_path(csv_path)))) {
            auto tab = l.find('\t');
            if (tab != std::string::npos) source_lines.push_back(std::stoi(l.substr(tab + 1)));
        }
    }

    std::vector<ExtractedRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto cells = csv::split_line(lines[i]);
        int page = 0;
        try {
            page = cells.empty() ? 0 : std::stoi(cells[kPageCol]);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument,
                        csv_path.string() + ":" + std::to_string(i + 1) + ": bad page cell");
        }
        ExtractedRow row;
        try {
            row = parse_row(cells, archetype, page, {});
        } catch (const Error& e) {
            throw Error(e.code(), csv_path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
        }
        if (rows.size() < source_lines.size()) row.line = source_lines[rows.size()];
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_repair_log(std::span<const RepairAction> log) {
    std::string out = "page,line,kind,detail\n";
    for (const auto& a : log) {
        std::vector<std::string> cells = {std::to_string(a.page), std::to_string(a.raw_line_index),
                                          std::string(to_string(a.kind)), a.detail};
        out += csv::join_line(cells) + "\n";
    }
    return out;
}

std::string render_quarantine(std::span<const QuarantinedLine> lines) {
    std::string out;
    for (const auto& q : lines)
        out += std::to_string(q.page) + ":" + std::to_string(q.index) + "\t" + q.text + "\n";
    return out;
}

}  // namespace ledgerlift
