#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ledgerlift/hierarchy.hpp"
#include "ledgerlift/validation.hpp"

namespace ledgerlift {

struct StructureScore {
    std::string major_head;
    Archetype a = Archetype::SubMajorHead;
    Archetype b = Archetype::MinorHead;
    int depth = 0;  // both trees truncated to this depth
    std::int64_t ted = 0;
    std::size_t size_a = 0;
    std::size_t size_b = 0;

    // ted / max(size_a, size_b), capped at 1; 0 means identical.
    double nted() const;
    double similarity() const { return 1.0 - nted(); }
    bool identical() const { return ted == 0; }

    friend bool operator==(const StructureScore&, const StructureScore&) = default;
};

std::int64_t tree_edit_distance(const FiscalNode& a, const FiscalNode& b);
std::int64_t tree_edit_distance(const FiscalTree& a, const FiscalTree& b);
double nted(const FiscalTree& a, const FiscalTree& b);

// Percentage with two decimals, kept as an integer count of hundredths.
struct Percent2 {
    std::int64_t hundredths = 0;
    std::string str() const;  // "95.24"
    friend bool operator==(const Percent2&, const Percent2&) = default;
};

Percent2 percent2(std::int64_t part, std::int64_t total);
Percent2 structural_accuracy(std::span<const StructureScore> scores);

struct ArchetypePair {
    Archetype a;
    Archetype b;
};
std::vector<ArchetypePair> adjacent_archetype_pairs();

struct TedsPlan {
    std::vector<ArchetypePair> pairs = adjacent_archetype_pairs();
    bool sort_by_code = false;
    unsigned jobs = 0;  // 0: hardware concurrency
};

// For each pair and each Major Head seen in either table: both trees cut to
// the shallower archetype's depth and compared. A head missing from one side
// scores nted 1.
std::vector<StructureScore> score_archetype_pairs(const TableSet& tables, const TedsPlan& plan = {});

std::string render_scores(std::span<const StructureScore> scores);
std::vector<StructureScore> parse_scores(std::string_view csv_text);

struct AccuracyRow {
    std::string file;
    int pages = 0;
    std::int64_t pairs = 0;
    std::int64_t zero_pairs = 0;
    Percent2 accuracy;
};
AccuracyRow accuracy_row(std::string file, int pages, std::span<const StructureScore> scores);
std::string render_accuracy(std::span<const AccuracyRow> rows);

}  // namespace ledgerlift
