#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ledgerlift/core.hpp"
#include "ledgerlift/hierarchy.hpp"

namespace ledgerlift {

enum class Verdict { Pass, Fail };
std::string_view to_string(Verdict v);

enum class CheckType { WithinSchema, TwoSource };
std::string_view to_string(CheckType t);

struct ColumnMatch {
    Period column = Period::Accounts2018_19;
    Verdict verdict = Verdict::Pass;
    Amount expected = 0;
    Amount actual = 0;
    friend bool operator==(const ColumnMatch&, const ColumnMatch&) = default;
};

// One head checked across all four period columns.
struct CheckResult {
    CheckType check_type = CheckType::WithinSchema;
    HierarchyLevel level = HierarchyLevel::DetailedHead;
    Archetype archetype = Archetype::ObjectHead;      // table (or source A)
    std::optional<Archetype> other_archetype;         // source B of a two-source check
    std::string major_head;
    std::vector<std::string> code_path;
    std::string description;
    int page = 0;
    Verdict status = Verdict::Pass;
    std::array<ColumnMatch, 4> matches{};
    std::vector<SourceRef> sources;  // rows whose amounts entered either side
    std::string absent_side;         // two-source: archetype missing the head

    // Row label used in pass-rate tables, e.g. "Object → Detailed Head".
    std::string family() const;

    friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct ValidationIssue {
    ErrorCode code = ErrorCode::MissingTotal;
    std::string major_head;
    std::vector<std::string> code_path;
    SourceRef where;
    std::string message;
};

struct CheckRun {
    std::vector<CheckResult> results;
    std::vector<ValidationIssue> issues;
    void append(CheckRun other);
};

// Builds a CheckResult from per-column expected/actual values.
CheckResult make_check(CheckType type, const FiscalAmountSet& expected, const FiscalAmountSet& actual,
                       Amount tolerance);

// For every node at `level` carrying a Total row: the Total against the
// column-wise sum of its children. A child contributes its own Total or Data
// amounts, or the sum of its subtree when it has neither. A node with
// children but no Total is reported as MissingTotal, not as a failure.
CheckRun check_within(const FiscalTree& tree, HierarchyLevel level, Amount tolerance);

// Object Head amounts summed against Detailed Head totals.
CheckRun check_object_detailed(const FiscalTree& tree, Amount tolerance);

// Value of every head at `level` as seen by one archetype table: the Data
// rows when the table stops at that level, otherwise the aggregate of its
// deepest Data rows. `page`/`description` point at the table's Total row for
// the head when it has one.
struct LevelValue {
    std::vector<std::string> code_path;
    FiscalAmountSet amounts;
    std::string description;
    SourceRef location;
    std::vector<SourceRef> sources;
};
std::vector<LevelValue> values_at_level(std::span<const ExtractedRow> rows, Archetype archetype,
                                        HierarchyLevel level);

// Heads at `level` compared between two archetype tables. A head present in
// only one table fails with `absent_side` set. Expected is source A, actual
// is source B; the reported page is source B's.
CheckRun check_two_source(HierarchyLevel level, Archetype archetype_a, std::span<const ExtractedRow> table_a,
                          Archetype archetype_b, std::span<const ExtractedRow> table_b, Amount tolerance);

// round(100 * passed / checks), halves rounded up.
int pass_rate(std::int64_t checks, std::int64_t passed);
int pass_rate(std::span<const CheckResult> results);

std::string format_failure_block(const CheckResult& result);
// FAIL blocks ordered by (page, major head), separated by blank lines.
std::string failure_report(std::span<const CheckResult> results);
// failure_report per check family, each under a "## <family>" line.
std::string failure_report_by_family(std::span<const CheckResult> results);

struct SummaryRow {
    std::string validation_type;
    std::int64_t checks = 0;
    std::int64_t passed = 0;
    int pass_rate = 0;
};
// One row per check family (the two headline families first) plus "Overall".
std::vector<SummaryRow> summarize(std::span<const CheckResult> results);

enum class CheckScope { Core, All };
CheckScope check_scope_from_name(std::string_view name);

struct TwoSourcePair {
    HierarchyLevel level;
    Archetype a;
    Archetype b;
};

struct ValidationPlan {
    CheckScope scope = CheckScope::All;
    Amount tolerance = 0;
};

// Core scope: Object → Detailed within the Object Head table, and Minor
// Heads from the Minor Head table against the Object Head table. All scope
// adds every Total level of every table and each adjacent table pair at the
// shallower table's depth.
std::vector<TwoSourcePair> two_source_pairs(CheckScope scope);

using TableSet = std::map<Archetype, std::vector<ExtractedRow>>;
CheckRun run_validation(const TableSet& tables, const ValidationPlan& plan);

// One JSON object per check, keyed like the failure block plus detail fields.
std::string to_json_line(const CheckResult& result);
CheckResult check_from_json(std::string_view line);

}  // namespace ledgerlift
