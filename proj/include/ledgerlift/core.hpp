#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ledgerlift/error.hpp"

namespace ledgerlift {

// Six nested levels of the fiscal classification, broadest first.
enum class HierarchyLevel : int {
    MajorHead = 1,
    SubMajorHead = 2,
    MinorHead = 3,
    SubHead = 4,
    DetailedHead = 5,
    ObjectHead = 6,
};

inline constexpr std::array<HierarchyLevel, 6> kAllLevels = {
    HierarchyLevel::MajorHead,  HierarchyLevel::SubMajorHead, HierarchyLevel::MinorHead,
    HierarchyLevel::SubHead,    HierarchyLevel::DetailedHead, HierarchyLevel::ObjectHead,
};

constexpr int depth_of(HierarchyLevel level) { return static_cast<int>(level); }
HierarchyLevel level_at_depth(int depth);
std::string_view level_name(HierarchyLevel level);    // "Minor Head"
std::string_view level_key(HierarchyLevel level);     // "MinorHead"
std::string_view level_column(HierarchyLevel level);  // "Minor_Head"
std::optional<HierarchyLevel> level_from_name(std::string_view name);

// The five CSV table types, each named for the deepest level it carries.
enum class Archetype { SubMajorHead, MinorHead, SubHead, DetailedHead, ObjectHead };

inline constexpr std::array<Archetype, 5> kAllArchetypes = {
    Archetype::SubMajorHead, Archetype::MinorHead, Archetype::SubHead,
    Archetype::DetailedHead, Archetype::ObjectHead,
};

HierarchyLevel archetype_level(Archetype archetype);
int archetype_depth(Archetype archetype);
std::string_view archetype_name(Archetype archetype);  // "Object Head"
std::string_view archetype_key(Archetype archetype);   // "ObjectHead"
// Accepts display names and keys, ignoring case, spaces, '_' and '-'.
std::optional<Archetype> archetype_from_name(std::string_view name);

// Shared column layout of all five archetype files.
inline constexpr std::array<std::string_view, 15> kColumns = {
    "Page",        "Row_Type", "Major_Head", "Sub_Major_Head",   "Minor_Head",
    "Sub_Head",    "Detailed_Head", "Object_Head", "Description", "Category",
    "Charge",      "Accounts_2018_19", "Budget_2019_20", "Revised_2019_20", "Budget_2020_21",
};
inline constexpr std::size_t kColumnCount = kColumns.size();
inline constexpr std::size_t kPageCol = 0;
inline constexpr std::size_t kRowTypeCol = 1;
inline constexpr std::size_t kFirstLevelCol = 2;
inline constexpr std::size_t kDescriptionCol = 8;
inline constexpr std::size_t kCategoryCol = 9;
inline constexpr std::size_t kChargeCol = 10;
inline constexpr std::size_t kFirstAmountCol = 11;

std::span<const std::string_view> column_layout(Archetype archetype);
std::string table_header_line();

enum class RowKind { Header, Data, Total };
std::string_view to_string(RowKind kind);
std::optional<RowKind> row_kind_from_name(std::string_view name);

enum class Period { Accounts2018_19, Budget2019_20, Revised2019_20, Budget2020_21 };
inline constexpr std::array<Period, 4> kAllPeriods = {
    Period::Accounts2018_19, Period::Budget2019_20, Period::Revised2019_20, Period::Budget2020_21,
};
std::string_view period_column(Period period);

using Amount = std::int64_t;

struct FiscalAmountSet {
    std::array<std::optional<Amount>, 4> values{};

    std::optional<Amount>& operator[](Period p) { return values[static_cast<std::size_t>(p)]; }
    const std::optional<Amount>& operator[](Period p) const {
        return values[static_cast<std::size_t>(p)];
    }
    Amount value_or_zero(Period p) const { return (*this)[p].value_or(0); }
    bool any() const;

    // Absent + absent stays absent; otherwise absent counts as zero.
    FiscalAmountSet& operator+=(const FiscalAmountSet& other);
    friend bool operator==(const FiscalAmountSet&, const FiscalAmountSet&) = default;
};

enum class Category { Revenue, Capital };
enum class Charge { Voted, Charged };
std::string_view to_string(Category c);
std::string_view to_string(Charge c);

struct ExtractedRow {
    int page = 0;
    int line = 0;  // line index in the raw page response, 0 when unknown
    RowKind kind = RowKind::Data;
    std::vector<std::string> code_path;  // "" marks a skipped intermediate level
    std::string description;
    FiscalAmountSet amounts;
    std::optional<Category> category;
    std::optional<Charge> charge;

    friend bool operator==(const ExtractedRow&, const ExtractedRow&) = default;
};

enum class UnitScale { Unit, Thousand, Lakh, Crore };

struct UnitContext {
    UnitScale scale = UnitScale::Unit;
    Amount multiplier() const;
};

std::string_view to_string(UnitScale scale);
UnitScale unit_scale_from_name(std::string_view name);

// Normalizes a numeric token to an integer in the base monetary unit.
// Accepts Indian or western digit grouping, a single decimal separator
// (comma or period, whichever comes last when both appear), and Devanagari
// or Kannada digits. The scaled value is rounded half away from zero.
// Throws Error{NotANumber} or Error{Negative}.
Amount parse_amount(std::string_view text, UnitContext unit);

// True when the token would parse as an amount, negative or not.
bool is_numeric_token(std::string_view text);

// Inverse of parse_amount for non-negative n: n / multiplier with the
// minimal number of decimals, optionally with Indian digit grouping.
std::string render_amount(Amount n, UnitContext unit, bool indian_grouping = false);

// Types one cleaned line. `page` is authoritative; the Page cell is ignored.
ExtractedRow parse_row(std::span<const std::string> fields, Archetype archetype, int page,
                       UnitContext unit);

std::vector<std::string> render_row(const ExtractedRow& row, UnitContext unit = {},
                                    bool indian_grouping = false);

}  // namespace ledgerlift
