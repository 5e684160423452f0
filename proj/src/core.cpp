#include "ledgerlift/core.hpp"

#include <cctype>

#include "ledgerlift/csv.hpp"
#include "ledgerlift/text.hpp"

namespace ledgerlift {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotANumber: return "NotANumber";
        case ErrorCode::Negative: return "Negative";
        case ErrorCode::ColumnCountMismatch: return "ColumnCountMismatch";
        case ErrorCode::InvalidRowType: return "InvalidRowType";
        case ErrorCode::LevelBeyondDepth: return "LevelBeyondDepth";
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::RasterizerFailed: return "RasterizerFailed";
        case ErrorCode::BackendFailure: return "BackendFailure";
        case ErrorCode::IncompletePrompt: return "IncompletePrompt";
        case ErrorCode::SegmentParseError: return "SegmentParseError";
        case ErrorCode::Unrepairable: return "Unrepairable";
        case ErrorCode::InconsistentPath: return "InconsistentPath";
        case ErrorCode::DuplicateTotal: return "DuplicateTotal";
        case ErrorCode::DuplicateRow: return "DuplicateRow";
        case ErrorCode::MissingTotal: return "MissingTotal";
        case ErrorCode::EmptyResults: return "EmptyResults";
        case ErrorCode::EmptyScores: return "EmptyScores";
        case ErrorCode::InsufficientTargets: return "InsufficientTargets";
        case ErrorCode::MissingStageOutput: return "MissingStageOutput";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

namespace {

struct LevelInfo {
    std::string_view name;
    std::string_view key;
    std::string_view column;
};

constexpr std::array<LevelInfo, 6> kLevelInfo = {{
    {"Major Head", "MajorHead", "Major_Head"},
    {"Sub Major Head", "SubMajorHead", "Sub_Major_Head"},
    {"Minor Head", "MinorHead", "Minor_Head"},
    {"Sub Head", "SubHead", "Sub_Head"},
    {"Detailed Head", "DetailedHead", "Detailed_Head"},
    {"Object Head", "ObjectHead", "Object_Head"},
}};

const LevelInfo& info(HierarchyLevel level) {
    return kLevelInfo[static_cast<std::size_t>(depth_of(level) - 1)];
}

std::string fold_name(std::string_view name) {
    std::string out;
    for (char c : name) {
        if (c == ' ' || c == '_' || c == '-') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

}  // namespace

HierarchyLevel level_at_depth(int depth) {
    if (depth < 1 || depth > 6)
        throw Error(ErrorCode::InvalidArgument, "hierarchy depth out of range: " + std::to_string(depth));
    return static_cast<HierarchyLevel>(depth);
}

std::string_view level_name(HierarchyLevel level) { return info(level).name; }
std::string_view level_key(HierarchyLevel level) { return info(level).key; }
std::string_view level_column(HierarchyLevel level) { return info(level).column; }

std::optional<HierarchyLevel> level_from_name(std::string_view name) {
    auto folded = fold_name(name);
    for (auto level : kAllLevels) {
        if (fold_name(level_key(level)) == folded) return level;
    }
    return std::nullopt;
}

HierarchyLevel archetype_level(Archetype archetype) {
    switch (archetype) {
        case Archetype::SubMajorHead: return HierarchyLevel::SubMajorHead;
        case Archetype::MinorHead: return HierarchyLevel::MinorHead;
        case Archetype::SubHead: return HierarchyLevel::SubHead;
        case Archetype::DetailedHead: return HierarchyLevel::DetailedHead;
        case Archetype::ObjectHead: return HierarchyLevel::ObjectHead;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown archetype");
}

int archetype_depth(Archetype archetype) { return depth_of(archetype_level(archetype)); }
std::string_view archetype_name(Archetype archetype) { return level_name(archetype_level(archetype)); }
std::string_view archetype_key(Archetype archetype) { return level_key(archetype_level(archetype)); }

std::optional<Archetype> archetype_from_name(std::string_view name) {
    auto folded = fold_name(text::trim(name));
    for (auto a : kAllArchetypes) {
        if (fold_name(archetype_key(a)) == folded) return a;
    }
    return std::nullopt;
}

std::span<const std::string_view> column_layout(Archetype) { return kColumns; }

std::string table_header_line() {
    std::string out;
    for (std::size_t i = 0; i < kColumns.size(); ++i) {
        if (i) out.push_back(',');
        out += kColumns[i];
    }
    return out;
}

std::string_view to_string(RowKind kind) {
    switch (kind) {
        case RowKind::Header: return "Header";
        case RowKind::Data: return "Data";
        case RowKind::Total: return "Total";
    }
    return "";
}

std::optional<RowKind> row_kind_from_name(std::string_view name) {
    name = text::trim(name);
    if (text::iequals(name, "Header")) return RowKind::Header;
    if (text::iequals(name, "Data")) return RowKind::Data;
    if (text::iequals(name, "Total")) return RowKind::Total;
    return std::nullopt;
}

std::string_view period_column(Period period) {
    return kColumns[kFirstAmountCol + static_cast<std::size_t>(period)];
}

bool FiscalAmountSet::any() const {
    for (const auto& v : values)
        if (v) return true;
    return false;
}

FiscalAmountSet& FiscalAmountSet::operator+=(const FiscalAmountSet& other) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i] && !other.values[i]) continue;
        values[i] = values[i].value_or(0) + other.values[i].value_or(0);
    }
    return *this;
}

std::string_view to_string(Category c) { return c == Category::Revenue ? "Revenue" : "Capital"; }
std::string_view to_string(Charge c) { return c == Charge::Voted ? "Voted" : "Charged"; }

Amount UnitContext::multiplier() const {
    switch (scale) {
        case UnitScale::Unit: return 1;
        case UnitScale::Thousand: return 1'000;
        case UnitScale::Lakh: return 100'000;
        case UnitScale::Crore: return 10'000'000;
    }
    return 1;
}

std::string_view to_string(UnitScale scale) {
    switch (scale) {
        case UnitScale::Unit: return "unit";
        case UnitScale::Thousand: return "thousand";
        case UnitScale::Lakh: return "lakh";
        case UnitScale::Crore: return "crore";
    }
    return "unit";
}

UnitScale unit_scale_from_name(std::string_view name) {
    auto n = text::lower(text::trim(name));
    if (n == "unit" || n == "1" || n == "rupees") return UnitScale::Unit;
    if (n == "thousand" || n == "thousands") return UnitScale::Thousand;
    if (n == "lakh" || n == "lakhs") return UnitScale::Lakh;
    if (n == "crore" || n == "crores") return UnitScale::Crore;
    throw Error(ErrorCode::InvalidConfig, "unknown unit '" + std::string(name) + "'");
}

namespace {

// Decodes one UTF-8 code point starting at s[i], advancing i. Returns -1 on
// malformed input.
long next_code_point(std::string_view s, std::size_t& i) {
    auto b0 = static_cast<unsigned char>(s[i]);
    int extra = 0;
    long cp = 0;
    if (b0 < 0x80) {
        ++i;
        return b0;
    } else if ((b0 & 0xE0) == 0xC0) {
        extra = 1;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        extra = 2;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        extra = 3;
        cp = b0 & 0x07;
    } else {
        ++i;
        return -1;
    }
    if (i + extra >= s.size()) {
        i = s.size();
        return -1;
    }
    for (int k = 1; k <= extra; ++k) {
        auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) {
            i += k;
            return -1;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    i += extra + 1;
    return cp;
}

// Unicode decimal value for ASCII, Devanagari and Kannada digits.
int digit_value(long cp) {
    if (cp >= '0' && cp <= '9') return static_cast<int>(cp - '0');
    if (cp >= 0x0966 && cp <= 0x096F) return static_cast<int>(cp - 0x0966);
    if (cp >= 0x0CE6 && cp <= 0x0CEF) return static_cast<int>(cp - 0x0CE6);
    return -1;
}

struct Token {
    std::string digits;   // all digits, ASCII
    std::size_t frac = 0; // number of trailing digits after the decimal separator
    bool negative = false;
};

Token tokenize(std::string_view raw) {
    auto s = text::trim(raw);
    auto fail = [&](const char* why) -> Error {
        return Error(ErrorCode::NotANumber, "'" + std::string(raw) + "': " + why);
    };
    if (s.empty()) throw fail("empty token");

    Token tok;
    if (s.front() == '-' || s.front() == '(') {
        tok.negative = true;
        bool paren = s.front() == '(';
        s.remove_prefix(1);
        if (paren) {
            if (s.empty() || s.back() != ')') throw fail("unbalanced parenthesis");
            s.remove_suffix(1);
        }
        s = text::trim(s);
    } else if (s.front() == '+') {
        s.remove_prefix(1);
    }

    // First pass: classify characters so the decimal separator can be chosen.
    struct Item {
        int digit;  // -1 for separators
        char sep;
    };
    std::vector<Item> items;
    std::size_t commas = 0, periods = 0;
    for (std::size_t i = 0; i < s.size();) {
        long cp = next_code_point(s, i);
        int d = digit_value(cp);
        if (d >= 0) {
            items.push_back({d, 0});
        } else if (cp == ',' || cp == '.') {
            items.push_back({-1, static_cast<char>(cp)});
            (cp == ',' ? commas : periods)++;
        } else {
            throw fail("unexpected character");
        }
    }

    char decimal = 0;
    if (commas && periods) {
        for (auto it = items.rbegin(); it != items.rend(); ++it) {
            if (it->digit < 0) {
                decimal = it->sep;
                break;
            }
        }
        if ((decimal == ',' ? commas : periods) > 1) throw fail("ambiguous separators");
    } else if (periods == 1) {
        decimal = '.';
    }

    bool seen_decimal = false;
    for (const auto& item : items) {
        if (item.digit >= 0) {
            tok.digits.push_back(static_cast<char>('0' + item.digit));
            if (seen_decimal) ++tok.frac;
        } else if (item.sep == decimal) {
            seen_decimal = true;
        }
    }
    if (tok.digits.empty()) throw fail("no digits");
    return tok;
}

}  // namespace

Amount parse_amount(std::string_view text_value, UnitContext unit) {
    Token tok = tokenize(text_value);
    if (tok.negative)
        throw Error(ErrorCode::Negative, "'" + std::string(text_value) + "' is negative");

    // Strip leading zeros so long zero-padded codes do not overflow.
    std::size_t first = tok.digits.find_first_not_of('0');
    std::size_t int_len = tok.digits.size() - tok.frac;
    if (first == std::string::npos) return 0;
    if (first < int_len && int_len - first > 19)
        throw Error(ErrorCode::NotANumber, "'" + std::string(text_value) + "' out of range");
    if (tok.frac > 18)
        throw Error(ErrorCode::NotANumber, "'" + std::string(text_value) + "' has too many decimals");

    __int128 mantissa = 0;
    for (char c : tok.digits.substr(first)) mantissa = mantissa * 10 + (c - '0');
    __int128 denom = 1;
    for (std::size_t i = 0; i < tok.frac; ++i) denom *= 10;

    __int128 scaled = mantissa * unit.multiplier();
    __int128 q = scaled / denom;
    __int128 r = scaled % denom;
    if (2 * r >= denom) ++q;
    if (q > static_cast<__int128>(INT64_MAX))
        throw Error(ErrorCode::NotANumber, "'" + std::string(text_value) + "' out of range");
    return static_cast<Amount>(q);
}

bool is_numeric_token(std::string_view text_value) {
    try {
        tokenize(text_value);
        return true;
    } catch (const Error&) {
        return false;
    }
}

namespace {

std::string group_indian(const std::string& digits) {
    if (digits.size() <= 3) return digits;
    std::string head = digits.substr(0, digits.size() - 3);
    std::string tail = digits.substr(digits.size() - 3);
    std::string out;
    std::size_t lead = head.size() % 2;
    if (lead) out = head.substr(0, lead);
    for (std::size_t i = lead; i < head.size(); i += 2) {
        if (!out.empty()) out.push_back(',');
        out += head.substr(i, 2);
    }
    return out + "," + tail;
}

}  // namespace

std::string render_amount(Amount n, UnitContext unit, bool indian_grouping) {
    if (n < 0) throw Error(ErrorCode::Negative, "cannot render negative amount");
    Amount mult = unit.multiplier();
    std::string int_part = std::to_string(n / mult);
    if (indian_grouping) int_part = group_indian(int_part);
    Amount frac = n % mult;
    if (frac == 0) return int_part;
    std::string frac_digits = std::to_string(frac);
    std::size_t width = std::to_string(mult).size() - 1;
    frac_digits.insert(0, width - frac_digits.size(), '0');
    while (!frac_digits.empty() && frac_digits.back() == '0') frac_digits.pop_back();
    return int_part + "." + frac_digits;
}

ExtractedRow parse_row(std::span<const std::string> fields, Archetype archetype, int page,
                       UnitContext unit) {
    if (fields.size() != kColumnCount)
        throw Error(ErrorCode::ColumnCountMismatch, "expected " + std::to_string(kColumnCount) +
                                                        " fields, got " + std::to_string(fields.size()));
    ExtractedRow row;
    row.page = page;

    auto kind = row_kind_from_name(fields[kRowTypeCol]);
    if (!kind)
        throw Error(ErrorCode::InvalidRowType, "unknown row type '" + fields[kRowTypeCol] + "'");
    row.kind = *kind;

    int last = -1;
    for (int d = 0; d < 6; ++d) {
        if (!text::trim(fields[kFirstLevelCol + d]).empty()) last = d;
    }
    if (last + 1 > archetype_depth(archetype))
        throw Error(ErrorCode::LevelBeyondDepth,
                    std::string(level_column(level_at_depth(last + 1))) + " is deeper than " +
                        std::string(archetype_name(archetype)));
    for (int d = 0; d <= last; ++d)
        row.code_path.emplace_back(text::trim(fields[kFirstLevelCol + d]));

    row.description = std::string(text::trim(fields[kDescriptionCol]));
    if (row.kind == RowKind::Data && row.code_path.empty())
        throw Error(ErrorCode::InconsistentPath, "data row without level codes");
    if (row.kind == RowKind::Total && !text::istarts_with(row.description, "total"))
        throw Error(ErrorCode::InvalidRowType, "total row description must begin with 'Total'");

    auto category = text::trim(fields[kCategoryCol]);
    if (text::iequals(category, "Revenue")) row.category = Category::Revenue;
    else if (text::iequals(category, "Capital")) row.category = Category::Capital;
    else if (!category.empty())
        throw Error(ErrorCode::InvalidArgument, "column 9 (Category): '" + std::string(category) + "'");

    auto charge = text::trim(fields[kChargeCol]);
    if (text::iequals(charge, "Voted")) row.charge = Charge::Voted;
    else if (text::iequals(charge, "Charged")) row.charge = Charge::Charged;
    else if (!charge.empty())
        throw Error(ErrorCode::InvalidArgument, "column 10 (Charge): '" + std::string(charge) + "'");

    for (auto p : kAllPeriods) {
        std::size_t col = kFirstAmountCol + static_cast<std::size_t>(p);
        if (text::trim(fields[col]).empty()) continue;
        try {
            row.amounts[p] = parse_amount(fields[col], unit);
        } catch (const Error& e) {
            throw Error(e.code(), "column " + std::to_string(col) + " (" +
                                      std::string(period_column(p)) + "): " + e.what());
        }
    }
    return row;
}

std::vector<std::string> render_row(const ExtractedRow& row, UnitContext unit, bool indian_grouping) {
    std::vector<std::string> cells(kColumnCount);
    cells[kPageCol] = std::to_string(row.page);
    cells[kRowTypeCol] = std::string(to_string(row.kind));
    for (std::size_t d = 0; d < row.code_path.size() && d < 6; ++d)
        cells[kFirstLevelCol + d] = row.code_path[d];
    cells[kDescriptionCol] = row.description;
    if (row.category) cells[kCategoryCol] = std::string(to_string(*row.category));
    if (row.charge) cells[kChargeCol] = std::string(to_string(*row.charge));
    for (auto p : kAllPeriods) {
        if (row.amounts[p])
            cells[kFirstAmountCol + static_cast<std::size_t>(p)] =
                render_amount(*row.amounts[p], unit, indian_grouping);
    }
    return cells;
}

}  // namespace ledgerlift
