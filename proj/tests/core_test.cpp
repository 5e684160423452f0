#include <gtest/gtest.h>

#include <random>

#include "ledgerlift/core.hpp"
#include "test_util.hpp"

using namespace ledgerlift;

namespace {

std::vector<std::string> cells(std::initializer_list<std::string> init) { return {init}; }

std::vector<std::string> object_line() {
    return cells({"4", "Data", "2039", "00", "001", "01", "01", "059", "Other Expenses", "Revenue", "Voted",
                  "1,23,456", "200.5", "", "0"});
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no exception";
    return ErrorCode::IoError;
}

}  // namespace

TEST(Amount, IndianAndWesternGrouping) {
    EXPECT_EQ(parse_amount("1,23,456", {}), 123456);
    EXPECT_EQ(parse_amount("123,456", {}), 123456);
    EXPECT_EQ(parse_amount("12,34,56,789", {}), 123456789);
    EXPECT_EQ(parse_amount("1.234.567", {}), 1234567);
    EXPECT_EQ(parse_amount("  42 ", {}), 42);
}

TEST(Amount, DecimalSeparatorIsTheLastOfMixedSeparators) {
    EXPECT_EQ(parse_amount("1,234.5", {UnitScale::Thousand}), 1234500);
    EXPECT_EQ(parse_amount("1.234,5", {UnitScale::Thousand}), 1234500);
    EXPECT_EQ(parse_amount("0.5", {UnitScale::Unit}), 1);
    EXPECT_EQ(parse_amount("0.49", {UnitScale::Unit}), 0);
    EXPECT_EQ(code_of([] { parse_amount("1.234.567,8,9", {}); }), ErrorCode::NotANumber);
}

TEST(Amount, UnitScaling) {
    EXPECT_EQ(parse_amount("1.5", {UnitScale::Lakh}), 150000);
    EXPECT_EQ(parse_amount("2", {UnitScale::Crore}), 20000000);
    EXPECT_EQ(parse_amount("1,23,456.78", {UnitScale::Lakh}), 12345678000);
    EXPECT_EQ(parse_amount("0.000005", {UnitScale::Lakh}), 1);
    EXPECT_EQ(parse_amount("0.000004", {UnitScale::Lakh}), 0);
}

TEST(Amount, IndicDigits) {
    EXPECT_EQ(parse_amount("\xE0\xA5\xA7\xE0\xA5\xA8\xE0\xA5\xA9", {}), 123);  // Devanagari 123
    EXPECT_EQ(parse_amount("\xE0\xB3\xA7,\xE0\xB3\xA6\xE0\xB3\xA6\xE0\xB3\xA6", {}), 1000);  // Kannada 1,000
}

TEST(Amount, Rejections) {
    EXPECT_EQ(code_of([] { parse_amount("-5", {}); }), ErrorCode::Negative);
    EXPECT_EQ(code_of([] { parse_amount("(1,200)", {}); }), ErrorCode::Negative);
    EXPECT_EQ(code_of([] { parse_amount("", {}); }), ErrorCode::NotANumber);
    EXPECT_EQ(code_of([] { parse_amount("12a", {}); }), ErrorCode::NotANumber);
    EXPECT_EQ(code_of([] { parse_amount(",", {}); }), ErrorCode::NotANumber);
    EXPECT_EQ(code_of([] { parse_amount("99999999999999999999", {}); }), ErrorCode::NotANumber);
    EXPECT_EQ(code_of([] { parse_amount("\xE0\xA5", {}); }), ErrorCode::NotANumber);
    EXPECT_TRUE(is_numeric_token("-5"));
    EXPECT_FALSE(is_numeric_token("Total"));
}

TEST(Amount, RenderExamples) {
    EXPECT_EQ(render_amount(12345678000, {UnitScale::Lakh}, true), "1,23,456.78");
    EXPECT_EQ(render_amount(150000, {UnitScale::Lakh}), "1.5");
    EXPECT_EQ(render_amount(0, {UnitScale::Crore}, true), "0");
    EXPECT_EQ(render_amount(1234567, {}, true), "12,34,567");
    EXPECT_EQ(render_amount(999, {}, true), "999");
    EXPECT_EQ(code_of([] { render_amount(-1, {}); }), ErrorCode::Negative);
}

TEST(Amount, RenderParseRoundTripProperty) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<Amount> dist(0, 4'000'000'000'000'000'000LL);
    for (auto scale : {UnitScale::Unit, UnitScale::Thousand, UnitScale::Lakh, UnitScale::Crore}) {
        UnitContext unit{scale};
        for (int i = 0; i < 2000; ++i) {
            Amount n = i < 20 ? i : dist(rng) >> (i % 60);
            for (bool grouping : {false, true}) {
                auto shown = render_amount(n, unit, grouping);
                ASSERT_EQ(parse_amount(shown, unit), n) << shown;
            }
        }
    }
}

TEST(Amount, ScaleConsistencyProperty) {
    // The same displayed value read under a larger unit is the smaller-unit
    // reading times the ratio of multipliers.
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> dist(0, 10'000'000);
    for (int i = 0; i < 500; ++i) {
        auto shown = std::to_string(dist(rng));
        auto base = parse_amount(shown, {UnitScale::Unit});
        EXPECT_EQ(parse_amount(shown, {UnitScale::Thousand}), base * 1000);
        EXPECT_EQ(parse_amount(shown, {UnitScale::Lakh}), base * 100000);
        EXPECT_EQ(parse_amount(shown, {UnitScale::Crore}), base * 10000000);
    }
}

TEST(Names, LevelsAndArchetypesRoundTrip) {
    for (auto l : kAllLevels) {
        EXPECT_EQ(level_from_name(level_name(l)), l);
        EXPECT_EQ(level_from_name(level_key(l)), l);
        EXPECT_EQ(level_from_name(level_column(l)), l);
        EXPECT_EQ(level_at_depth(depth_of(l)), l);
    }
    for (auto a : kAllArchetypes) {
        EXPECT_EQ(archetype_from_name(archetype_name(a)), a);
        EXPECT_EQ(archetype_from_name(archetype_key(a)), a);
        EXPECT_EQ(depth_of(archetype_level(a)), archetype_depth(a));
    }
    EXPECT_EQ(archetype_from_name("object-head"), Archetype::ObjectHead);
    EXPECT_EQ(archetype_from_name("SUB MAJOR HEAD"), Archetype::SubMajorHead);
    EXPECT_FALSE(archetype_from_name("Major Head").has_value());
    EXPECT_EQ(code_of([] { level_at_depth(7); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(unit_scale_from_name("Lakh"), UnitScale::Lakh);
    EXPECT_EQ(code_of([] { unit_scale_from_name("myriad"); }), ErrorCode::InvalidConfig);
}

TEST(Schema, SharedColumnLayout) {
    EXPECT_EQ(table_header_line(),
              "Page,Row_Type,Major_Head,Sub_Major_Head,Minor_Head,Sub_Head,Detailed_Head,Object_Head,"
              "Description,Category,Charge,Accounts_2018_19,Budget_2019_20,Revised_2019_20,Budget_2020_21");
    for (auto a : kAllArchetypes) EXPECT_EQ(column_layout(a).size(), kColumnCount);
    EXPECT_EQ(kColumns[kDescriptionCol], "Description");
    EXPECT_EQ(kColumns[kFirstAmountCol], period_column(Period::Accounts2018_19));
}

TEST(AmountSet, AbsentPlusAbsentStaysAbsent) {
    FiscalAmountSet a, b;
    a[Period::Budget2019_20] = 5;
    b[Period::Budget2019_20] = 7;
    b[Period::Budget2020_21] = 1;
    a += b;
    EXPECT_EQ(a[Period::Budget2019_20], 12);
    EXPECT_EQ(a[Period::Budget2020_21], 1);
    EXPECT_FALSE(a[Period::Accounts2018_19].has_value());
    EXPECT_TRUE(a.any());
    EXPECT_FALSE(FiscalAmountSet{}.any());
}

TEST(ParseRow, ObjectDataRow) {
    auto row = parse_row(object_line(), Archetype::ObjectHead, 7, {UnitScale::Thousand});
    EXPECT_EQ(row.page, 7);  // the argument wins over the Page cell
    EXPECT_EQ(row.kind, RowKind::Data);
    EXPECT_EQ(row.code_path, (std::vector<std::string>{"2039", "00", "001", "01", "01", "059"}));
    EXPECT_EQ(row.description, "Other Expenses");
    EXPECT_EQ(row.category, Category::Revenue);
    EXPECT_EQ(row.charge, Charge::Voted);
    EXPECT_EQ(row.amounts[Period::Accounts2018_19], 123456000);
    EXPECT_EQ(row.amounts[Period::Budget2019_20], 200500);
    EXPECT_FALSE(row.amounts[Period::Revised2019_20].has_value());
    EXPECT_EQ(row.amounts[Period::Budget2020_21], 0);
}

TEST(ParseRow, Errors) {
    auto line = object_line();
    EXPECT_EQ(code_of([&] { parse_row(std::span(line).first(14), Archetype::ObjectHead, 1, {}); }),
              ErrorCode::ColumnCountMismatch);

    auto bad_type = line;
    bad_type[kRowTypeCol] = "Subtotal";
    EXPECT_EQ(code_of([&] { parse_row(bad_type, Archetype::ObjectHead, 1, {}); }), ErrorCode::InvalidRowType);

    EXPECT_EQ(code_of([&] { parse_row(line, Archetype::MinorHead, 1, {}); }), ErrorCode::LevelBeyondDepth);

    auto no_codes = line;
    for (std::size_t i = 0; i < 6; ++i) no_codes[kFirstLevelCol + i].clear();
    EXPECT_EQ(code_of([&] { parse_row(no_codes, Archetype::ObjectHead, 1, {}); }), ErrorCode::InconsistentPath);

    auto total = line;
    total[kRowTypeCol] = "Total";
    EXPECT_EQ(code_of([&] { parse_row(total, Archetype::ObjectHead, 1, {}); }), ErrorCode::InvalidRowType);

    auto negative = line;
    negative[kFirstAmountCol + 2] = "(12)";
    try {
        parse_row(negative, Archetype::ObjectHead, 1, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Negative);
        EXPECT_NE(std::string(e.what()).find("Revised_2019_20"), std::string::npos);
    }

    auto category = line;
    category[kCategoryCol] = "Loans";
    EXPECT_EQ(code_of([&] { parse_row(category, Archetype::ObjectHead, 1, {}); }), ErrorCode::InvalidArgument);
}

TEST(ParseRow, SkippedLevelKeepsAnEmptyCode) {
    auto line = cells({"1", "Total", "2039", "", "001", "", "", "", "Total 001", "", "", "1", "2", "3", "4"});
    auto row = parse_row(line, Archetype::MinorHead, 1, {});
    EXPECT_EQ(row.code_path, (std::vector<std::string>{"2039", "", "001"}));
    EXPECT_EQ(row.kind, RowKind::Total);
    EXPECT_FALSE(row.category.has_value());
}

TEST(ParseRow, RenderRoundTrip) {
    auto row = parse_row(object_line(), Archetype::ObjectHead, 4, {UnitScale::Lakh});
    for (bool grouping : {false, true}) {
        auto shown = render_row(row, {UnitScale::Lakh}, grouping);
        ASSERT_EQ(shown.size(), kColumnCount);
        EXPECT_EQ(parse_row(shown, Archetype::ObjectHead, 4, {UnitScale::Lakh}), row);
    }
    EXPECT_EQ(render_row(row)[kFirstAmountCol], "12345600000");
}
