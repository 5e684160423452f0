#include <gtest/gtest.h>

#include "ledgerlift/synth.hpp"
#include "ledgerlift/teds.hpp"
#include "test_util.hpp"

using namespace ledgerlift;
using testutil::amounts;
using testutil::data;

namespace {

std::vector<StructureScore> scores_with_zeros(int zero, int total) {
    std::vector<StructureScore> out(static_cast<std::size_t>(total));
    for (int i = 0; i < total; ++i) {
        out[static_cast<std::size_t>(i)].size_a = out[static_cast<std::size_t>(i)].size_b = 4;
        out[static_cast<std::size_t>(i)].ted = i < zero ? 0 : 1;
    }
    return out;
}

Corpus small_corpus() {
    CorpusSpec spec;
    spec.major_heads = 3;
    spec.pages = 60;
    return generate_corpus(spec);
}

}  // namespace

TEST(Percent2, RoundsToHundredths) {
    EXPECT_EQ(percent2(20, 21).str(), "95.24");
    EXPECT_EQ(percent2(14, 19).str(), "73.68");
    EXPECT_EQ(percent2(22, 25).str(), "88.00");
    EXPECT_EQ(percent2(20, 24).str(), "83.33");
    EXPECT_EQ(percent2(30, 31).str(), "96.77");
    EXPECT_EQ(percent2(21, 23).str(), "91.30");
    EXPECT_EQ(percent2(19, 24).str(), "79.17");
    EXPECT_EQ(percent2(5, 5).str(), "100.00");
    EXPECT_EQ(percent2(0, 7).str(), "0.00");
    EXPECT_EQ(percent2(1, 8).hundredths, 1250);
    EXPECT_EQ(percent2(1, 80000).hundredths, 0);  // 0.00125%
    EXPECT_EQ(percent2(1, 20000).hundredths, 1);  // 0.005% rounds up
    EXPECT_EQ(percent2(3, 8).str(), "37.50");
    try {
        percent2(0, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyScores);
    }
}

TEST(Accuracy, CountsZeroDistancePairs) {
    EXPECT_EQ(structural_accuracy(scores_with_zeros(20, 21)).str(), "95.24");
    EXPECT_EQ(structural_accuracy(scores_with_zeros(14, 19)).str(), "73.68");
    EXPECT_EQ(structural_accuracy(scores_with_zeros(3, 3)).str(), "100.00");
    EXPECT_THROW(structural_accuracy(std::vector<StructureScore>{}), Error);

    auto scores = scores_with_zeros(20, 21);
    auto row = accuracy_row("vol1", 227, scores);
    EXPECT_EQ(row.pairs, 21);
    EXPECT_EQ(row.zero_pairs, 20);
    std::vector<AccuracyRow> rows{row};
    EXPECT_EQ(render_accuracy(rows), "file,pages,pairs,zero_pairs,accuracy\nvol1,227,21,20,95.24\n");
}

TEST(Scores, NtedFollowsSizes) {
    StructureScore s;
    EXPECT_DOUBLE_EQ(s.nted(), 0.0);
    s.size_a = 3;
    s.size_b = 2;
    s.ted = 1;
    EXPECT_DOUBLE_EQ(s.nted(), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.similarity(), 2.0 / 3.0);
    EXPECT_FALSE(s.identical());
    s.ted = 5;
    EXPECT_DOUBLE_EQ(s.nted(), 1.0);
}

TEST(Pairs, AdjacentArchetypes) {
    auto pairs = adjacent_archetype_pairs();
    ASSERT_EQ(pairs.size(), 4u);
    EXPECT_EQ(pairs.front().a, Archetype::SubMajorHead);
    EXPECT_EQ(pairs.back().b, Archetype::ObjectHead);
}

TEST(Corpus, AdjacentPairsAreAllIdentical) {
    auto corpus = small_corpus();
    auto scores = score_archetype_pairs(corpus.tables);
    EXPECT_EQ(scores.size(), 4u * 3u);
    for (const auto& s : scores) {
        EXPECT_TRUE(s.identical()) << s.major_head;
        EXPECT_EQ(s.depth, std::min(archetype_depth(s.a), archetype_depth(s.b)));
    }
    EXPECT_EQ(structural_accuracy(scores).str(), "100.00");
}

TEST(Corpus, TruncatedObjectTreeMatchesEachShallowerTable) {
    auto corpus = small_corpus();
    auto objects = build_forest(corpus.tables.at(Archetype::ObjectHead), Archetype::ObjectHead);
    for (auto arch : {Archetype::SubMajorHead, Archetype::MinorHead, Archetype::SubHead, Archetype::DetailedHead}) {
        int k = archetype_depth(arch);
        auto shallow = build_forest(corpus.tables.at(arch), arch);
        ASSERT_EQ(shallow.size(), objects.size());
        for (std::size_t i = 0; i < objects.size(); ++i) {
            auto cut = truncate_tree(objects[i].tree, k);
            EXPECT_EQ(cut.depth(), k);
            EXPECT_EQ(nted(cut, shallow[i].tree), 0.0) << k << " " << cut.major_head;
        }
    }
}

TEST(Corpus, MissingHeadAndChangedStructure) {
    TableSet tables;
    tables[Archetype::SubMajorHead] = {data({"2039", "00"}, amounts(1, 1, 1, 1)),
                                       data({"2040", "00"}, amounts(1, 1, 1, 1)),
                                       data({"2041", "00"}, amounts(1, 1, 1, 1))};
    tables[Archetype::MinorHead] = {data({"2039", "00", "001"}, amounts(1, 1, 1, 1)),
                                    data({"2040", "01", "001"}, amounts(1, 1, 1, 1)),
                                    data({"2042", "00", "001"}, amounts(1, 1, 1, 1))};
    TedsPlan plan;
    plan.pairs = {{Archetype::SubMajorHead, Archetype::MinorHead}};
    plan.jobs = 2;
    auto scores = score_archetype_pairs(tables, plan);
    ASSERT_EQ(scores.size(), 4u);
    EXPECT_EQ(scores[0].major_head, "2039");
    EXPECT_TRUE(scores[0].identical());
    EXPECT_EQ(scores[1].ted, 1);
    EXPECT_DOUBLE_EQ(scores[1].nted(), 0.5);
    EXPECT_EQ(scores[2].major_head, "2041");
    EXPECT_DOUBLE_EQ(scores[2].nted(), 1.0);
    EXPECT_EQ(scores[2].size_b, 0u);
    EXPECT_EQ(scores[3].major_head, "2042");
    EXPECT_DOUBLE_EQ(scores[3].nted(), 1.0);
    EXPECT_EQ(structural_accuracy(scores).str(), "25.00");

    auto text = render_scores(scores);
    EXPECT_EQ(text.substr(0, text.find('\n')), "major_head,archetype_a,archetype_b,depth,ted,size_a,size_b,nted");
    EXPECT_EQ(parse_scores(text), scores);
}

TEST(Corpus, SortFlagIgnoresSiblingOrder) {
    TableSet tables;
    tables[Archetype::SubMajorHead] = {data({"2039", "01"}, amounts(1, 1, 1, 1)),
                                       data({"2039", "00"}, amounts(1, 1, 1, 1))};
    tables[Archetype::MinorHead] = {data({"2039", "00", "001"}, amounts(1, 1, 1, 1)),
                                    data({"2039", "01", "001"}, amounts(1, 1, 1, 1))};
    TedsPlan plan;
    plan.pairs = {{Archetype::SubMajorHead, Archetype::MinorHead}};
    EXPECT_FALSE(score_archetype_pairs(tables, plan).at(0).identical());
    plan.sort_by_code = true;
    EXPECT_TRUE(score_archetype_pairs(tables, plan).at(0).identical());
}
