#include "ledgerlift/validation.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <map>

#include "ledgerlift/text.hpp"

using nlohmann::json;

namespace ledgerlift {

std::string_view to_string(Verdict v) { return v == Verdict::Pass ? "PASS" : "FAIL"; }
std::string_view to_string(CheckType t) {
    return t == CheckType::WithinSchema ? "WithinSchema" : "TwoSource";
}

namespace {

constexpr std::string_view kObjectDetailed = "Object \xE2\x86\x92 Detailed Head";
constexpr std::string_view kTwoSourceMinor = "Two-source Minor Head";
constexpr std::size_t kKeyWidth = 23;

std::vector<std::string> prefix(const std::vector<std::string>& path, std::size_t n) {
    return {path.begin(), path.begin() + static_cast<long>(std::min(n, path.size()))};
}

}  // namespace

std::string CheckResult::family() const {
    if (check_type == CheckType::WithinSchema) {
        if (archetype == Archetype::ObjectHead && level == HierarchyLevel::DetailedHead)
            return std::string(kObjectDetailed);
        return "Within " + std::string(archetype_name(archetype)) + ": " + std::string(level_name(level));
    }
    if (level == HierarchyLevel::MinorHead && archetype == Archetype::MinorHead &&
        other_archetype == Archetype::ObjectHead)
        return std::string(kTwoSourceMinor);
    return "Two-source " + std::string(level_name(level)) + " (" + std::string(archetype_name(archetype)) +
           " / " + std::string(other_archetype ? archetype_name(*other_archetype) : "?") + ")";
}

void CheckRun::append(CheckRun other) {
    std::move(other.results.begin(), other.results.end(), std::back_inserter(results));
    std::move(other.issues.begin(), other.issues.end(), std::back_inserter(issues));
}

CheckResult make_check(CheckType type, const FiscalAmountSet& expected, const FiscalAmountSet& actual,
                       Amount tolerance) {
    if (tolerance < 0) throw Error(ErrorCode::InvalidArgument, "tolerance must be non-negative");
    CheckResult r;
    r.check_type = type;
    r.status = Verdict::Pass;
    for (std::size_t i = 0; i < kAllPeriods.size(); ++i) {
        auto p = kAllPeriods[i];
        Amount e = expected.value_or_zero(p);
        Amount a = actual.value_or_zero(p);
        Amount diff = e > a ? e - a : a - e;
        auto verdict = diff <= tolerance ? Verdict::Pass : Verdict::Fail;
        r.matches[i] = {p, verdict, e, a};
        if (verdict == Verdict::Fail) r.status = Verdict::Fail;
    }
    return r;
}

// ---------------------------------------------------------------------------

namespace {

FiscalAmountSet child_value(const FiscalNode& child, std::vector<SourceRef>& sources) {
    if (child.amounts) {
        sources.push_back(child.amounts_source);
        return *child.amounts;
    }
    FiscalAmountSet sum;
    for (const auto& c : child.children) sum += child_value(c, sources);
    return sum;
}

void within_node(const FiscalTree& tree, const FiscalNode& node, std::vector<std::string>& path,
                 HierarchyLevel level, Amount tolerance, CheckRun& out) {
    path.push_back(node.label.code);
    if (node.label.level == level) {
        bool has_total = node.amounts && node.amounts_kind == RowKind::Total;
        if (has_total) {
            std::vector<SourceRef> sources{node.amounts_source};
            FiscalAmountSet sum;
            for (const auto& c : node.children) sum += child_value(c, sources);
            auto r = make_check(CheckType::WithinSchema, *node.amounts, sum, tolerance);
            r.level = level;
            r.archetype = tree.archetype;
            r.major_head = tree.major_head;
            r.code_path = path;
            r.description = node.description;
            r.page = node.amounts_source.page;
            r.sources = std::move(sources);
            out.results.push_back(std::move(r));
        } else if (!node.children.empty()) {
            out.issues.push_back({ErrorCode::MissingTotal, tree.major_head, path, node.source,
                                  std::string(level_name(level)) + " " + node.label.code +
                                      " has children but no Total row"});
        }
    } else if (depth_of(node.label.level) < depth_of(level)) {
        for (const auto& c : node.children) within_node(tree, c, path, level, tolerance, out);
    }
    path.pop_back();
}

}  // namespace

CheckRun check_within(const FiscalTree& tree, HierarchyLevel level, Amount tolerance) {
    CheckRun out;
    std::vector<std::string> path;
    within_node(tree, tree.root, path, level, tolerance, out);
    return out;
}

CheckRun check_object_detailed(const FiscalTree& tree, Amount tolerance) {
    if (tree.archetype != Archetype::ObjectHead)
        throw Error(ErrorCode::InvalidArgument, "object-detailed check needs an Object Head tree");
    return check_within(tree, HierarchyLevel::DetailedHead, tolerance);
}

// ---------------------------------------------------------------------------

std::vector<LevelValue> values_at_level(std::span<const ExtractedRow> rows, Archetype archetype,
                                        HierarchyLevel level) {
    const auto depth = static_cast<std::size_t>(depth_of(level));
    const auto table_depth = static_cast<std::size_t>(archetype_depth(archetype));
    if (table_depth < depth)
        throw Error(ErrorCode::InvalidArgument, std::string(archetype_name(archetype)) + " table does not reach " +
                                                    std::string(level_name(level)));

    std::vector<LevelValue> values;
    std::map<std::vector<std::string>, std::size_t> index;
    std::vector<bool> located;
    auto entry = [&](const ExtractedRow& row) -> LevelValue& {
        auto key = prefix(row.code_path, depth);
        auto [it, inserted] = index.try_emplace(key, values.size());
        if (inserted) {
            values.push_back({key, {}, {}, {row.page, row.line}, {}});
            located.push_back(false);
        }
        return values[it->second];
    };

    for (const auto& row : rows) {
        if (row.kind == RowKind::Header || row.code_path.size() < depth) continue;
        if (table_depth == depth) {
            if (row.kind != RowKind::Data || row.code_path.size() != depth) continue;
            auto& v = entry(row);
            auto i = index[v.code_path];
            if (located[i]) continue;
            v.amounts = row.amounts;
            v.description = row.description;
            v.location = {row.page, row.line};
            v.sources.push_back(v.location);
            located[i] = true;
        } else if (row.kind == RowKind::Data && row.code_path.size() == table_depth) {
            auto& v = entry(row);
            v.amounts += row.amounts;
            v.sources.push_back({row.page, row.line});
        } else if (row.kind == RowKind::Total && row.code_path.size() == depth) {
            auto& v = entry(row);
            auto i = index[v.code_path];
            if (located[i]) continue;
            v.description = row.description;
            v.location = {row.page, row.line};
            located[i] = true;
        }
    }
    return values;
}

CheckRun check_two_source(HierarchyLevel level, Archetype archetype_a, std::span<const ExtractedRow> table_a,
                          Archetype archetype_b, std::span<const ExtractedRow> table_b, Amount tolerance) {
    auto va = values_at_level(table_a, archetype_a, level);
    auto vb = values_at_level(table_b, archetype_b, level);
    std::map<std::vector<std::string>, const LevelValue*> by_path_b;
    for (const auto& v : vb) by_path_b[v.code_path] = &v;

    CheckRun out;
    auto finish = [&](CheckResult r, const std::vector<std::string>& path) {
        r.level = level;
        r.archetype = archetype_a;
        r.other_archetype = archetype_b;
        r.major_head = path.empty() ? "" : path.front();
        r.code_path = path;
        out.results.push_back(std::move(r));
    };
    auto absent = [&](CheckResult& r, std::string_view side) {
        r.status = Verdict::Fail;
        for (auto& m : r.matches) m.verdict = Verdict::Fail;
        r.absent_side = std::string(side);
    };

    std::map<std::vector<std::string>, bool> seen;
    for (const auto& a : va) {
        seen[a.code_path] = true;
        auto it = by_path_b.find(a.code_path);
        if (it == by_path_b.end()) {
            auto r = make_check(CheckType::TwoSource, a.amounts, {}, tolerance);
            absent(r, archetype_name(archetype_b));
            r.description = a.description;
            r.page = a.location.page;
            r.sources = a.sources;
            finish(std::move(r), a.code_path);
            continue;
        }
        const auto& b = *it->second;
        auto r = make_check(CheckType::TwoSource, a.amounts, b.amounts, tolerance);
        r.description = b.description.empty() ? a.description : b.description;
        r.page = b.location.page;
        r.sources = a.sources;
        r.sources.insert(r.sources.end(), b.sources.begin(), b.sources.end());
        finish(std::move(r), a.code_path);
    }
    for (const auto& b : vb) {
        if (seen.count(b.code_path)) continue;
        auto r = make_check(CheckType::TwoSource, {}, b.amounts, tolerance);
        absent(r, archetype_name(archetype_a));
        r.description = b.description;
        r.page = b.location.page;
        r.sources = b.sources;
        finish(std::move(r), b.code_path);
    }
    return out;
}

// ---------------------------------------------------------------------------

int pass_rate(std::int64_t checks, std::int64_t passed) {
    if (checks <= 0) throw Error(ErrorCode::EmptyResults, "no checks to rate");
    if (passed < 0 || passed > checks) throw Error(ErrorCode::InvalidArgument, "passed out of range");
    return static_cast<int>((200 * passed + checks) / (2 * checks));
}

int pass_rate(std::span<const CheckResult> results) {
    auto passed = std::count_if(results.begin(), results.end(),
                                [](const CheckResult& r) { return r.status == Verdict::Pass; });
    return pass_rate(static_cast<std::int64_t>(results.size()), passed);
}

std::string format_failure_block(const CheckResult& r) {
    std::string out;
    auto line = [&](std::string_view key, std::string_view value) {
        out += text::pad_right(key, kKeyWidth);
        out += value;
        out += '\n';
    };
    line("Major_Head", r.major_head);
    line("Description", r.description);
    line("Page", std::to_string(r.page));
    line("Status", to_string(r.status));
    for (const auto& m : r.matches) line(std::string(period_column(m.column)) + "_Match", to_string(m.verdict));
    return out;
}

std::string failure_report(std::span<const CheckResult> results) {
    std::vector<const CheckResult*> fails;
    for (const auto& r : results)
        if (r.status == Verdict::Fail) fails.push_back(&r);
    std::stable_sort(fails.begin(), fails.end(), [](const CheckResult* a, const CheckResult* b) {
        if (a->page != b->page) return a->page < b->page;
        return a->major_head < b->major_head;
    });
    std::string out;
    for (std::size_t i = 0; i < fails.size(); ++i) {
        if (i) out += '\n';
        out += format_failure_block(*fails[i]);
    }
    return out;
}

std::string failure_report_by_family(std::span<const CheckResult> results) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<CheckResult>> groups;
    for (const auto& r : results) {
        if (r.status != Verdict::Fail) continue;
        auto family = r.family();
        if (!groups.count(family)) order.push_back(family);
        groups[family].push_back(r);
    }
    std::string out;
    for (const auto& family : order) {
        if (!out.empty()) out += '\n';
        out += "## " + family + "\n\n" + failure_report(groups[family]);
    }
    return out;
}

std::vector<SummaryRow> summarize(std::span<const CheckResult> results) {
    std::vector<SummaryRow> rows;
    std::map<std::string, std::size_t> index;
    for (auto fixed : {kObjectDetailed, kTwoSourceMinor}) {
        index[std::string(fixed)] = rows.size();
        rows.push_back({std::string(fixed), 0, 0, 0});
    }
    SummaryRow overall{"Overall", 0, 0, 0};
    for (const auto& r : results) {
        auto family = r.family();
        auto [it, inserted] = index.try_emplace(family, rows.size());
        if (inserted) rows.push_back({family, 0, 0, 0});
        auto& row = rows[it->second];
        ++row.checks;
        ++overall.checks;
        if (r.status == Verdict::Pass) {
            ++row.passed;
            ++overall.passed;
        }
    }
    std::erase_if(rows, [](const SummaryRow& r) { return r.checks == 0; });
    rows.push_back(overall);
    for (auto& r : rows)
        if (r.checks > 0) r.pass_rate = pass_rate(r.checks, r.passed);
    return rows;
}

CheckScope check_scope_from_name(std::string_view name) {
    if (text::iequals(name, "core")) return CheckScope::Core;
    if (text::iequals(name, "all")) return CheckScope::All;
    throw Error(ErrorCode::InvalidConfig, "unknown check scope '" + std::string(name) + "'");
}

std::vector<TwoSourcePair> two_source_pairs(CheckScope scope) {
    std::vector<TwoSourcePair> pairs = {
        {HierarchyLevel::MinorHead, Archetype::MinorHead, Archetype::ObjectHead}};
    if (scope == CheckScope::All) {
        for (std::size_t i = 0; i + 1 < kAllArchetypes.size(); ++i) {
            auto a = kAllArchetypes[i];
            pairs.push_back({archetype_level(a), a, kAllArchetypes[i + 1]});
        }
    }
    return pairs;
}

CheckRun run_validation(const TableSet& tables, const ValidationPlan& plan) {
    CheckRun out;
    auto rows_of = [&](Archetype a) -> const std::vector<ExtractedRow>* {
        auto it = tables.find(a);
        return it == tables.end() || it->second.empty() ? nullptr : &it->second;
    };

    for (auto a : kAllArchetypes) {
        const auto* rows = rows_of(a);
        if (!rows) continue;
        if (plan.scope == CheckScope::Core && a != Archetype::ObjectHead) continue;
        for (const auto& built : build_forest(*rows, a)) {
            if (plan.scope == CheckScope::Core) {
                out.append(check_object_detailed(built.tree, plan.tolerance));
                continue;
            }
            for (int d = 1; d < archetype_depth(a); ++d)
                out.append(check_within(built.tree, level_at_depth(d), plan.tolerance));
        }
    }
    for (const auto& pair : two_source_pairs(plan.scope)) {
        const auto* ra = rows_of(pair.a);
        const auto* rb = rows_of(pair.b);
        if (!ra || !rb) continue;
        out.append(check_two_source(pair.level, pair.a, *ra, pair.b, *rb, plan.tolerance));
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string to_json_line(const CheckResult& r) {
    json j;
    j["Major_Head"] = r.major_head;
    j["Description"] = r.description;
    j["Page"] = r.page;
    j["Status"] = to_string(r.status);
    json expected = json::array(), actual = json::array();
    for (const auto& m : r.matches) {
        j[std::string(period_column(m.column)) + "_Match"] = to_string(m.verdict);
        expected.push_back(m.expected);
        actual.push_back(m.actual);
    }
    j["expected"] = expected;
    j["actual"] = actual;
    j["check_type"] = to_string(r.check_type);
    j["family"] = r.family();
    j["level"] = level_key(r.level);
    j["archetype"] = archetype_key(r.archetype);
    j["other_archetype"] = r.other_archetype ? json(archetype_key(*r.other_archetype)) : json(nullptr);
    j["code_path"] = r.code_path;
    json sources = json::array();
    for (const auto& s : r.sources) sources.push_back({s.page, s.line});
    j["sources"] = sources;
    j["absent_side"] = r.absent_side;
    return j.dump();
}

CheckResult check_from_json(std::string_view line) {
    CheckResult r;
    try {
        auto j = json::parse(line);
        r.major_head = j.at("Major_Head").get<std::string>();
        r.description = j.at("Description").get<std::string>();
        r.page = j.at("Page").get<int>();
        r.status = j.at("Status").get<std::string>() == "PASS" ? Verdict::Pass : Verdict::Fail;
        for (std::size_t i = 0; i < kAllPeriods.size(); ++i) {
            auto p = kAllPeriods[i];
            auto v = j.at(std::string(period_column(p)) + "_Match").get<std::string>();
            r.matches[i] = {p, v == "PASS" ? Verdict::Pass : Verdict::Fail, j.at("expected").at(i).get<Amount>(),
                            j.at("actual").at(i).get<Amount>()};
        }
        r.check_type = j.at("check_type").get<std::string>() == "TwoSource" ? CheckType::TwoSource
                                                                            : CheckType::WithinSchema;
        auto level = level_from_name(j.at("level").get<std::string>());
        auto arch = archetype_from_name(j.at("archetype").get<std::string>());
        if (!level || !arch) throw Error(ErrorCode::InvalidArgument, "check record: unknown level or archetype");
        r.level = *level;
        r.archetype = *arch;
        if (!j.at("other_archetype").is_null())
            r.other_archetype = archetype_from_name(j.at("other_archetype").get<std::string>());
        r.code_path = j.at("code_path").get<std::vector<std::string>>();
        for (const auto& s : j.at("sources")) r.sources.push_back({s.at(0).get<int>(), s.at(1).get<int>()});
        r.absent_side = j.at("absent_side").get<std::string>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("check record: ") + e.what());
    }
    return r;
}

}  // namespace ledgerlift
