#include "ledgerlift/teds.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <thread>

#include "ledgerlift/csv.hpp"
#include "ledgerlift/error.hpp"
#include "ledgerlift/ted.hpp"
#include "ledgerlift/text.hpp"

namespace ledgerlift {

double StructureScore::nted() const {
    auto denom = std::max(size_a, size_b);
    if (denom == 0) return 0.0;
    return std::min(1.0, static_cast<double>(ted) / static_cast<double>(denom));
}

std::int64_t tree_edit_distance(const FiscalNode& a, const FiscalNode& b) {
    auto label = [](const FiscalNode& n) { return n.label; };
    auto children = [](const FiscalNode& n) -> const std::vector<FiscalNode>& { return n.children; };
    return zhang_shasha(make_postorder(a, label, children), make_postorder(b, label, children));
}

std::int64_t tree_edit_distance(const FiscalTree& a, const FiscalTree& b) {
    return tree_edit_distance(a.root, b.root);
}

double nted(const FiscalTree& a, const FiscalTree& b) {
    StructureScore s;
    s.ted = tree_edit_distance(a, b);
    s.size_a = a.size();
    s.size_b = b.size();
    return s.nted();
}

std::string Percent2::str() const {
    auto frac = std::to_string(hundredths % 100);
    if (frac.size() < 2) frac.insert(0, "0");
    return std::to_string(hundredths / 100) + "." + frac;
}

Percent2 percent2(std::int64_t part, std::int64_t total) {
    if (total <= 0) throw Error(ErrorCode::EmptyScores, "no scores to aggregate");
    if (part < 0 || part > total) throw Error(ErrorCode::InvalidArgument, "part out of range");
    return {(20000 * part + total) / (2 * total)};
}

Percent2 structural_accuracy(std::span<const StructureScore> scores) {
    auto zeros = std::count_if(scores.begin(), scores.end(), [](const StructureScore& s) { return s.identical(); });
    return percent2(zeros, static_cast<std::int64_t>(scores.size()));
}

std::vector<ArchetypePair> adjacent_archetype_pairs() {
    std::vector<ArchetypePair> out;
    for (std::size_t i = 0; i + 1 < kAllArchetypes.size(); ++i) out.push_back({kAllArchetypes[i], kAllArchetypes[i + 1]});
    return out;
}

namespace {

struct Job {
    StructureScore score;
    const FiscalTree* ta = nullptr;
    const FiscalTree* tb = nullptr;
};

void run_jobs(std::vector<Job>& jobs, unsigned width) {
    if (width == 0) width = std::max(1u, std::thread::hardware_concurrency());
    auto compute = [](Job& j) {
        if (j.ta && j.tb) {
            j.score.ted = tree_edit_distance(*j.ta, *j.tb);
        } else {
            j.score.ted = static_cast<std::int64_t>(std::max(j.score.size_a, j.score.size_b));
        }
    };
    for (std::size_t start = 0; start < jobs.size(); start += width) {
        auto end = std::min(jobs.size(), start + width);
        if (width == 1) {
            compute(jobs[start]);
            continue;
        }
        std::vector<std::future<void>> batch;
        for (auto i = start; i < end; ++i) batch.push_back(std::async(std::launch::async, compute, std::ref(jobs[i])));
        for (auto& f : batch) f.get();
    }
}

}  // namespace

std::vector<StructureScore> score_archetype_pairs(const TableSet& tables, const TedsPlan& plan) {
    // Truncated trees per (archetype, depth), keyed by major head.
    std::map<std::pair<Archetype, int>, std::vector<FiscalTree>> cut;
    auto trees_for = [&](Archetype a, int depth) -> const std::vector<FiscalTree>& {
        auto key = std::make_pair(a, depth);
        auto it = cut.find(key);
        if (it != cut.end()) return it->second;
        std::vector<FiscalTree> trees;
        if (auto t = tables.find(a); t != tables.end() && !t->second.empty()) {
            for (auto& built : build_forest(t->second, a)) {
                auto tree = truncate_tree(built.tree, depth);
                if (plan.sort_by_code) sort_children_by_code(tree.root);
                trees.push_back(std::move(tree));
            }
        }
        return cut.emplace(key, std::move(trees)).first->second;
    };

    std::vector<Job> jobs;
    for (const auto& pair : plan.pairs) {
        int depth = std::min(archetype_depth(pair.a), archetype_depth(pair.b));
        const auto& ta = trees_for(pair.a, depth);
        const auto& tb = trees_for(pair.b, depth);
        if (ta.empty() && tb.empty()) continue;
        std::map<std::string, const FiscalTree*> by_major_b;
        for (const auto& t : tb) by_major_b[t.major_head] = &t;
        std::map<std::string, bool> seen;
        auto add = [&](const std::string& major, const FiscalTree* a, const FiscalTree* b) {
            Job j;
            j.score.major_head = major;
            j.score.a = pair.a;
            j.score.b = pair.b;
            j.score.depth = depth;
            j.score.size_a = a ? a->size() : 0;
            j.score.size_b = b ? b->size() : 0;
            j.ta = a;
            j.tb = b;
            jobs.push_back(j);
        };
        for (const auto& t : ta) {
            seen[t.major_head] = true;
            auto it = by_major_b.find(t.major_head);
            add(t.major_head, &t, it == by_major_b.end() ? nullptr : it->second);
        }
        for (const auto& t : tb)
            if (!seen.count(t.major_head)) add(t.major_head, nullptr, &t);
    }
    run_jobs(jobs, plan.jobs);

    std::vector<StructureScore> out;
    out.reserve(jobs.size());
    for (auto& j : jobs) out.push_back(std::move(j.score));
    return out;
}

namespace {
constexpr std::string_view kScoresHeader = "major_head,archetype_a,archetype_b,depth,ted,size_a,size_b,nted";
}

std::string render_scores(std::span<const StructureScore> scores) {
    std::string out = std::string(kScoresHeader) + "\n";
    char buf[32];
    for (const auto& s : scores) {
        std::snprintf(buf, sizeof buf, "%.6f", s.nted());
        out += csv::join_line(std::vector<std::string>{s.major_head, std::string(archetype_key(s.a)),
                                                       std::string(archetype_key(s.b)), std::to_string(s.depth),
                                                       std::to_string(s.ted), std::to_string(s.size_a),
                                                       std::to_string(s.size_b), buf});
        out += "\n";
    }
    return out;
}

std::vector<StructureScore> parse_scores(std::string_view csv_text) {
    auto lines = text::split_lines(csv_text);
    if (lines.empty() || lines.front() != kScoresHeader)
        throw Error(ErrorCode::InvalidArgument, "scores file: unexpected header");
    std::vector<StructureScore> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (text::trim(lines[i]).empty()) continue;
        auto f = csv::split_line(lines[i]);
        if (f.size() != 8) throw Error(ErrorCode::InvalidArgument, "scores file: line " + std::to_string(i + 1));
        auto a = archetype_from_name(f[1]);
        auto b = archetype_from_name(f[2]);
        if (!a || !b) throw Error(ErrorCode::InvalidArgument, "scores file: unknown archetype");
        StructureScore s;
        s.major_head = f[0];
        s.a = *a;
        s.b = *b;
        s.depth = std::stoi(f[3]);
        s.ted = std::stoll(f[4]);
        s.size_a = std::stoull(f[5]);
        s.size_b = std::stoull(f[6]);
        out.push_back(s);
    }
    return out;
}

AccuracyRow accuracy_row(std::string file, int pages, std::span<const StructureScore> scores) {
    AccuracyRow row{std::move(file), pages, static_cast<std::int64_t>(scores.size()), 0, {}};
    row.zero_pairs = std::count_if(scores.begin(), scores.end(), [](const StructureScore& s) { return s.identical(); });
    row.accuracy = structural_accuracy(scores);
    return row;
}

std::string render_accuracy(std::span<const AccuracyRow> rows) {
    std::string out = "file,pages,pairs,zero_pairs,accuracy\n";
    for (const auto& r : rows) {
        out += csv::join_line(std::vector<std::string>{r.file, std::to_string(r.pages), std::to_string(r.pairs),
                                                       std::to_string(r.zero_pairs), r.accuracy.str()});
        out += "\n";
    }
    return out;
}

}  // namespace ledgerlift
