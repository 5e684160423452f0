#include "ledgerlift/hierarchy.hpp"

#include <algorithm>
#include <map>

namespace ledgerlift {

std::size_t FiscalNode::size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
}

int FiscalNode::height() const {
    int h = 0;
    for (const auto& c : children) h = std::max(h, c.height());
    return h + 1;
}

bool same_structure(const FiscalNode& a, const FiscalNode& b) {
    if (!(a.label == b.label) || a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!same_structure(a.children[i], b.children[i])) return false;
    return true;
}

namespace {

FiscalNode& child_for(FiscalNode& parent, HierarchyLevel level, const std::string& code, SourceRef at) {
    for (auto& c : parent.children)
        if (c.label.code == code) return c;
    FiscalNode node;
    node.label = {level, code};
    node.source = at;
    parent.children.push_back(std::move(node));
    return parent.children.back();
}

}  // namespace

BuildResult build_tree(std::span<const ExtractedRow> rows, Archetype archetype, std::string_view major_head) {
    if (rows.empty())
        throw Error(ErrorCode::InconsistentPath, "no rows for major head " + std::string(major_head));

    BuildResult out;
    auto& tree = out.tree;
    tree.major_head = std::string(major_head);
    tree.archetype = archetype;
    tree.root.label = {HierarchyLevel::MajorHead, std::string(major_head)};
    bool root_seen = false;

    for (const auto& row : rows) {
        if (row.kind == RowKind::Header) continue;
        SourceRef at{row.page, row.line};
        if (row.code_path.empty() || row.code_path.front() != major_head)
            throw Error(ErrorCode::InvalidArgument, "row on page " + std::to_string(row.page) +
                                                        " does not belong to major head " +
                                                        std::string(major_head));
        if (!root_seen) {
            tree.root.source = at;
            root_seen = true;
        }

        FiscalNode* node = &tree.root;
        bool gap_reported = false;
        for (std::size_t d = 1; d < row.code_path.size(); ++d) {
            std::string code = row.code_path[d];
            if (code.empty()) {
                code = std::string(kPassThroughCode);
                if (!gap_reported) {
                    out.issues.push_back({ErrorCode::InconsistentPath, at,
                                          "row skips " + std::string(level_name(level_at_depth(static_cast<int>(d) + 1)))});
                    gap_reported = true;
                }
            }
            node = &child_for(*node, level_at_depth(static_cast<int>(d) + 1), code, at);
        }

        if (!row.amounts.any() && row.kind == RowKind::Data) continue;
        if (node->amounts) {
            bool same = *node->amounts == row.amounts;
            if (node->amounts_kind == RowKind::Total && row.kind == RowKind::Total) {
                if (!same)
                    out.issues.push_back({ErrorCode::DuplicateTotal, at,
                                          "second total for " + std::string(level_name(node->label.level)) +
                                              " " + node->label.code + " differs from page " +
                                              std::to_string(node->amounts_source.page)});
                continue;
            }
            if (node->amounts_kind == row.kind) {
                if (!same)
                    out.issues.push_back({ErrorCode::DuplicateRow, at,
                                          "second data row for " + node->label.code + " differs"});
                continue;
            }
            // A Total row takes precedence over a Data row for the same head.
            if (row.kind != RowKind::Total) continue;
        }
        node->amounts = row.amounts;
        node->amounts_kind = row.kind;
        node->description = row.description;
        node->amounts_source = at;
    }
    return out;
}

std::vector<BuildResult> build_forest(std::span<const ExtractedRow> rows, Archetype archetype) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<ExtractedRow>> groups;
    for (const auto& row : rows) {
        if (row.kind == RowKind::Header || row.code_path.empty()) continue;
        const auto& major = row.code_path.front();
        if (!groups.count(major)) order.push_back(major);
        groups[major].push_back(row);
    }
    std::vector<BuildResult> out;
    for (const auto& major : order) out.push_back(build_tree(groups[major], archetype, major));
    return out;
}

namespace {

void truncate_node(FiscalNode& node, int remaining) {
    if (remaining <= 1) {
        node.children.clear();
        return;
    }
    for (auto& c : node.children) truncate_node(c, remaining - 1);
}

void dump_node(const FiscalNode& node, int indent, std::string& out) {
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
    out += std::string(level_key(node.label.level)) + ":" + node.label.code + "\n";
    for (const auto& c : node.children) dump_node(c, indent + 1, out);
}

}  // namespace

FiscalTree truncate_tree(const FiscalTree& tree, int depth) {
    if (depth < 1) throw Error(ErrorCode::InvalidArgument, "truncation depth must be at least 1");
    FiscalTree out = tree;
    truncate_node(out.root, depth);
    return out;
}

void sort_children_by_code(FiscalNode& node) {
    std::stable_sort(node.children.begin(), node.children.end(),
                     [](const FiscalNode& a, const FiscalNode& b) { return a.label.code < b.label.code; });
    for (auto& c : node.children) sort_children_by_code(c);
}

std::string dump_tree(const FiscalTree& tree) {
    std::string out;
    dump_node(tree.root, 0, out);
    return out;
}

}  // namespace ledgerlift
