#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ledgerlift/core.hpp"

namespace ledgerlift {

// Code used for a level the source skipped.
inline constexpr std::string_view kPassThroughCode = "\xE2\x80\x94";  // U+2014

struct NodeLabel {
    HierarchyLevel level = HierarchyLevel::MajorHead;
    std::string code;
    friend bool operator==(const NodeLabel&, const NodeLabel&) = default;
};

struct SourceRef {
    int page = 0;
    int line = 0;
    friend auto operator<=>(const SourceRef&, const SourceRef&) = default;
};

struct FiscalNode {
    NodeLabel label;
    std::vector<FiscalNode> children;  // first-appearance order
    std::optional<FiscalAmountSet> amounts;
    RowKind amounts_kind = RowKind::Data;  // which row kind supplied `amounts`
    std::string description;               // of the row that supplied `amounts`
    SourceRef source;                      // first row naming this node
    SourceRef amounts_source;

    std::size_t size() const;
    int height() const;  // 1 for a leaf
};

struct FiscalTree {
    std::string major_head;
    FiscalNode root;
    Archetype archetype = Archetype::ObjectHead;

    std::size_t size() const { return root.size(); }
    int depth() const { return root.height(); }
};

// Labels and order only; amounts and descriptions are ignored.
bool same_structure(const FiscalNode& a, const FiscalNode& b);

struct BuildIssue {
    ErrorCode code = ErrorCode::InconsistentPath;
    SourceRef where;
    std::string message;
};

struct BuildResult {
    FiscalTree tree;
    std::vector<BuildIssue> issues;
};

// One tree for one Major Head. A skipped level becomes a pass-through node
// coded U+2014 and is reported as InconsistentPath. Conflicting Total rows
// for one node are reported as DuplicateTotal and the first one is kept.
// Throws InconsistentPath for an empty row list, InvalidArgument when a row
// belongs to another Major Head.
BuildResult build_tree(std::span<const ExtractedRow> rows, Archetype archetype,
                       std::string_view major_head);

// Groups rows by Major Head (first-appearance order) and builds each tree.
std::vector<BuildResult> build_forest(std::span<const ExtractedRow> rows, Archetype archetype);

FiscalTree truncate_tree(const FiscalTree& tree, int depth);
void sort_children_by_code(FiscalNode& node);

// Indented dump, two spaces per level, one `Level:code` label per line.
std::string dump_tree(const FiscalTree& tree);

}  // namespace ledgerlift
