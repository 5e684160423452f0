#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

namespace ledgerlift {

// Ordered tree flattened in postorder, the input shape of the Zhang-Shasha
// dynamic program.
template <class Label>
struct PostorderTree {
    std::vector<Label> labels;
    std::vector<int> leftmost;  // postorder index of the leftmost leaf below each node
    std::vector<int> keyroots;  // ascending

    int size() const { return static_cast<int>(labels.size()); }
};

namespace detail {

template <class Label, class Node, class LabelFn, class ChildrenFn>
int postorder_visit(const Node& node, PostorderTree<Label>& out, LabelFn& label, ChildrenFn& children) {
    int first = -1;
    for (const auto& child : children(node)) {
        int idx = postorder_visit<Label>(child, out, label, children);
        if (first < 0) first = out.leftmost[idx];
    }
    int self = static_cast<int>(out.labels.size());
    out.labels.push_back(label(node));
    out.leftmost.push_back(first < 0 ? self : first);
    return self;
}

}  // namespace detail

template <class Node, class LabelFn, class ChildrenFn>
auto make_postorder(const Node& root, LabelFn label, ChildrenFn children) {
    using Label = std::decay_t<decltype(label(root))>;
    PostorderTree<Label> t;
    detail::postorder_visit<Label>(root, t, label, children);
    std::map<int, int> highest;  // leftmost leaf -> highest node sharing it
    for (int i = 0; i < t.size(); ++i) highest[t.leftmost[i]] = i;
    for (const auto& [leaf, node] : highest) t.keyroots.push_back(node);
    std::sort(t.keyroots.begin(), t.keyroots.end());
    return t;
}

// Unit-cost ordered tree edit distance.
template <class Label, class Eq = std::equal_to<Label>>
int zhang_shasha(const PostorderTree<Label>& a, const PostorderTree<Label>& b, Eq eq = {}) {
    const int n = a.size(), m = b.size();
    if (n == 0 || m == 0) return n + m;
    std::vector<std::vector<int>> td(n, std::vector<int>(m, 0));
    std::vector<std::vector<int>> fd;

    for (int i : a.keyroots) {
        for (int j : b.keyroots) {
            const int li = a.leftmost[i], lj = b.leftmost[j];
            const int rows = i - li + 2, cols = j - lj + 2;
            fd.assign(rows, std::vector<int>(cols, 0));
            for (int x = 1; x < rows; ++x) fd[x][0] = x;
            for (int y = 1; y < cols; ++y) fd[0][y] = y;
            for (int x = li; x <= i; ++x) {
                for (int y = lj; y <= j; ++y) {
                    const int fx = x - li + 1, fy = y - lj + 1;
                    int del = fd[fx - 1][fy] + 1;
                    int ins = fd[fx][fy - 1] + 1;
                    if (a.leftmost[x] == li && b.leftmost[y] == lj) {
                        int rel = fd[fx - 1][fy - 1] + (eq(a.labels[x], b.labels[y]) ? 0 : 1);
                        fd[fx][fy] = std::min({del, ins, rel});
                        td[x][y] = fd[fx][fy];
                    } else {
                        int sub = fd[a.leftmost[x] - li][b.leftmost[y] - lj] + td[x][y];
                        fd[fx][fy] = std::min({del, ins, sub});
                    }
                }
            }
        }
    }
    return td[n - 1][m - 1];
}

}  // namespace ledgerlift
