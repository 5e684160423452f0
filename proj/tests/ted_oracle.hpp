#pragma once

#include <deque>
#include <map>
#include <string>
#include <vector>

#include "ledgerlift/hierarchy.hpp"

// Brute-force tree edit distance: breadth-first search over single edits.
namespace oracle {

// Plain ordered labeled tree for the oracle.
struct T {
    int label = 0;
    std::vector<T> kids;
};
using Forest = std::vector<T>;

inline std::string key(const Forest& f) {
    std::string s;
    for (const auto& t : f) s += std::to_string(t.label) + "(" + key(t.kids) + ")";
    return s;
}

inline int count(const Forest& f) {
    int n = 0;
    for (const auto& t : f) n += 1 + count(t.kids);
    return n;
}

// Every forest reachable by one unit edit, keeping at most `cap` nodes.
inline void neighbours(const Forest& f, int labels, int cap, std::vector<Forest>& out) {
    const int n = count(f);
    // Edits inside each subtree.
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::vector<Forest> inner;
        neighbours(f[i].kids, labels, cap - (n - count(f[i].kids)), inner);
        for (auto& k : inner) {
            Forest g = f;
            g[i].kids = std::move(k);
            out.push_back(std::move(g));
        }
        for (int l = 0; l < labels; ++l) {
            if (l == f[i].label) continue;
            Forest g = f;
            g[i].label = l;
            out.push_back(std::move(g));
        }
        Forest g(f.begin(), f.begin() + static_cast<long>(i));
        g.insert(g.end(), f[i].kids.begin(), f[i].kids.end());
        g.insert(g.end(), f.begin() + static_cast<long>(i) + 1, f.end());
        out.push_back(std::move(g));
    }
    if (n >= cap) return;
    // A new node adopting siblings [i, j) at this level.
    for (std::size_t i = 0; i <= f.size(); ++i)
        for (std::size_t j = i; j <= f.size(); ++j)
            for (int l = 0; l < labels; ++l) {
                T node{l, Forest(f.begin() + static_cast<long>(i), f.begin() + static_cast<long>(j))};
                Forest g(f.begin(), f.begin() + static_cast<long>(i));
                g.push_back(std::move(node));
                g.insert(g.end(), f.begin() + static_cast<long>(j), f.end());
                out.push_back(std::move(g));
            }
}

// Shortest edit script length from `a` to every forest within the cap.
inline std::map<std::string, int> bfs(const T& a, int labels, int cap) {
    std::map<std::string, int> dist{{key({a}), 0}};
    std::deque<Forest> queue{{a}};
    while (!queue.empty()) {
        Forest f = std::move(queue.front());
        queue.pop_front();
        int d = dist[key(f)];
        std::vector<Forest> next;
        neighbours(f, labels, cap, next);
        for (auto& g : next) {
            auto k = key(g);
            if (dist.emplace(k, d + 1).second) queue.push_back(std::move(g));
        }
    }
    return dist;
}

inline void all_trees(int nodes, int labels, std::vector<T>& out);

inline void all_forests(int nodes, int labels, std::vector<Forest>& out) {
    if (nodes == 0) {
        out.push_back({});
        return;
    }
    for (int first = 1; first <= nodes; ++first) {
        std::vector<T> heads;
        all_trees(first, labels, heads);
        std::vector<Forest> rests;
        all_forests(nodes - first, labels, rests);
        for (const auto& h : heads)
            for (const auto& r : rests) {
                Forest f{h};
                f.insert(f.end(), r.begin(), r.end());
                out.push_back(std::move(f));
            }
    }
}

inline void all_trees(int nodes, int labels, std::vector<T>& out) {
    std::vector<Forest> kids;
    all_forests(nodes - 1, labels, kids);
    for (int l = 0; l < labels; ++l)
        for (const auto& k : kids) out.push_back({l, k});
}

inline ledgerlift::FiscalNode to_fiscal(const T& t) {
    ledgerlift::FiscalNode n;
    n.label = {ledgerlift::HierarchyLevel::MajorHead, std::to_string(t.label)};
    for (const auto& k : t.kids) n.children.push_back(to_fiscal(k));
    return n;
}

inline ledgerlift::FiscalTree as_tree(const T& t) {
    ledgerlift::FiscalTree tree;
    tree.root = to_fiscal(t);
    return tree;
}

}  // namespace oracle
