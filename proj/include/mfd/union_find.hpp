#pragma once

#include <numeric>
#include <utility>
#include <vector>

namespace mfd {

/// Disjoint sets with path compression and union by rank.
class UnionFind {
public:
    explicit UnionFind(std::size_t n = 0) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t add() {
        parent_.push_back(static_cast<int>(parent_.size()));
        rank_.push_back(0);
        return parent_.size() - 1;
    }

    int find(int x) {
        int root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) x = std::exchange(parent_[x], root);
        return root;
    }

    /// Returns the surviving root, or -1 when already joined.
    int unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return -1;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return a;
    }

    std::size_t size() const { return parent_.size(); }

private:
    std::vector<int> parent_;
    std::vector<int> rank_;
};

}  // namespace mfd
