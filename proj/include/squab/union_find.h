#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace squab {

/// Disjoint-set forest with path halving and union by rank.
class UnionFind {
public:
    UnionFind() = default;
    explicit UnionFind(std::size_t n) { reset(n); }

    void reset(std::size_t n) {
        parent_.resize(n);
        std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
        rank_.assign(n, 0);
        components_ = n;
    }

    /// Restores a previously captured state in O(n) without reallocating.
    void assign(const std::vector<std::uint32_t>& parent, const std::vector<std::uint8_t>& rank, std::size_t components) {
        parent_ = parent;
        rank_ = rank;
        components_ = components;
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns true when `a` and `b` were in different sets.
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        if (rank_[a] < rank_[b]) {
            std::swap(a, b);
        }
        parent_[b] = a;
        if (rank_[a] == rank_[b]) {
            ++rank_[a];
        }
        --components_;
        return true;
    }

    std::size_t size() const { return parent_.size(); }
    std::size_t components() const { return components_; }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> rank_;
    std::size_t components_ = 0;
};

}  // namespace squab
