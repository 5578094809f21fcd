#include "squab/homology.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace squab {

ErasurePattern ErasurePattern::full(std::size_t n) {
    ErasurePattern e(n);
    std::fill(e.words_.begin(), e.words_.end(), ~std::uint64_t{0});
    if (n % 64 != 0) {
        e.words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
    }
    return e;
}

ErasurePattern ErasurePattern::from_qubits(std::size_t n, std::span<const std::uint32_t> qubits) {
    ErasurePattern e(n);
    for (std::uint32_t q : qubits) {
        if (q >= n) {
            throw std::out_of_range("qubit " + std::to_string(q) + " outside pattern of length " + std::to_string(n));
        }
        e.set(q);
    }
    return e;
}

std::size_t ErasurePattern::weight() const {
    std::size_t w = 0;
    for (std::uint64_t word : words_) {
        w += static_cast<std::size_t>(std::popcount(word));
    }
    return w;
}

void ErasurePattern::reset(std::size_t n) {
    n_ = n;
    words_.assign((n + 63) / 64, 0);
}

ErasurePattern ErasurePattern::mapped(std::span<const std::uint32_t> qubit_map) const {
    ErasurePattern out(n_);
    for (std::size_t q = 0; q < n_; ++q) {
        if (test(q)) {
            out.set(qubit_map[q]);
        }
    }
    return out;
}

ErasurePattern ErasurePattern::complement() const {
    ErasurePattern out = full(n_);
    for (std::size_t i = 0; i < words_.size(); ++i) {
        out.words_[i] &= ~words_[i];
    }
    return out;
}

bool ErasurePattern::is_subset_of(const ErasurePattern& other) const {
    if (other.n_ != n_) {
        return false;
    }
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if ((words_[i] & ~other.words_[i]) != 0) {
            return false;
        }
    }
    return true;
}

std::size_t components_avoiding_vertices(std::size_t num_vertices,
                                         std::span<const std::array<std::uint32_t, 2>> edges,
                                         const std::vector<bool>& forbidden_vertex) {
    UnionFind uf(num_vertices);
    for (const auto& [a, b] : edges) {
        uf.unite(a, b);
    }
    std::vector<bool> tainted(num_vertices, false);
    for (std::uint32_t v = 0; v < num_vertices; ++v) {
        if (forbidden_vertex[v]) {
            tainted[uf.find(v)] = true;
        }
    }
    std::size_t count = 0;
    for (std::uint32_t v = 0; v < num_vertices; ++v) {
        if (uf.find(v) == v && !tainted[v]) {
            ++count;
        }
    }
    return count;
}

std::size_t components_avoiding_edges(std::size_t num_vertices, std::span<const std::array<std::uint32_t, 2>> edges,
                                      const std::vector<bool>& forbidden_edge) {
    UnionFind uf(num_vertices);
    for (const auto& [a, b] : edges) {
        uf.unite(a, b);
    }
    std::vector<bool> tainted(num_vertices, false);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (forbidden_edge[i]) {
            tainted[uf.find(edges[i][0])] = true;
        }
    }
    std::size_t count = 0;
    for (std::uint32_t v = 0; v < num_vertices; ++v) {
        if (uf.find(v) == v && !tainted[v]) {
            ++count;
        }
    }
    return count;
}

ErasureChecker::GraphView ErasureChecker::make_view(const Surface& s, std::span<const std::uint32_t> to_local_qubit) {
    GraphView view;
    view.num_vertices = s.num_vertices();
    view.nonopen_vertices = static_cast<std::int64_t>(s.num_nonopen_vertices());
    view.ends.resize(to_local_qubit.size());
    std::vector<bool> closed(to_local_qubit.size(), false);
    for (std::size_t q = 0; q < to_local_qubit.size(); ++q) {
        const Edge& edge = s.edge(s.qubit_edge(to_local_qubit[q]));
        view.ends[q] = edge.ends;
        closed[q] = edge.boundary == BoundaryClass::ClosedBoundary;
    }
    view.kappa_avoiding_closed =
        static_cast<std::int64_t>(components_avoiding_edges(view.num_vertices, view.ends, closed));

    const auto sentinel = static_cast<std::uint32_t>(view.num_vertices);
    view.parent0.resize(view.num_vertices + 1);
    std::iota(view.parent0.begin(), view.parent0.end(), std::uint32_t{0});
    view.rank0.assign(view.num_vertices + 1, 0);
    for (std::uint32_t v = 0; v < view.num_vertices; ++v) {
        if (s.is_open(v)) {
            view.parent0[v] = sentinel;
            ++view.num_open;
        }
    }
    view.rank0[sentinel] = view.num_open > 0 ? 1 : 0;
    return view;
}

ErasureChecker::ErasureChecker(const Surface& surface, const DualSurface& dual) : n_(surface.num_qubits()) {
    if (!is_qubit_bijection(surface, dual)) {
        throw std::invalid_argument("dual does not carry the primal qubits bijectively");
    }
    std::vector<std::uint32_t> identity(n_);
    std::iota(identity.begin(), identity.end(), std::uint32_t{0});
    primal_ = make_view(surface, identity);
    dual_ = make_view(dual.dual, dual.qubit_map);
}

std::int64_t ErasureChecker::kappa_avoiding_open(const GraphView& view, const ErasurePattern& e, bool take,
                                                 CheckerWorkspace& ws) {
    // Open vertices all hang off the sentinel, so every component except the
    // sentinel's one is free of open vertices.
    ws.uf.assign(view.parent0, view.rank0, view.num_vertices + 1 - view.num_open);
    const auto words = e.words();
    const std::size_t n = e.size();
    for (std::size_t w = 0; w < words.size(); ++w) {
        std::uint64_t bits = take ? words[w] : ~words[w];
        if (!take && w + 1 == words.size() && n % 64 != 0) {
            bits &= (std::uint64_t{1} << (n % 64)) - 1;
        }
        while (bits != 0) {
            const std::size_t q = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
            bits &= bits - 1;
            ws.uf.unite(view.ends[q][0], view.ends[q][1]);
        }
    }
    return static_cast<std::int64_t>(ws.uf.components()) - 1;
}

H1Rank ErasureChecker::side_h1(const GraphView& own, const GraphView& other, const ErasurePattern& e,
                               CheckerWorkspace& ws) const {
    const auto erased = static_cast<std::int64_t>(e.weight());
    const std::int64_t value = erased - own.nonopen_vertices + kappa_avoiding_open(own, e, true, ws) -
                               kappa_avoiding_open(other, e, false, ws) + own.kappa_avoiding_closed;
    return H1Rank{value};
}

void ErasureChecker::check_length(const ErasurePattern& e) const {
    if (e.size() != n_) {
        throw std::invalid_argument("erasure length " + std::to_string(e.size()) + " does not match n = " +
                                    std::to_string(n_));
    }
}

H1Rank ErasureChecker::primal_h1(const ErasurePattern& e, CheckerWorkspace& ws) const {
    check_length(e);
    return side_h1(primal_, dual_, e, ws);
}

H1Rank ErasureChecker::dual_h1(const ErasurePattern& e, CheckerWorkspace& ws) const {
    check_length(e);
    return side_h1(dual_, primal_, e, ws);
}

Verdict ErasureChecker::check(const ErasurePattern& e, CheckerWorkspace& ws, CheckSides sides) const {
    check_length(e);
    Verdict v;
    if (sides != CheckSides::DualOnly) {
        v.h1_primal = side_h1(primal_, dual_, e, ws);
    }
    if (sides != CheckSides::PrimalOnly) {
        v.h1_dual = side_h1(dual_, primal_, e, ws);
    }
    v.correctable = v.h1_primal.value + v.h1_dual.value == 0;
    return v;
}

H1Rank induced_h1(const Surface& s, const DualSurface& dual, const ErasurePattern& e) {
    CheckerWorkspace ws;
    return ErasureChecker(s, dual).primal_h1(e, ws);
}

Verdict is_correctable(const Surface& s, const DualSurface& dual, const ErasurePattern& e) {
    CheckerWorkspace ws;
    return ErasureChecker(s, dual).check(e, ws);
}

std::int64_t logical_qubit_count(const Surface& s, const DualSurface& dual) {
    return induced_h1(s, dual, ErasurePattern::full(s.num_qubits())).value;
}

}  // namespace squab
