#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "squab/cellulation.h"
#include "squab/union_find.h"

namespace squab {

/// Erasure pattern ℰ as a bit-vector over the qubit index of a surface.
class ErasurePattern {
public:
    ErasurePattern() = default;
    explicit ErasurePattern(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    static ErasurePattern full(std::size_t n);
    static ErasurePattern from_qubits(std::size_t n, std::span<const std::uint32_t> qubits);

    std::size_t size() const { return n_; }
    bool test(std::size_t q) const { return (words_[q >> 6] >> (q & 63)) & 1u; }
    void set(std::size_t q, bool value = true) {
        const std::uint64_t bit = std::uint64_t{1} << (q & 63);
        words_[q >> 6] = value ? (words_[q >> 6] | bit) : (words_[q >> 6] & ~bit);
    }
    void clear() { std::fill(words_.begin(), words_.end(), 0); }
    std::size_t weight() const;
    /// Resizes to `n` qubits, all unerased.
    void reset(std::size_t n);

    std::span<std::uint64_t> words() { return words_; }
    std::span<const std::uint64_t> words() const { return words_; }

    /// The same physical qubits expressed in the dual's qubit index.
    ErasurePattern mapped(std::span<const std::uint32_t> qubit_map) const;
    ErasurePattern complement() const;
    bool is_subset_of(const ErasurePattern& other) const;

    friend bool operator==(const ErasurePattern&, const ErasurePattern&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// dim H₁(G_ℰ): the number of independent non-trivial cycles covered by ℰ.
struct H1Rank {
    std::int64_t value = 0;
    friend bool operator==(const H1Rank&, const H1Rank&) = default;
};

struct Verdict {
    bool correctable = true;
    /// Covered logical Z errors (cycles of the primal).
    H1Rank h1_primal;
    /// Covered logical X errors (cycles of the dual).
    H1Rank h1_dual;
};

/// Number of connected components that contain no forbidden vertex.
/// Isolated vertices are components.
std::size_t components_avoiding_vertices(std::size_t num_vertices,
                                         std::span<const std::array<std::uint32_t, 2>> edges,
                                         const std::vector<bool>& forbidden_vertex);

/// Number of connected components that contain no forbidden edge.
std::size_t components_avoiding_edges(std::size_t num_vertices, std::span<const std::array<std::uint32_t, 2>> edges,
                                      const std::vector<bool>& forbidden_edge);

/// Which covered-cycle checks a caller needs.
enum class CheckSides : std::uint8_t { Both, PrimalOnly, DualOnly };

/// Per-thread scratch for ErasureChecker. Never share one across threads.
struct CheckerWorkspace {
    UnionFind uf;
};

/// Correctability oracle for one code, prepared once and then queried per
/// erasure in O(n α(n)).
///
/// h₁(G, ℰ) = |ℰ| − |V̊| + κ(G_ℰ avoiding open vertices)
///          − κ(G*_Ē avoiding open dual vertices) + κ(G avoiding closed edges)
///
/// The last term depends only on G and is precomputed. The dual side uses the
/// same formula with G* in place of G and G in place of its dual.
class ErasureChecker {
public:
    ErasureChecker(const Surface& surface, const DualSurface& dual);
    explicit ErasureChecker(const SurfaceCode& code) : ErasureChecker(code.surface, code.dual) {}

    std::size_t num_qubits() const { return n_; }

    /// `e` is indexed by the primal qubit index. Throws std::invalid_argument
    /// on length mismatch.
    H1Rank primal_h1(const ErasurePattern& e, CheckerWorkspace& ws) const;
    H1Rank dual_h1(const ErasurePattern& e, CheckerWorkspace& ws) const;
    Verdict check(const ErasurePattern& e, CheckerWorkspace& ws, CheckSides sides = CheckSides::Both) const;

private:
    /// One cellulation viewed through the primal qubit index.
    struct GraphView {
        std::size_t num_vertices = 0;
        std::size_t num_open = 0;
        std::vector<std::array<std::uint32_t, 2>> ends;  // by primal qubit
        // Union-find state with every open vertex pre-merged into a sentinel
        // node at index num_vertices.
        std::vector<std::uint32_t> parent0;
        std::vector<std::uint8_t> rank0;
        std::int64_t kappa_avoiding_closed = 0;
        std::int64_t nonopen_vertices = 0;
    };

    static GraphView make_view(const Surface& s, std::span<const std::uint32_t> to_local_qubit);
    /// Components without open vertices of the graph (view vertices, edges q
    /// with e.test(q) == take).
    static std::int64_t kappa_avoiding_open(const GraphView& view, const ErasurePattern& e, bool take,
                                            CheckerWorkspace& ws);
    H1Rank side_h1(const GraphView& own, const GraphView& other, const ErasurePattern& e, CheckerWorkspace& ws) const;
    void check_length(const ErasurePattern& e) const;

    std::size_t n_ = 0;
    GraphView primal_;
    GraphView dual_;
};

/// h₁(G, ℰ) for the primal side.
H1Rank induced_h1(const Surface& s, const DualSurface& dual, const ErasurePattern& e);

/// Decides whether ℰ covers a non-trivial logical error of either type.
Verdict is_correctable(const Surface& s, const DualSurface& dual, const ErasurePattern& e);

/// k = h₁(G, E̊), the number of logical qubits.
std::int64_t logical_qubit_count(const Surface& s, const DualSurface& dual);
inline std::int64_t logical_qubit_count(const SurfaceCode& code) {
    return logical_qubit_count(code.surface, code.dual);
}

}  // namespace squab
