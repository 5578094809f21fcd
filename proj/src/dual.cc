#include "squab/cellulation.h"
#include "squab/union_find.h"

namespace squab {

DualSurface derive_dual(const Surface& s) {
    require_valid(s);

    const auto nv = static_cast<std::uint32_t>(s.num_vertices());
    const auto ne = static_cast<std::uint32_t>(s.num_edges());
    const auto nf = static_cast<std::uint32_t>(s.num_faces());

    // Closed-boundary runs: two closed edges belong to the same run when they
    // share a non-open vertex.
    UnionFind runs(ne);
    std::vector<std::uint32_t> first_closed_at(nv, kNoQubit);
    for (std::uint32_t e = 0; e < ne; ++e) {
        const Edge& edge = s.edge(e);
        if (edge.boundary != BoundaryClass::ClosedBoundary) {
            continue;
        }
        for (std::uint32_t v : edge.ends) {
            if (s.is_open(v)) {
                continue;
            }
            if (first_closed_at[v] == kNoQubit) {
                first_closed_at[v] = e;
            } else {
                runs.unite(first_closed_at[v], e);
            }
        }
    }
    std::vector<std::uint32_t> run_index(ne, kNoQubit);
    std::vector<std::uint32_t> root_run(ne, kNoQubit);
    std::uint32_t num_runs = 0;
    for (std::uint32_t e = 0; e < ne; ++e) {
        if (s.edge(e).boundary != BoundaryClass::ClosedBoundary) {
            continue;
        }
        const std::uint32_t root = runs.find(e);
        if (root_run[root] == kNoQubit) {
            root_run[root] = num_runs++;
        }
        run_index[e] = root_run[root];
    }

    std::vector<std::array<std::uint32_t, 2>> faces_of(ne, {kNoQubit, kNoQubit});
    for (std::uint32_t f = 0; f < nf; ++f) {
        for (std::uint32_t e : s.face(f)) {
            auto& slot = faces_of[e];
            (slot[0] == kNoQubit ? slot[0] : slot[1]) = f;
        }
    }

    std::vector<bool> dual_open(nf, false);
    dual_open.resize(nf + num_runs, true);

    std::vector<Edge> dual_edges;
    dual_edges.reserve(s.num_qubits() + nv);
    for (std::uint32_t q = 0; q < s.num_qubits(); ++q) {
        const std::uint32_t e = s.qubit_edge(q);
        const Edge& edge = s.edge(e);
        Edge d;
        if (edge.boundary == BoundaryClass::Interior) {
            d.ends = faces_of[e];
        } else {
            d.ends = {faces_of[e][0], nf + run_index[e]};
        }
        const int nonopen_ends = int(!s.is_open(edge.ends[0])) + int(!s.is_open(edge.ends[1]));
        d.boundary = nonopen_ends == 2 ? BoundaryClass::Interior : BoundaryClass::ClosedBoundary;
        dual_edges.push_back(d);
    }

    // Stars of non-open vertices, in vertex order.
    std::vector<std::uint32_t> star_of(nv, kNoQubit);
    std::vector<Face> dual_faces;
    dual_faces.reserve(s.num_nonopen_vertices());
    for (std::uint32_t v = 0; v < nv; ++v) {
        if (!s.is_open(v)) {
            star_of[v] = static_cast<std::uint32_t>(dual_faces.size());
            dual_faces.emplace_back();
        }
    }
    for (std::uint32_t q = 0; q < s.num_qubits(); ++q) {
        const Edge& edge = s.edge(s.qubit_edge(q));
        for (int i = 0; i < 2; ++i) {
            const std::uint32_t v = edge.ends[i];
            if (i == 1 && v == edge.ends[0]) {
                break;
            }
            if (star_of[v] != kNoQubit) {
                dual_faces[star_of[v]].push_back(q);
            }
        }
    }
    for (std::uint32_t v = 0; v < nv; ++v) {
        if (star_of[v] == kNoQubit || first_closed_at[v] == kNoQubit) {
            continue;
        }
        const std::uint32_t open_vertex = nf + run_index[first_closed_at[v]];
        dual_faces[star_of[v]].push_back(static_cast<std::uint32_t>(dual_edges.size()));
        dual_edges.push_back(Edge{{open_vertex, open_vertex}, BoundaryClass::OpenBoundary});
    }

    DualSurface out;
    out.dual = Surface(s.name() + "*", std::move(dual_open), std::move(dual_edges), std::move(dual_faces));
    out.qubit_map.resize(s.num_qubits());
    std::iota(out.qubit_map.begin(), out.qubit_map.end(), std::uint32_t{0});
    return out;
}

}  // namespace squab
