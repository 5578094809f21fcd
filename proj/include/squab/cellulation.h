#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace squab {

/// Role of an edge in the cellulation.
///
/// Interior edges lie on two faces, boundary edges on one. Interior and
/// closed-boundary edges each carry one qubit; open-boundary edges carry none
/// and make both of their endpoints open.
enum class BoundaryClass : std::uint8_t { Interior, ClosedBoundary, OpenBoundary };

std::string_view to_string(BoundaryClass c);

struct Edge {
    std::array<std::uint32_t, 2> ends{};
    BoundaryClass boundary = BoundaryClass::Interior;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// A face is the set of edges on its boundary. Order is kept as given but
/// carries no meaning.
using Face = std::vector<std::uint32_t>;

inline constexpr std::uint32_t kNoQubit = 0xFFFFFFFFu;

/// Combinatorial surface (V, E, F) with open/closed boundary data.
///
/// Elements are addressed by dense indices. Construction does not validate;
/// use validate() before handing a surface to anything that assumes the
/// structural axioms. The qubit index lists non-open edges in ascending edge
/// order and is the coordinate system of every erasure bit-vector.
class Surface {
public:
    Surface() = default;
    Surface(std::string name, std::vector<bool> vertex_open, std::vector<Edge> edges, std::vector<Face> faces);

    const std::string& name() const { return name_; }
    std::size_t num_vertices() const { return vertex_open_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    std::size_t num_faces() const { return faces_.size(); }

    bool is_open(std::uint32_t v) const { return vertex_open_[v]; }
    const std::vector<bool>& vertex_open() const { return vertex_open_; }
    const Edge& edge(std::uint32_t e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Face& face(std::uint32_t f) const { return faces_[f]; }
    const std::vector<Face>& faces() const { return faces_; }

    /// n = |E̊|, the number of physical qubits.
    std::size_t num_qubits() const { return qubit_edges_.size(); }
    std::uint32_t qubit_edge(std::uint32_t q) const { return qubit_edges_[q]; }
    /// Qubit carried by edge `e`, or kNoQubit for open edges.
    std::uint32_t edge_qubit(std::uint32_t e) const { return edge_qubits_[e]; }
    std::size_t num_nonopen_vertices() const { return num_nonopen_vertices_; }

    Surface renamed(std::string name) const;

    friend bool operator==(const Surface& a, const Surface& b) {
        return a.name_ == b.name_ && a.vertex_open_ == b.vertex_open_ && a.edges_ == b.edges_ &&
               a.faces_ == b.faces_;
    }

private:
    std::string name_;
    std::vector<bool> vertex_open_;
    std::vector<Edge> edges_;
    std::vector<Face> faces_;

    std::vector<std::uint32_t> qubit_edges_;
    std::vector<std::uint32_t> edge_qubits_;
    std::size_t num_nonopen_vertices_ = 0;
};

enum class ElementKind : std::uint8_t { Vertex, Edge, Face, Surface };

struct Violation {
    std::string rule;
    ElementKind kind = ElementKind::Surface;
    std::uint32_t index = 0;

    std::string element() const;
    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(std::string_view rule) const;
    std::string summary(std::size_t max_items = 8) const;
};

/// Checks every structural axiom. Rule ids:
///   unknown-vertex, unknown-edge, empty-face, repeated-edge-in-face,
///   incidence-degree, open-vertex-flag, vertex-without-qubit.
ValidationReport validate(const Surface& s);

/// Thrown by operations whose precondition is a valid surface.
class InvalidSurface : public std::invalid_argument {
public:
    explicit InvalidSurface(ValidationReport report);
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// Throws InvalidSurface unless validate(s).ok().
void require_valid(const Surface& s);

/// |V| - |E| + |F| over the full element sets.
std::int64_t euler_characteristic(const Surface& s);

/// Generalized dual paired with the qubit bijection.
///
/// `qubit_map[q]` is the dual qubit carrying the same physical qubit as
/// primal qubit q.
struct DualSurface {
    Surface dual;
    std::vector<std::uint32_t> qubit_map;

    /// The pair seen from the other side: `primal` becomes the dual of `dual`.
    DualSurface reversed(const Surface& primal) const;

    friend bool operator==(const DualSurface&, const DualSurface&) = default;
};

/// Builds the generalized dual.
///
/// One non-open dual vertex per face; one open dual vertex per maximal run
/// of closed-boundary edges linked through non-open vertices. Interior edges
/// join their two face vertices, closed-boundary edges join their face vertex
/// to their run's open vertex. A dual edge is Interior when both primal
/// endpoints are non-open and ClosedBoundary otherwise. Dual faces are the
/// qubit-edge stars of non-open primal vertices; each star that passes
/// through an open dual vertex is closed off by an open loop there. Dual
/// qubit q corresponds to primal qubit q.
///
/// Throws InvalidSurface when `s` fails validation.
DualSurface derive_dual(const Surface& s);

/// Checks that `d.qubit_map` is a bijection onto the dual's qubits.
bool is_qubit_bijection(const Surface& primal, const DualSurface& d);

/// A surface together with its dual; the unit every downstream module consumes.
struct SurfaceCode {
    Surface surface;
    DualSurface dual;
};

/// Pairs `s` with its derived dual after validating it.
SurfaceCode make_code(Surface s);

}  // namespace squab
