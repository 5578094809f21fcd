#include "squab/cellulation.h"

#include <algorithm>
#include <sstream>

namespace squab {

std::string_view to_string(BoundaryClass c) {
    switch (c) {
        case BoundaryClass::Interior:
            return "interior";
        case BoundaryClass::ClosedBoundary:
            return "closed";
        case BoundaryClass::OpenBoundary:
            return "open";
    }
    return "?";
}

Surface::Surface(std::string name, std::vector<bool> vertex_open, std::vector<Edge> edges, std::vector<Face> faces)
    : name_(std::move(name)),
      vertex_open_(std::move(vertex_open)),
      edges_(std::move(edges)),
      faces_(std::move(faces)) {
    edge_qubits_.assign(edges_.size(), kNoQubit);
    for (std::uint32_t e = 0; e < edges_.size(); ++e) {
        if (edges_[e].boundary != BoundaryClass::OpenBoundary) {
            edge_qubits_[e] = static_cast<std::uint32_t>(qubit_edges_.size());
            qubit_edges_.push_back(e);
        }
    }
    num_nonopen_vertices_ = static_cast<std::size_t>(std::count(vertex_open_.begin(), vertex_open_.end(), false));
}

Surface Surface::renamed(std::string name) const {
    Surface out = *this;
    out.name_ = std::move(name);
    return out;
}

std::string Violation::element() const {
    std::string prefix;
    switch (kind) {
        case ElementKind::Vertex:
            prefix = "vertex ";
            break;
        case ElementKind::Edge:
            prefix = "edge ";
            break;
        case ElementKind::Face:
            prefix = "face ";
            break;
        case ElementKind::Surface:
            return "surface";
    }
    return prefix + std::to_string(index);
}

bool ValidationReport::has(std::string_view rule) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.rule == rule; });
}

std::string ValidationReport::summary(std::size_t max_items) const {
    if (ok()) {
        return "ok";
    }
    std::ostringstream out;
    out << violations.size() << " violation(s):";
    for (std::size_t i = 0; i < violations.size() && i < max_items; ++i) {
        out << " [" << violations[i].rule << ": " << violations[i].element() << "]";
    }
    if (violations.size() > max_items) {
        out << " ...";
    }
    return out.str();
}

ValidationReport validate(const Surface& s) {
    ValidationReport report;
    auto flag = [&](const char* rule, ElementKind kind, std::size_t index) {
        report.violations.push_back({rule, kind, static_cast<std::uint32_t>(index)});
    };

    const std::size_t nv = s.num_vertices();
    const std::size_t ne = s.num_edges();

    std::vector<bool> touches_open_edge(nv, false);
    std::vector<bool> touches_qubit_edge(nv, false);
    for (std::size_t e = 0; e < ne; ++e) {
        const Edge& edge = s.edge(static_cast<std::uint32_t>(e));
        bool ends_ok = true;
        for (std::uint32_t v : edge.ends) {
            if (v >= nv) {
                ends_ok = false;
            }
        }
        if (!ends_ok) {
            flag("unknown-vertex", ElementKind::Edge, e);
            continue;
        }
        for (std::uint32_t v : edge.ends) {
            if (edge.boundary == BoundaryClass::OpenBoundary) {
                touches_open_edge[v] = true;
            } else {
                touches_qubit_edge[v] = true;
            }
        }
    }

    std::vector<std::uint32_t> face_count(ne, 0);
    std::vector<std::uint32_t> last_seen(ne, 0xFFFFFFFFu);
    for (std::size_t f = 0; f < s.num_faces(); ++f) {
        const Face& face = s.face(static_cast<std::uint32_t>(f));
        if (face.empty()) {
            flag("empty-face", ElementKind::Face, f);
        }
        bool unknown = false;
        bool repeated = false;
        for (std::uint32_t e : face) {
            if (e >= ne) {
                unknown = true;
                continue;
            }
            if (last_seen[e] == f) {
                repeated = true;
                continue;
            }
            last_seen[e] = static_cast<std::uint32_t>(f);
            ++face_count[e];
        }
        if (unknown) {
            flag("unknown-edge", ElementKind::Face, f);
        }
        if (repeated) {
            flag("repeated-edge-in-face", ElementKind::Face, f);
        }
    }

    for (std::size_t e = 0; e < ne; ++e) {
        const std::uint32_t expected = s.edge(static_cast<std::uint32_t>(e)).boundary == BoundaryClass::Interior ? 2 : 1;
        if (face_count[e] != expected) {
            flag("incidence-degree", ElementKind::Edge, e);
        }
    }

    for (std::size_t v = 0; v < nv; ++v) {
        if (s.is_open(static_cast<std::uint32_t>(v)) != touches_open_edge[v]) {
            flag("open-vertex-flag", ElementKind::Vertex, v);
        }
        if (!touches_qubit_edge[v]) {
            flag("vertex-without-qubit", ElementKind::Vertex, v);
        }
    }
    return report;
}

InvalidSurface::InvalidSurface(ValidationReport report)
    : std::invalid_argument("invalid surface: " + report.summary()), report_(std::move(report)) {}

void require_valid(const Surface& s) {
    ValidationReport report = validate(s);
    if (!report.ok()) {
        throw InvalidSurface(std::move(report));
    }
}

std::int64_t euler_characteristic(const Surface& s) {
    return static_cast<std::int64_t>(s.num_vertices()) - static_cast<std::int64_t>(s.num_edges()) +
           static_cast<std::int64_t>(s.num_faces());
}

DualSurface DualSurface::reversed(const Surface& primal) const {
    DualSurface out;
    out.dual = primal;
    out.qubit_map.assign(qubit_map.size(), kNoQubit);
    for (std::uint32_t q = 0; q < qubit_map.size(); ++q) {
        out.qubit_map[qubit_map[q]] = q;
    }
    return out;
}

bool is_qubit_bijection(const Surface& primal, const DualSurface& d) {
    const std::size_t n = primal.num_qubits();
    if (d.qubit_map.size() != n || d.dual.num_qubits() != n) {
        return false;
    }
    std::vector<bool> hit(n, false);
    for (std::uint32_t q : d.qubit_map) {
        if (q >= n || hit[q]) {
            return false;
        }
        hit[q] = true;
    }
    return true;
}

SurfaceCode make_code(Surface s) {
    DualSurface dual = derive_dual(s);
    return SurfaceCode{std::move(s), std::move(dual)};
}

}  // namespace squab
