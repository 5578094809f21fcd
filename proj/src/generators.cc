#include "squab/generators.h"

#include <charconv>
#include <string>
#include <tuple>

namespace squab {

std::string_view to_string(SideClass c) { return c == SideClass::Open ? "open" : "closed"; }

std::optional<SideClass> parse_side_class(std::string_view text) {
    if (text == "open" || text == "o") return SideClass::Open;
    if (text == "closed" || text == "c") return SideClass::Closed;
    return std::nullopt;
}

namespace {

BoundaryClass boundary_of(SideClass c) {
    return c == SideClass::Open ? BoundaryClass::OpenBoundary : BoundaryClass::ClosedBoundary;
}

SurfaceCode finish(Surface s) {
    ValidationReport report = validate(s);
    if (!report.ok()) {
        throw GeneratorError("generated lattice is degenerate: " + report.summary());
    }
    for (std::uint32_t q = 0; q < s.num_qubits(); ++q) {
        const Edge& e = s.edge(s.qubit_edge(q));
        if (s.is_open(e.ends[0]) && s.is_open(e.ends[1])) {
            throw GeneratorError("qubit on edge " + std::to_string(s.qubit_edge(q)) +
                                 " joins two open-boundary vertices and has no X check");
        }
    }
    return make_code(std::move(s));
}

void check_spec(const PlanarSpec& spec) {
    if (spec.cell_rows < 1 || spec.cell_cols < 1) {
        throw GeneratorError("planar lattice needs at least one cell row and column");
    }
    for (std::size_t i = 0; i < spec.holes.size(); ++i) {
        const HoleSpec& h = spec.holes[i];
        const std::string tag = "hole " + std::to_string(i);
        if (h.height < 1 || h.width < 1) {
            throw GeneratorError(tag + ": empty rectangle");
        }
        if (h.row < 1 || h.col < 1 || h.row + h.height > spec.cell_rows - 1 ||
            h.col + h.width > spec.cell_cols - 1) {
            throw GeneratorError(tag + ": must lie strictly inside the lattice (at least one face from every side)");
        }
        if (h.perimeter.size() != 1 && h.perimeter.size() != h.perimeter_length()) {
            throw GeneratorError(tag + ": perimeter sequence has " + std::to_string(h.perimeter.size()) +
                                 " classes, expected " + std::to_string(h.perimeter_length()));
        }
        for (std::size_t j = 0; j < i; ++j) {
            const HoleSpec& g = spec.holes[j];
            const bool row_gap = h.row + h.height < g.row || g.row + g.height < h.row;
            const bool col_gap = h.col + h.width < g.col || g.col + g.width < h.col;
            if (!row_gap && !col_gap) {
                throw GeneratorError(tag + " overlaps or touches hole " + std::to_string(j) +
                                     " (holes need a gap of at least one face)");
            }
        }
    }
}

std::uint32_t parse_uint(std::string_view text, std::string_view what) {
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw GeneratorError("bad " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

std::pair<std::uint32_t, std::uint32_t> parse_cells(std::string_view text) {
    const auto x = text.find('x');
    if (x == std::string_view::npos) {
        throw GeneratorError("cells must look like ROWSxCOLS, got '" + std::string(text) + "'");
    }
    return {parse_uint(text.substr(0, x), "cell rows"), parse_uint(text.substr(x + 1), "cell columns")};
}

HoleSpec parse_hole_spec(std::string_view text) {
    const auto colon = text.find(':');
    const auto c1 = text.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(',', c1 + 1);
    if (colon == std::string_view::npos || c2 == std::string_view::npos || c2 > colon) {
        throw GeneratorError("hole must look like ROW,COL,HxW:CLASS, got '" + std::string(text) + "'");
    }
    HoleSpec hole;
    hole.row = parse_uint(text.substr(0, c1), "hole row");
    hole.col = parse_uint(text.substr(c1 + 1, c2 - c1 - 1), "hole column");
    std::tie(hole.height, hole.width) = parse_cells(text.substr(c2 + 1, colon - c2 - 1));
    const std::string_view cls = text.substr(colon + 1);
    if (cls == "open" || cls == "closed") {
        hole.perimeter = {*parse_side_class(cls)};
        return hole;
    }
    hole.perimeter.clear();
    for (char ch : cls) {
        auto c = parse_side_class(std::string_view(&ch, 1));
        if (!c) {
            throw GeneratorError("hole perimeter letters must be 'o' or 'c', got '" + std::string(cls) + "'");
        }
        hole.perimeter.push_back(*c);
    }
    if (hole.perimeter.empty()) {
        throw GeneratorError("hole perimeter class missing in '" + std::string(text) + "'");
    }
    return hole;
}

std::string format_hole_spec(const HoleSpec& hole) {
    std::string out = std::to_string(hole.row) + "," + std::to_string(hole.col) + "," + std::to_string(hole.height) +
                      "x" + std::to_string(hole.width) + ":";
    if (hole.perimeter.size() == 1) {
        return out + std::string(to_string(hole.perimeter[0]));
    }
    for (SideClass c : hole.perimeter) {
        out += c == SideClass::Open ? 'o' : 'c';
    }
    return out;
}

SurfaceCode gen_toric(std::uint32_t d) {
    if (d < 2) {
        throw GeneratorError("toric lattice needs d >= 2");
    }
    const std::uint32_t dd = d * d;
    auto vertex = [d](std::uint32_t r, std::uint32_t c) { return (r % d) * d + (c % d); };
    auto horizontal = [d](std::uint32_t r, std::uint32_t c) { return (r % d) * d + (c % d); };
    auto vertical = [d, dd](std::uint32_t r, std::uint32_t c) { return dd + (r % d) * d + (c % d); };

    std::vector<Edge> edges(2 * dd);
    std::vector<Face> faces(dd);
    for (std::uint32_t r = 0; r < d; ++r) {
        for (std::uint32_t c = 0; c < d; ++c) {
            edges[horizontal(r, c)] = Edge{{vertex(r, c), vertex(r, c + 1)}, BoundaryClass::Interior};
            edges[vertical(r, c)] = Edge{{vertex(r, c), vertex(r + 1, c)}, BoundaryClass::Interior};
            faces[r * d + c] = {horizontal(r, c), vertical(r, c + 1), horizontal(r + 1, c), vertical(r, c)};
        }
    }
    return finish(Surface("toric-" + std::to_string(d), std::vector<bool>(dd, false), std::move(edges),
                          std::move(faces)));
}

SurfaceCode gen_bravyi_kitaev(std::uint32_t d) {
    if (d < 2) {
        throw GeneratorError("Bravyi-Kitaev lattice needs d >= 2");
    }
    PlanarSpec spec;
    spec.cell_rows = d - 1;
    spec.cell_cols = d;
    spec.left = spec.right = SideClass::Open;
    spec.top = spec.bottom = SideClass::Closed;
    spec.name = "bk-" + std::to_string(d);
    return gen_planar(spec);
}

SurfaceCode gen_planar(const PlanarSpec& spec) {
    check_spec(spec);
    const std::uint32_t rows = spec.cell_rows;
    const std::uint32_t cols = spec.cell_cols;

    const std::uint32_t num_vertices = (rows + 1) * (cols + 1);
    const std::uint32_t num_horizontal = (rows + 1) * cols;
    const std::uint32_t num_edges = num_horizontal + rows * (cols + 1);
    auto vertex = [cols](std::uint32_t i, std::uint32_t j) { return i * (cols + 1) + j; };
    auto horizontal = [cols](std::uint32_t i, std::uint32_t j) { return i * cols + j; };
    auto vertical = [cols, num_horizontal](std::uint32_t i, std::uint32_t j) {
        return num_horizontal + i * (cols + 1) + j;
    };

    std::vector<bool> face_kept(rows * cols, true);
    for (const HoleSpec& h : spec.holes) {
        for (std::uint32_t r = h.row; r < h.row + h.height; ++r) {
            for (std::uint32_t c = h.col; c < h.col + h.width; ++c) {
                face_kept[r * cols + c] = false;
            }
        }
    }

    std::vector<Edge> edges(num_edges);
    for (std::uint32_t i = 0; i <= rows; ++i) {
        for (std::uint32_t j = 0; j < cols; ++j) {
            edges[horizontal(i, j)].ends = {vertex(i, j), vertex(i, j + 1)};
        }
    }
    for (std::uint32_t i = 0; i < rows; ++i) {
        for (std::uint32_t j = 0; j <= cols; ++j) {
            edges[vertical(i, j)].ends = {vertex(i, j), vertex(i + 1, j)};
        }
    }

    std::vector<std::uint8_t> kept_faces_on(num_edges, 0);
    std::vector<Face> raw_faces;
    for (std::uint32_t r = 0; r < rows; ++r) {
        for (std::uint32_t c = 0; c < cols; ++c) {
            if (!face_kept[r * cols + c]) {
                continue;
            }
            Face f{horizontal(r, c), vertical(r, c + 1), horizontal(r + 1, c), vertical(r, c)};
            for (std::uint32_t e : f) {
                ++kept_faces_on[e];
            }
            raw_faces.push_back(std::move(f));
        }
    }

    for (std::uint32_t e = 0; e < num_edges; ++e) {
        edges[e].boundary = BoundaryClass::Interior;
    }
    for (std::uint32_t j = 0; j < cols; ++j) {
        edges[horizontal(0, j)].boundary = boundary_of(spec.top);
        edges[horizontal(rows, j)].boundary = boundary_of(spec.bottom);
    }
    for (std::uint32_t i = 0; i < rows; ++i) {
        edges[vertical(i, 0)].boundary = boundary_of(spec.left);
        edges[vertical(i, cols)].boundary = boundary_of(spec.right);
    }
    for (const HoleSpec& h : spec.holes) {
        std::size_t k = 0;
        auto mark = [&](std::uint32_t e) { edges[e].boundary = boundary_of(h.perimeter_class(k++)); };
        for (std::uint32_t j = 0; j < h.width; ++j) mark(horizontal(h.row, h.col + j));
        for (std::uint32_t i = 0; i < h.height; ++i) mark(vertical(h.row + i, h.col + h.width));
        for (std::uint32_t j = 0; j < h.width; ++j) mark(horizontal(h.row + h.height, h.col + h.width - 1 - j));
        for (std::uint32_t i = 0; i < h.height; ++i) mark(vertical(h.row + h.height - 1 - i, h.col));
    }

    // Drop edges inside holes, then vertices left without edges or touching
    // only open edges (corners between two open sides).
    std::vector<bool> edge_kept(num_edges);
    std::vector<bool> has_qubit_edge(num_vertices, false);
    std::vector<bool> has_any_edge(num_vertices, false);
    for (std::uint32_t e = 0; e < num_edges; ++e) {
        edge_kept[e] = kept_faces_on[e] > 0;
        if (!edge_kept[e]) {
            continue;
        }
        for (std::uint32_t v : edges[e].ends) {
            has_any_edge[v] = true;
            if (edges[e].boundary != BoundaryClass::OpenBoundary) {
                has_qubit_edge[v] = true;
            }
        }
    }
    std::vector<bool> vertex_kept(num_vertices);
    for (std::uint32_t v = 0; v < num_vertices; ++v) {
        vertex_kept[v] = has_any_edge[v] && has_qubit_edge[v];
    }
    for (std::uint32_t e = 0; e < num_edges; ++e) {
        if (edge_kept[e] && (!vertex_kept[edges[e].ends[0]] || !vertex_kept[edges[e].ends[1]])) {
            edge_kept[e] = false;
        }
    }

    std::vector<std::uint32_t> vertex_id(num_vertices, kNoQubit);
    std::uint32_t next = 0;
    for (std::uint32_t v = 0; v < num_vertices; ++v) {
        if (vertex_kept[v]) vertex_id[v] = next++;
    }
    std::vector<bool> open(next, false);
    std::vector<std::uint32_t> edge_id(num_edges, kNoQubit);
    std::vector<Edge> out_edges;
    for (std::uint32_t e = 0; e < num_edges; ++e) {
        if (!edge_kept[e]) {
            continue;
        }
        edge_id[e] = static_cast<std::uint32_t>(out_edges.size());
        Edge edge{{vertex_id[edges[e].ends[0]], vertex_id[edges[e].ends[1]]}, edges[e].boundary};
        if (edge.boundary == BoundaryClass::OpenBoundary) {
            open[edge.ends[0]] = open[edge.ends[1]] = true;
        }
        out_edges.push_back(edge);
    }
    std::vector<Face> out_faces;
    out_faces.reserve(raw_faces.size());
    for (const Face& f : raw_faces) {
        Face g;
        for (std::uint32_t e : f) {
            if (edge_kept[e]) g.push_back(edge_id[e]);
        }
        out_faces.push_back(std::move(g));
    }

    std::string name = spec.name;
    if (name.empty()) {
        name = "planar-" + std::to_string(rows) + "x" + std::to_string(cols);
        if (!spec.holes.empty()) name += "-h" + std::to_string(spec.holes.size());
    }
    return finish(Surface(std::move(name), std::move(open), std::move(out_edges), std::move(out_faces)));
}

}  // namespace squab
