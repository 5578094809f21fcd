#include "fixtures.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "squab/benchmark.h"
#include "squab/rng.h"

namespace squab::testing {

Surface genus2_surface() {
    const SurfaceCode torus = gen_toric(3);
    const Surface& t = torus.surface;
    // Face 0 of the 3×3 torus is bounded by edges {0, 10, 3, 9} through
    // vertices {0, 1, 4, 3}; both copies share those.
    const std::vector<std::uint32_t> glued_vertices = {0, 1, 3, 4};
    const std::vector<std::uint32_t> glued_edges = {0, 3, 9, 10};

    std::vector<std::uint32_t> vmap(t.num_vertices()), emap(t.num_edges());
    std::uint32_t next_vertex = static_cast<std::uint32_t>(t.num_vertices());
    for (std::uint32_t v = 0; v < t.num_vertices(); ++v) {
        vmap[v] = std::count(glued_vertices.begin(), glued_vertices.end(), v) ? v : next_vertex++;
    }
    std::uint32_t next_edge = static_cast<std::uint32_t>(t.num_edges());
    for (std::uint32_t e = 0; e < t.num_edges(); ++e) {
        emap[e] = std::count(glued_edges.begin(), glued_edges.end(), e) ? e : next_edge++;
    }

    std::vector<Edge> edges(next_edge);
    for (std::uint32_t e = 0; e < t.num_edges(); ++e) {
        edges[e] = t.edge(e);
        edges[emap[e]] = Edge{{vmap[t.edge(e).ends[0]], vmap[t.edge(e).ends[1]]}, BoundaryClass::Interior};
    }
    std::vector<Face> faces;
    for (std::uint32_t f = 1; f < t.num_faces(); ++f) {
        faces.push_back(t.face(f));
    }
    for (std::uint32_t f = 1; f < t.num_faces(); ++f) {
        Face g;
        for (std::uint32_t e : t.face(f)) g.push_back(emap[e]);
        faces.push_back(g);
    }
    return Surface("genus-2", std::vector<bool>(next_vertex, false), std::move(edges), std::move(faces));
}

std::vector<PlanarSpec> holed_planar_specs() {
    auto seq = [](const std::string& letters) {
        std::vector<SideClass> out;
        for (char c : letters) out.push_back(c == 'o' ? SideClass::Open : SideClass::Closed);
        return out;
    };
    std::vector<PlanarSpec> specs;
    for (SideClass outer : {SideClass::Closed, SideClass::Open}) {
        for (SideClass hole : {SideClass::Closed, SideClass::Open}) {
            PlanarSpec s;
            s.cell_rows = s.cell_cols = 6;
            s.top = s.bottom = s.left = s.right = outer;
            s.holes = {HoleSpec{2, 2, 2, 2, {hole}}};
            specs.push_back(s);
        }
    }
    {
        PlanarSpec s;
        s.cell_rows = 7;
        s.cell_cols = 9;
        s.left = s.right = SideClass::Open;
        s.holes = {HoleSpec{2, 2, 2, 2, {SideClass::Closed}}, HoleSpec{2, 5, 3, 2, {SideClass::Open}}};
        specs.push_back(s);
    }
    {
        // Half-open, half-closed perimeters.
        PlanarSpec s;
        s.cell_rows = 6;
        s.cell_cols = 8;
        s.holes = {HoleSpec{2, 1, 2, 2, seq("oooocccc")}, HoleSpec{1, 5, 3, 2, seq("ccccoooooo")}};
        specs.push_back(s);
    }
    {
        PlanarSpec s;
        s.cell_rows = 7;
        s.cell_cols = 7;
        s.top = s.bottom = SideClass::Open;
        s.holes = {HoleSpec{2, 2, 3, 3, seq("ccoooooccccc")}};
        specs.push_back(s);
    }
    return specs;
}

std::vector<Fixture> oracle_corpus() {
    std::vector<Fixture> corpus;
    for (std::uint32_t d = 2; d <= 6; ++d) {
        corpus.push_back({"toric-" + std::to_string(d), gen_toric(d), 1});
    }
    for (std::uint32_t d = 2; d <= 5; ++d) {
        corpus.push_back({"bk-" + std::to_string(d), gen_bravyi_kitaev(d), std::nullopt});
    }
    for (const PlanarSpec& spec : holed_planar_specs()) {
        SurfaceCode code = gen_planar(spec);
        std::string label = code.surface.name();
        for (const HoleSpec& h : spec.holes) label += "/" + format_hole_spec(h);
        label += "/" + std::string(to_string(spec.top)) + "," + std::string(to_string(spec.right)) + "," +
                 std::string(to_string(spec.bottom)) + "," + std::string(to_string(spec.left));
        corpus.push_back({label, std::move(code), std::nullopt});
    }
    corpus.push_back({"genus-2", make_code(genus2_surface()), 2});
    return corpus;
}

namespace {

/// Incidence graph: vertices, then edges, then faces of the cellulation.
struct Incidence {
    std::vector<std::uint64_t> label;
    std::vector<std::vector<std::uint32_t>> adj;  // with multiplicity
};

Incidence incidence(const Surface& s) {
    const std::size_t nv = s.num_vertices(), ne = s.num_edges();
    Incidence g;
    g.label.resize(nv + ne + s.num_faces());
    g.adj.resize(g.label.size());
    for (std::uint32_t v = 0; v < nv; ++v) g.label[v] = s.is_open(v) ? 1 : 0;
    for (std::uint32_t e = 0; e < ne; ++e) {
        g.label[nv + e] = 10 + static_cast<std::uint64_t>(s.edge(e).boundary);
        for (std::uint32_t v : s.edge(e).ends) {
            g.adj[nv + e].push_back(v);
            g.adj[v].push_back(static_cast<std::uint32_t>(nv + e));
        }
    }
    for (std::uint32_t f = 0; f < s.num_faces(); ++f) {
        const auto node = static_cast<std::uint32_t>(nv + ne + f);
        g.label[node] = 20;
        for (std::uint32_t e : s.face(f)) {
            g.adj[node].push_back(static_cast<std::uint32_t>(nv + e));
            g.adj[nv + e].push_back(node);
        }
    }
    return g;
}

/// Refines both colourings jointly until stable so colour ids are comparable.
void refine(const Incidence& a, std::vector<std::uint64_t>& ca, const Incidence& b, std::vector<std::uint64_t>& cb) {
    for (;;) {
        std::map<std::pair<std::uint64_t, std::vector<std::uint64_t>>, std::uint64_t> ids;
        auto signature = [](const Incidence& g, const std::vector<std::uint64_t>& c, std::size_t i) {
            std::vector<std::uint64_t> nb;
            for (std::uint32_t j : g.adj[i]) nb.push_back(c[j]);
            std::sort(nb.begin(), nb.end());
            return std::make_pair(c[i], nb);
        };
        std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>> sa, sb;
        for (std::size_t i = 0; i < ca.size(); ++i) sa.push_back(signature(a, ca, i));
        for (std::size_t i = 0; i < cb.size(); ++i) sb.push_back(signature(b, cb, i));
        for (const auto& s : sa) ids.emplace(s, 0);
        for (const auto& s : sb) ids.emplace(s, 0);
        std::uint64_t next = 0;
        for (auto& [key, id] : ids) id = next++;
        std::vector<std::uint64_t> na(ca.size()), nb2(cb.size());
        for (std::size_t i = 0; i < ca.size(); ++i) na[i] = ids[sa[i]];
        for (std::size_t i = 0; i < cb.size(); ++i) nb2[i] = ids[sb[i]];
        auto classes = [](const std::vector<std::uint64_t>& c) {
            std::vector<std::uint64_t> s = c;
            std::sort(s.begin(), s.end());
            return std::unique(s.begin(), s.end()) - s.begin();
        };
        const bool stable = classes(na) == classes(ca) && classes(nb2) == classes(cb);
        ca = std::move(na);
        cb = std::move(nb2);
        if (stable) return;
    }
}

bool histogram_equal(std::vector<std::uint64_t> x, std::vector<std::uint64_t> y) {
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
}

bool is_isomorphism(const Incidence& a, const Incidence& b, const std::vector<std::uint64_t>& ca,
                    const std::vector<std::uint64_t>& cb) {
    std::map<std::uint64_t, std::uint32_t> node_of_colour;
    for (std::uint32_t i = 0; i < cb.size(); ++i) node_of_colour[cb[i]] = i;
    std::vector<std::uint32_t> phi(ca.size());
    for (std::uint32_t i = 0; i < ca.size(); ++i) phi[i] = node_of_colour.at(ca[i]);
    for (std::uint32_t i = 0; i < ca.size(); ++i) {
        if (a.label[i] != b.label[phi[i]]) return false;
        std::vector<std::uint32_t> mapped;
        for (std::uint32_t j : a.adj[i]) mapped.push_back(phi[j]);
        std::vector<std::uint32_t> target = b.adj[phi[i]];
        std::sort(mapped.begin(), mapped.end());
        std::sort(target.begin(), target.end());
        if (mapped != target) return false;
    }
    return true;
}

bool search(const Incidence& a, std::vector<std::uint64_t> ca, const Incidence& b, std::vector<std::uint64_t> cb) {
    refine(a, ca, b, cb);
    if (!histogram_equal(ca, cb)) return false;
    std::map<std::uint64_t, std::size_t> count;
    for (std::uint64_t c : ca) ++count[c];
    std::uint64_t target = 0;
    std::size_t best = SIZE_MAX;
    for (auto [c, k] : count) {
        if (k > 1 && k < best) {
            best = k;
            target = c;
        }
    }
    if (best == SIZE_MAX) return is_isomorphism(a, b, ca, cb);
    const auto x = static_cast<std::size_t>(std::find(ca.begin(), ca.end(), target) - ca.begin());
    const std::uint64_t fresh = *std::max_element(ca.begin(), ca.end()) + 1;
    for (std::size_t y = 0; y < cb.size(); ++y) {
        if (cb[y] != target) continue;
        std::vector<std::uint64_t> na = ca, nb = cb;
        na[x] = fresh;
        nb[y] = fresh;
        if (search(a, std::move(na), b, std::move(nb))) return true;
    }
    return false;
}

}  // namespace

bool isomorphic(const Surface& a, const Surface& b) {
    if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() || a.num_faces() != b.num_faces()) {
        return false;
    }
    const Incidence ga = incidence(a), gb = incidence(b);
    return search(ga, ga.label, gb, gb.label);
}

ErasurePattern random_erasure(std::size_t n, double p, std::uint64_t seed) {
    TrialRng rng(mix64(seed));
    return sample_erasure(n, p, rng);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string make_temp_dir(const std::string& tag) {
    std::random_device rd;
    const auto dir = std::filesystem::temp_directory_path() / ("squab-" + tag + "-" + std::to_string(rd()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

}  // namespace squab::testing
