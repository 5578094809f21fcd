#include "squab/surface_io.h"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace squab {

using nlohmann::json;

FormatError::FormatError(std::string code, std::string field, std::size_t line, const std::string& message)
    : std::runtime_error(message), code_(std::move(code)), field_(std::move(field)), line_(line) {}

namespace {

constexpr std::uint32_t kUnknownIndex = 0xFFFFFFFFu;

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
    throw FormatError("schema", field, 0, field + ": " + what);
}

void check_fields(const json& obj, const std::string& path, std::initializer_list<const char*> allowed, bool strict) {
    if (!strict) {
        return;
    }
    for (const auto& item : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; })) {
            throw FormatError("unknown-field", path + "/" + item.key(), 0,
                              path + "/" + item.key() + ": unknown field (strict mode)");
        }
    }
}

const json& require(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        schema_error(path + "/" + key, "missing required field");
    }
    return *it;
}

std::uint64_t read_id(const json& value, const std::string& path) {
    if (!value.is_number_unsigned()) {
        // Non-negative integers given as signed JSON numbers are fine.
        if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
            return value.get<std::uint64_t>();
        }
        schema_error(path, "expected a non-negative integer id");
    }
    return value.get<std::uint64_t>();
}

const json& require_array(const json& obj, const char* key, const std::string& path) {
    const json& arr = require(obj, key, path);
    if (!arr.is_array()) {
        schema_error(path + "/" + key, "expected an array");
    }
    return arr;
}

/// Maps file ids to dense indices in ascending id order.
class IdMap {
public:
    IdMap(const json& elements, const std::string& path) {
        std::vector<std::pair<std::uint64_t, std::size_t>> ids;
        ids.reserve(elements.size());
        for (std::size_t i = 0; i < elements.size(); ++i) {
            const std::string item_path = path + "/" + std::to_string(i);
            if (!elements[i].is_object()) {
                schema_error(item_path, "expected an object");
            }
            ids.emplace_back(read_id(require(elements[i], "id", item_path), item_path + "/id"), i);
        }
        std::sort(ids.begin(), ids.end());
        order_.resize(ids.size());
        for (std::size_t k = 0; k < ids.size(); ++k) {
            if (k > 0 && ids[k].first == ids[k - 1].first) {
                throw FormatError("duplicate-id", path + "/" + std::to_string(ids[k].second) + "/id", 0,
                                  path + ": duplicate-id " + std::to_string(ids[k].first));
            }
            index_.emplace(ids[k].first, static_cast<std::uint32_t>(k));
            order_[k] = ids[k].second;
        }
    }

    std::uint32_t lookup(std::uint64_t id) const {
        auto it = index_.find(id);
        return it == index_.end() ? kUnknownIndex : it->second;
    }
    /// Position in the source array of the k-th smallest id.
    std::size_t source(std::size_t k) const { return order_[k]; }
    std::size_t size() const { return order_.size(); }
    bool contains(std::uint64_t id) const { return index_.count(id) != 0; }

private:
    std::unordered_map<std::uint64_t, std::uint32_t> index_;
    std::vector<std::size_t> order_;
};

BoundaryClass parse_class(const json& value, const std::string& path) {
    if (value.is_string()) {
        const auto& s = value.get_ref<const std::string&>();
        if (s == "interior") return BoundaryClass::Interior;
        if (s == "closed") return BoundaryClass::ClosedBoundary;
        if (s == "open") return BoundaryClass::OpenBoundary;
    }
    schema_error(path, R"(expected "interior", "closed" or "open")");
}

struct ParsedSection {
    Surface surface;
    IdMap edge_ids;
};

ParsedSection parse_section(const json& obj, const std::string& path, std::string name, bool strict) {
    const json& vertices = require_array(obj, "vertices", path);
    const json& edges = require_array(obj, "edges", path);
    const json& faces = require_array(obj, "faces", path);

    IdMap vertex_ids(vertices, path + "/vertices");
    IdMap edge_ids(edges, path + "/edges");
    IdMap face_ids(faces, path + "/faces");

    std::vector<bool> open(vertex_ids.size(), false);
    for (std::size_t k = 0; k < vertex_ids.size(); ++k) {
        const std::string item = path + "/vertices/" + std::to_string(vertex_ids.source(k));
        const json& v = vertices[vertex_ids.source(k)];
        check_fields(v, item, {"id", "open"}, strict);
        auto it = v.find("open");
        if (it != v.end()) {
            if (!it->is_boolean()) {
                schema_error(item + "/open", "expected a boolean");
            }
            open[k] = it->get<bool>();
        }
    }

    std::vector<Edge> edge_list(edge_ids.size());
    for (std::size_t k = 0; k < edge_ids.size(); ++k) {
        const std::string item = path + "/edges/" + std::to_string(edge_ids.source(k));
        const json& e = edges[edge_ids.source(k)];
        check_fields(e, item, {"id", "ends", "class"}, strict);
        const json& ends = require(e, "ends", item);
        if (!ends.is_array() || ends.size() != 2) {
            schema_error(item + "/ends", "expected an array of 2 vertex ids");
        }
        for (int i = 0; i < 2; ++i) {
            edge_list[k].ends[i] = vertex_ids.lookup(read_id(ends[i], item + "/ends/" + std::to_string(i)));
        }
        edge_list[k].boundary = parse_class(require(e, "class", item), item + "/class");
    }

    std::vector<Face> face_list(face_ids.size());
    for (std::size_t k = 0; k < face_ids.size(); ++k) {
        const std::string item = path + "/faces/" + std::to_string(face_ids.source(k));
        const json& f = faces[face_ids.source(k)];
        check_fields(f, item, {"id", "edges"}, strict);
        const json& fe = require_array(f, "edges", item);
        face_list[k].reserve(fe.size());
        for (std::size_t i = 0; i < fe.size(); ++i) {
            face_list[k].push_back(edge_ids.lookup(read_id(fe[i], item + "/edges/" + std::to_string(i))));
        }
    }

    return ParsedSection{Surface(std::move(name), std::move(open), std::move(edge_list), std::move(face_list)),
                         std::move(edge_ids)};
}

std::size_t line_of(std::string_view payload, std::size_t byte_position) {
    byte_position = std::min(byte_position, payload.size());
    return 1 + static_cast<std::size_t>(std::count(payload.begin(), payload.begin() + byte_position, '\n'));
}

DualSurface parse_dual(const json& obj, const Surface& primal, const IdMap& primal_edges, bool strict) {
    const std::string path = "/dual";
    if (!obj.is_object()) {
        schema_error(path, "expected an object");
    }
    check_fields(obj, path, {"vertices", "edges", "faces", "edge_map"}, strict);
    ParsedSection section = parse_section(obj, path, primal.name() + "*", strict);
    const Surface& dual = section.surface;

    const json& pairs = require_array(obj, "edge_map", path);
    DualSurface out;
    out.qubit_map.assign(primal.num_qubits(), kNoQubit);
    std::vector<bool> dual_hit(dual.num_qubits(), false);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const std::string item = path + "/edge_map/" + std::to_string(i);
        if (!pairs[i].is_array() || pairs[i].size() != 2) {
            schema_error(item, "expected a [primal_edge, dual_edge] pair");
        }
        const std::uint32_t pe = primal_edges.lookup(read_id(pairs[i][0], item + "/0"));
        const std::uint32_t de = section.edge_ids.lookup(read_id(pairs[i][1], item + "/1"));
        if (pe == kUnknownIndex || de == kUnknownIndex) {
            throw FormatError("edge-map", item, 0, item + ": edge-map references an unknown edge");
        }
        const std::uint32_t pq = primal.edge_qubit(pe);
        const std::uint32_t dq = dual.edge_qubit(de);
        if (pq == kNoQubit || dq == kNoQubit) {
            throw FormatError("edge-map", item, 0, item + ": edge-map pairs must join non-open edges");
        }
        if (out.qubit_map[pq] != kNoQubit || dual_hit[dq]) {
            throw FormatError("edge-map", item, 0, item + ": edge-map is not a bijection");
        }
        out.qubit_map[pq] = dq;
        dual_hit[dq] = true;
    }
    if (dual.num_qubits() != primal.num_qubits() ||
        std::find(out.qubit_map.begin(), out.qubit_map.end(), kNoQubit) != out.qubit_map.end()) {
        throw FormatError("edge-map", path + "/edge_map", 0,
                          "edge-map must pair every non-open primal edge with a distinct non-open dual edge");
    }
    out.dual = std::move(section.surface);
    return out;
}

json vertex_array(const Surface& s) {
    json arr = json::array();
    for (std::uint32_t v = 0; v < s.num_vertices(); ++v) {
        arr.push_back({{"id", v}, {"open", s.is_open(v)}});
    }
    return arr;
}

json edge_array(const Surface& s) {
    json arr = json::array();
    for (std::uint32_t e = 0; e < s.num_edges(); ++e) {
        const Edge& edge = s.edge(e);
        arr.push_back({{"id", e}, {"ends", {edge.ends[0], edge.ends[1]}}, {"class", to_string(edge.boundary)}});
    }
    return arr;
}

json face_array(const Surface& s) {
    json arr = json::array();
    for (std::uint32_t f = 0; f < s.num_faces(); ++f) {
        arr.push_back({{"id", f}, {"edges", s.face(f)}});
    }
    return arr;
}

/// Writes `"key":[` with one compact element per line.
void write_array(std::ostringstream& out, const char* key, const json& arr) {
    out << '"' << key << "\":[";
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out << (i == 0 ? "\n" : ",\n") << arr[i].dump();
    }
    out << (arr.empty() ? "]" : "\n]");
}

void write_cells(std::ostringstream& out, const Surface& s) {
    write_array(out, "edges", edge_array(s));
    out << ',';
    write_array(out, "faces", face_array(s));
}

}  // namespace

DualSurface LoadedSurface::resolve_dual() const {
    if (explicit_dual) {
        return *explicit_dual;
    }
    return derive_dual(surface);
}

SurfaceCode LoadedSurface::to_code() const {
    require_valid(surface);
    return SurfaceCode{surface, resolve_dual()};
}

LoadedSurface load_surface(std::string_view payload, const LoadOptions& options) {
    json doc;
    try {
        doc = json::parse(payload.begin(), payload.end());
    } catch (const json::parse_error& err) {
        throw FormatError("syntax", "", line_of(payload, err.byte), err.what());
    }
    if (!doc.is_object()) {
        schema_error("", "top level must be an object");
    }
    check_fields(doc, "", {"format_version", "name", "vertices", "edges", "faces", "dual"}, options.strict);

    const json& version = require(doc, "format_version", "");
    if (!version.is_number_integer() || version.get<std::int64_t>() != 1) {
        throw FormatError("version", "/format_version", 0, "unsupported format_version (expected 1)");
    }
    std::string name;
    if (auto it = doc.find("name"); it != doc.end()) {
        if (!it->is_string()) {
            schema_error("/name", "expected a string");
        }
        name = it->get<std::string>();
    }

    ParsedSection primal = parse_section(doc, "", std::move(name), options.strict);
    LoadedSurface out{std::move(primal.surface), std::nullopt};
    if (auto it = doc.find("dual"); it != doc.end()) {
        out.explicit_dual = parse_dual(*it, out.surface, primal.edge_ids, options.strict);
    }
    return out;
}

LoadedSurface load_surface_file(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_surface(buffer.str(), options);
}

std::string save_surface(const Surface& s, const DualSurface* dual) {
    std::ostringstream out;
    out << '{';
    if (dual != nullptr) {
        out << "\"dual\":{";
        json pairs = json::array();
        for (std::uint32_t q = 0; q < s.num_qubits(); ++q) {
            pairs.push_back({s.qubit_edge(q), dual->dual.qubit_edge(dual->qubit_map[q])});
        }
        write_array(out, "edge_map", pairs);
        out << ',';
        write_cells(out, dual->dual);
        out << ',';
        write_array(out, "vertices", vertex_array(dual->dual));
        out << "},";
    }
    write_cells(out, s);
    out << ",\"format_version\":1,\"name\":" << json(s.name()).dump() << ',';
    write_array(out, "vertices", vertex_array(s));
    out << "}\n";
    return out.str();
}

void write_text_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
        throw std::runtime_error("failed writing " + path);
    }
}

}  // namespace squab
