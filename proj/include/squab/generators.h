#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "squab/cellulation.h"

namespace squab {

/// Perimeter class of a boundary that can carry qubits or not.
enum class SideClass : std::uint8_t { Open, Closed };

std::string_view to_string(SideClass c);
std::optional<SideClass> parse_side_class(std::string_view text);

/// Rectangular hole punched out of a planar lattice, in face coordinates.
///
/// `perimeter` is either one class for every perimeter edge or an explicit
/// sequence of 2·(height + width) classes running clockwise from the hole's
/// top-left corner (top edge left to right, right side downward, bottom right
/// to left, left side upward).
struct HoleSpec {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    std::uint32_t height = 1;
    std::uint32_t width = 1;
    std::vector<SideClass> perimeter{SideClass::Closed};

    std::size_t perimeter_length() const { return 2 * (std::size_t{height} + width); }
    SideClass perimeter_class(std::size_t i) const { return perimeter.size() == 1 ? perimeter[0] : perimeter[i]; }
};

struct PlanarSpec {
    std::uint32_t cell_rows = 1;
    std::uint32_t cell_cols = 1;
    SideClass top = SideClass::Closed;
    SideClass bottom = SideClass::Closed;
    SideClass left = SideClass::Closed;
    SideClass right = SideClass::Closed;
    std::vector<HoleSpec> holes;
    std::string name;
};

/// Rejected generator parameters.
class GeneratorError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Square lattice on the torus: d² vertices, 2d² interior edges, d² faces.
///
/// Vertex (r, c) is r·d + c. Horizontal edge (r, c) → (r, c+1) is r·d + c;
/// vertical edge (r, c) → (r+1, c) is d² + r·d + c. Face (r, c) is the square
/// with top-left corner (r, c).
SurfaceCode gen_toric(std::uint32_t d);

/// Bravyi–Kitaev planar code of distance d: a (d−1) × d face grid with open
/// left/right sides and closed top/bottom sides.
SurfaceCode gen_bravyi_kitaev(std::uint32_t d);

/// Rectangular face grid with per-side boundary classes and rectangular holes.
///
/// Vertices form a (rows+1) × (cols+1) grid; horizontal edges come first in
/// row-major order, then vertical ones. Elements inside holes are dropped and
/// ids compacted. Corner vertices whose two sides are both open would touch
/// only open edges and are dropped together with those edges.
SurfaceCode gen_planar(const PlanarSpec& spec);

/// Parses `ROW,COL,HxW:CLASS` where CLASS is `open`, `closed`, or a string of
/// `o`/`c` letters giving the clockwise perimeter sequence.
HoleSpec parse_hole_spec(std::string_view text);
std::string format_hole_spec(const HoleSpec& hole);

/// Parses `ROWSxCOLS`.
std::pair<std::uint32_t, std::uint32_t> parse_cells(std::string_view text);

}  // namespace squab
