#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "squab/cellulation.h"
#include "squab/generators.h"
#include "squab/homology.h"

namespace squab::testing {

struct Fixture {
    std::string label;
    SurfaceCode code;
    /// Set for closed orientable surfaces.
    std::optional<int> genus;
};

/// Two 3×3 tori, one face removed from each, glued along the removed squares.
/// Closed, orientable, genus 2: 14 vertices, 32 edges, 16 faces.
Surface genus2_surface();

/// Planar lattices with holes of every perimeter kind, including mixed ones.
std::vector<PlanarSpec> holed_planar_specs();

/// toric d = 2..6, Bravyi–Kitaev d = 2..5, the holed planar specs and the
/// genus-2 surface.
std::vector<Fixture> oracle_corpus();

/// Exact isomorphism of cellulations (vertex open flags and edge classes
/// preserved), by colour refinement with individualization.
bool isomorphic(const Surface& a, const Surface& b);

ErasurePattern random_erasure(std::size_t n, double p, std::uint64_t seed);

std::string read_text(const std::string& path);
/// Fresh empty directory under the system temp dir.
std::string make_temp_dir(const std::string& tag);

}  // namespace squab::testing
