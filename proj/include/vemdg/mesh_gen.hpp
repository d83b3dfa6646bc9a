#pragma once

#include <cstdint>

#include "vemdg/geometry.hpp"

namespace vemdg {

/// nx-by-ny grid of rectangular cells tiling the box.
PolygonalMesh generate_structured(int nx, int ny, const BoundingBox& box);

/// Bounded Voronoi tessellation of the box with Lloyd relaxation, built by
/// half-plane clipping against mirrored seeds so cells are exact convex clips.
/// Deterministic for a fixed seed; stops early when seeds stop moving.
PolygonalMesh generate_voronoi_lloyd(int n_cells, const BoundingBox& box, std::uint64_t seed,
                                     int lloyd_iters = 50);

}  // namespace vemdg
