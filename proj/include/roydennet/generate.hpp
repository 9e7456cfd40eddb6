#pragma once
// Deterministic test spaces.

#include <cstddef>

#include "roydennet/geometry.hpp"

namespace roydennet {

/// n vertices 0..n-1, unit edges i ~ i+1.
SpaceData generate_path(std::size_t n);

/// rows x cols grid with unit edges; vertex r * cols + c.
SpaceData generate_lattice2d(std::size_t rows, std::size_t cols);

/// Ball of the `degree`-regular tree around a root, `depth` levels deep.
SpaceData generate_regular_tree(std::size_t degree, std::size_t depth);

struct HyperbolicMeshOptions {
  int face_sides = 3;          // {face_sides, vertex_degree} tiling; only triangles supported
  int vertex_degree = 7;
  double radius = 5.0;         // keep tiles whose corners lie within this hyperbolic radius
  std::size_t subdivisions = 2;  // midpoint subdivision rounds
};

/// Triangulated patch of the hyperbolic plane in Poincare-disk coordinates.
/// Edge lengths are hyperbolic, vertex weights are a third of the incident
/// triangle areas, and the outer rim is emitted as the designated boundary.
SpaceData generate_hyperbolic_disk_mesh(const HyperbolicMeshOptions& options = {});

}  // namespace roydennet
