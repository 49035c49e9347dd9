#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riesz/voxel.hpp"

namespace riesz {

/// Cells whose centers lie in the closed ball.
VoxelSet make_ball(const Grid& grid, double radius, std::vector<double> center = {});

/// Axis-aligned ellipsoid centered at the origin, cell-center sampling.
VoxelSet make_ellipsoid(const Grid& grid, std::vector<double> semi_axes);

/// Two balls of equal radius, centers at ±separation/2 on axis 0.
VoxelSet make_two_balls(const Grid& grid, double radius, double separation);

/// Axis-aligned box centered at the origin.
VoxelSet make_box(const Grid& grid, std::vector<double> sides);

/// Connected blob: a seeded random walk from the origin dilated by a ball.
/// Deterministic in the seed.
VoxelSet make_blob(const Grid& grid, std::uint64_t seed, int steps = 24, double step = 0.18,
                   double radius = 0.4);

struct CorpusEntry {
  std::string name;
  VoxelSet set;
};

/// Seeded test corpus on Grid::centered(n, cells, 4): balls, annulus
/// perturbations, ellipsoids, two-ball unions, boxes and blobs (36 sets for n = 3).
std::vector<CorpusEntry> standard_corpus(int cells, int n = 3);

}  // namespace riesz
