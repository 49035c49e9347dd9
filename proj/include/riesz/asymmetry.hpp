#pragma once

#include <span>
#include <vector>

#include "riesz/voxel.hpp"

namespace riesz {

/// Sum over cells of occupancy times ball coverage, times h^n. Cells of the
/// ball outside the grid contribute nothing.
double ball_overlap(const VoxelSet& set, std::span<const double> center, double radius, int subsamples);

struct FraenkelResult {
  double alpha = 0.0;
  std::vector<double> center;  ///< optimal ball center
  double overlap = 0.0;        ///< Vol(A ∩ B(center, R_A))
  double lattice_alpha = 0.0;  ///< before continuum refinement
  int evaluations = 0;
};

/// alpha(A) = 1 - max_c Vol(A ∩ B(c, R_A)) / Vol(A), with an antialiased ball.
/// Coarse scan over lattice centers by FFT, then coordinate-wise golden-section
/// refinement from the best lattice candidates.
FraenkelResult fraenkel_asymmetry(const VoxelSet& set, int subsamples = 4);

}  // namespace riesz
