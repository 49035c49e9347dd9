#pragma once

#include <vector>

#include "riesz/kernel.hpp"
#include "riesz/voxel.hpp"

namespace riesz {

struct HalfspaceSymmetrization {
  VoxelSet plus;   ///< part below the plane and its mirror image
  VoxelSet minus;  ///< part above the plane and its mirror image
  double imbalance = 0.0;  ///< |Vol(below) - Vol(above)|
  int axis = 0;
  double plane = 0.0;  ///< coordinate of the plane along `axis`
};

/// Symmetrization at the grid face plane orthogonal to `axis` that best
/// bisects the volume. Both outputs share one grid large enough for either.
HalfspaceSymmetrization symmetrize_halfspace(const VoxelSet& set, int axis);

struct FmpResult {
  VoxelSet set;
  double alpha_in = 0.0;
  double alpha_out = 0.0;
  double ratio = 0.0;  ///< alpha_out / alpha_in, 0 when alpha_in = 0
  double imbalance = 0.0;  ///< summed over the chosen branch
  std::vector<double> center{};  ///< intersection point of the symmetry planes
};

/// Successive symmetrization along every axis; of the 2^n outcomes the one with
/// the largest Fraenkel asymmetry is kept.
FmpResult fmp_symmetrize(const VoxelSet& set, int subsamples = 4);

struct Truncation {
  VoxelSet set;
  double outer_radius = 0.0;  ///< R: cells of A beyond it are removed
  double inner_radius = 0.0;  ///< r: cells of B_r outside A* are added
  std::size_t removed = 0;
  std::size_t added = 0;
};

/// (A ∩ B_R) ∪ (B_r \ A*) with A* the ball of volume Vol(A) centered at the
/// physical origin and R = R_A (1 + c alpha0^{1 - lambda/n}). Added cells are
/// taken in order of distance, whole distance shells first and then antipodal
/// pairs, so the volume matches within one cell and origin symmetry survives.
Truncation truncate_tail(const VoxelSet& set, double alpha0, double c, const Kernel& kernel);

/// Symmetric decreasing rearrangement on the grid: values sorted descending
/// are assigned to cells in order of distance from the grid center (ties by
/// flat index).
PotentialField rearrange_decreasing(const PotentialField& field);

/// Cell flat indices sorted by distance from the grid center, ties by index.
std::vector<std::size_t> distance_order(const Grid& grid);

}  // namespace riesz
