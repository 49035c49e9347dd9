#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "riesz/kernel.hpp"
#include "riesz/voxel.hpp"

namespace riesz {

/// Cell regularization of the singular kernel, at unit spacing.
struct CellKernelTable {
  Kernel kernel;
  double self_potential = 0.0;  ///< T = ∫_{[-1/2,1/2]^n} |u|^{-lambda} du
  double self_energy = 0.0;     ///< S = ∫∫_{cell x cell} |u - v|^{-lambda} du dv
  bool nearfield = false;
  /// Exact cell averages for offsets in [-2, 2]^n (index sum (d_k + 2) 5^k).
  std::vector<double> near_potential{};
  std::vector<double> near_energy{};

  /// Weight of lattice offset d in the potential sum (h^{n-lambda} factored out).
  double potential_weight(const Index& d) const;
  /// Weight of lattice offset d in the energy sum.
  double energy_weight(const Index& d) const;
};

/// Computed once per (kernel, nearfield) and cached.
const CellKernelTable& compute_cell_constants(const Kernel& kernel, bool nearfield = false);

struct EngineOptions {
  bool nearfield = false;
};

/// Φ(x_i) = h^{n-lambda} sum_j w(i - j) over occupied j; O(M cells).
PotentialField potential_direct(const VoxelSet& set, const Kernel& kernel, const EngineOptions& opt = {});

/// Direct sum at selected cells only (benchmarking and spot checks).
std::vector<double> potential_direct_at(const VoxelSet& set, const Kernel& kernel,
                                        std::span<const std::size_t> cells, const EngineOptions& opt = {});

/// Φ_A at arbitrary points: midpoint rule for far cells, tensor Gauss for
/// cells within 2.5 h of the point.
std::vector<double> potential_at_points(const VoxelSet& set, const Kernel& kernel,
                                        const std::vector<std::vector<double>>& points);

/// Same quantity by zero-padded FFT convolution.
PotentialField potential_fft(const VoxelSet& set, const Kernel& kernel, const EngineOptions& opt = {});

/// E = h^{2n-lambda} (sum_{i != j} w(i - j) + M S), by FFT on the cropped set.
double energy_voxel(const VoxelSet& set, const Kernel& kernel, const EngineOptions& opt = {});

/// O(M^2) double sum of the same quantity.
double energy_direct(const VoxelSet& set, const Kernel& kernel, const EngineOptions& opt = {});

/// Grid energy of a real-valued density f (same weights as energy_voxel).
double energy_density(const Grid& grid, std::span<const double> f, const Kernel& kernel,
                      const EngineOptions& opt = {});

struct PoissonResidual {
  double target = 0.0;  ///< n(n-2) omega_n
  double interior_mean = 0.0;  ///< mean |-ΔΦ - target| over deep interior cells
  double interior_max = 0.0;
  std::size_t interior_cells = 0;
  double exterior_mean = 0.0;  ///< mean |ΔΦ| over cells far from the set
  double exterior_max = 0.0;
  std::size_t exterior_cells = 0;
};

/// (2n+1)-point Laplacian of a Newton potential. Interior cells have their
/// whole Chebyshev 2-neighbourhood inside the set; exterior cells are farther
/// than `margin` cells from it.
PoissonResidual poisson_residual(const PotentialField& phi, const VoxelSet& set, int margin = 2);

enum class CrossTerm {
  grid,   ///< E_grid(χ_A - coverage of the ball), all terms on the grid
  exact,  ///< E_grid(A) + E(A*) - 2 h^n sum_A Φ_{B(c,R_A)}(x_i), exact ball terms
};

struct QuadraticOptions {
  CrossTerm mode = CrossTerm::grid;
  int subsamples = 4;
  EngineOptions engine;
};

struct QuadraticDistance {
  double value = 0.0;  ///< min_c E(χ_A - χ_{B(c,R_A)}) / E(A*)
  std::vector<double> center;
  double energy_set = 0.0;
  double energy_ball = 0.0;
  double cross = 0.0;
};

QuadraticDistance quadratic_distance(const VoxelSet& set, const Kernel& kernel, const QuadraticOptions& opt = {});

}  // namespace riesz
