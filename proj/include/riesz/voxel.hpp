#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "riesz/kernel.hpp"
#include "riesz/radial.hpp"

namespace riesz {

inline constexpr int kMaxGridDim = 4;

using Index = std::array<int, kMaxGridDim>;

/// Uniform cubic grid. Cell (0,...,0) has its center at `origin`; flat indices
/// are row-major with axis 0 fastest.
class Grid {
 public:
  Grid(std::vector<int> shape, double spacing, std::vector<double> origin);

  /// `cells` per axis spanning [-side/2, side/2]^n, symmetric about the origin.
  static Grid centered(int n, int cells, double side);

  int n() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  int extent(int axis) const { return shape_[axis]; }
  double spacing() const { return h_; }
  const std::vector<double>& origin() const { return origin_; }
  std::size_t size() const { return size_; }
  std::size_t stride(int axis) const { return strides_[axis]; }
  double cell_volume() const;

  std::size_t flat(const Index& idx) const;
  Index unflat(std::size_t flat) const;
  double coordinate(int axis, int i) const { return origin_[axis] + i * h_; }
  std::vector<double> center(const Index& idx) const;
  /// Physical center of the grid box.
  std::vector<double> box_center() const;

  /// True if `other` uses the same spacing and its cell centers lie on this lattice.
  bool aligned_with(const Grid& other) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::vector<int> shape_;
  double h_;
  std::vector<double> origin_;
  std::vector<std::size_t> strides_;
  std::size_t size_;
};

/// Visits every cell of `grid` in flat order with its multi-index.
template <class F>
void for_each_cell(const Grid& grid, F&& f) {
  Index idx{};
  const int n = grid.n();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f(i, idx);
    for (int k = 0; k < n; ++k) {
      if (++idx[k] < grid.extent(k)) break;
      idx[k] = 0;
    }
  }
}

/// Binary occupancy on a grid.
class VoxelSet {
 public:
  explicit VoxelSet(Grid grid);
  VoxelSet(Grid grid, std::vector<std::uint8_t> occupancy);

  const Grid& grid() const { return grid_; }
  int n() const { return grid_.n(); }
  std::span<const std::uint8_t> occupancy() const { return occ_; }
  bool operator[](std::size_t i) const { return occ_[i] != 0; }
  void set(std::size_t i, bool value) { occ_[i] = value ? 1 : 0; }

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  double volume() const;
  double volume_radius() const;

  friend bool operator==(const VoxelSet&, const VoxelSet&) = default;

 private:
  Grid grid_;
  std::vector<std::uint8_t> occ_;
};

/// Throws precondition if `set` has no occupied cell.
void require_nonempty(const VoxelSet& set);

struct CoverageField {
  Grid grid;
  std::vector<double> values;
  double volume() const;
};

struct PotentialField {
  Grid grid;
  Kernel kernel;
  std::vector<double> values;
  double max() const;
};

/// Fraction of each cell inside the ball; boundary cells use subsamples^n points.
CoverageField rasterize_ball(const BallSpec& ball, const Grid& grid, int subsamples);

VoxelSet binarize(const CoverageField& field, double threshold = 0.5);

/// Threshold chosen among the coverage levels so that the set volume is
/// closest to the field volume. Cells of equal coverage are kept or dropped
/// together, which preserves the symmetries of the field.
VoxelSet binarize_volume(const CoverageField& field);

/// Cells whose center lies in the radial set centered at `center` (origin by default).
VoxelSet voxelize(const RadialSet& set, const Grid& grid, std::span<const double> center = {});

VoxelSet set_union(const VoxelSet& a, const VoxelSet& b);
VoxelSet set_intersection(const VoxelSet& a, const VoxelSet& b);
VoxelSet set_difference(const VoxelSet& a, const VoxelSet& b);
std::size_t symmetric_difference_count(const VoxelSet& a, const VoxelSet& b);

/// Mirror image through the grid's central plane orthogonal to `axis`.
VoxelSet reflect(const VoxelSet& set, int axis);

/// Lattice translation inside the same grid; occupied cells may not leave it.
VoxelSet translate(const VoxelSet& set, std::span<const int> offset);

struct BoundingBox {
  Index lo{};
  Index hi{};  ///< inclusive
};

BoundingBox bounding_box(const VoxelSet& set);

/// Smallest grid holding the occupied cells, grown by `margin` cells per side.
VoxelSet crop(const VoxelSet& set, int margin = 0);

/// Copies `set` into an aligned grid; occupied cells must fit.
VoxelSet embed(const VoxelSet& set, const Grid& target);

std::vector<double> barycenter(const VoxelSet& set);

/// Center of point symmetry x -> 2c - x if the occupancy has one.
std::optional<std::vector<double>> point_symmetry_center(const VoxelSet& set);

}  // namespace riesz
