#include "riesz/voxel.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <numeric>
#include <string>

#include "riesz/error.hpp"
#include "riesz/quadrature.hpp"

namespace riesz {

namespace {

void require_same_grid(const VoxelSet& a, const VoxelSet& b) {
  if (!(a.grid() == b.grid())) throw Error(Errc::invalid_argument, "sets live on different grids");
}

std::string shape_string(const std::vector<int>& shape) {
  std::string s;
  for (std::size_t k = 0; k < shape.size(); ++k) s += (k ? "x" : "") + std::to_string(shape[k]);
  return s;
}

}  // namespace

Grid::Grid(std::vector<int> shape, double spacing, std::vector<double> origin)
    : shape_(std::move(shape)), h_(spacing), origin_(std::move(origin)) {
  if (shape_.empty() || static_cast<int>(shape_.size()) > kMaxGridDim) {
    throw Error(Errc::unsupported_dimension,
                "voxel grids support 1 <= n <= " + std::to_string(kMaxGridDim));
  }
  if (origin_.size() != shape_.size()) throw Error(Errc::invalid_argument, "origin has wrong dimension");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw Error(Errc::invalid_argument, "spacing must be positive");
  size_ = 1;
  for (int e : shape_) {
    if (e < 1) throw Error(Errc::invalid_argument, "grid extent must be >= 1, got " + shape_string(shape_));
    strides_.push_back(size_);
    size_ *= static_cast<std::size_t>(e);
  }
}

Grid Grid::centered(int n, int cells, double side) {
  if (n < 1) throw Error(Errc::invalid_dimension, "n must be >= 1");
  if (cells < 1) throw Error(Errc::invalid_argument, "cells must be >= 1");
  const double h = side / cells;
  return Grid(std::vector<int>(n, cells), h, std::vector<double>(n, -0.5 * (cells - 1) * h));
}

double Grid::cell_volume() const { return std::pow(h_, n()); }

std::size_t Grid::flat(const Index& idx) const {
  std::size_t f = 0;
  for (int k = 0; k < n(); ++k) f += static_cast<std::size_t>(idx[k]) * strides_[k];
  return f;
}

Index Grid::unflat(std::size_t flat) const {
  Index idx{};
  for (int k = 0; k < n(); ++k) {
    idx[k] = static_cast<int>(flat % shape_[k]);
    flat /= shape_[k];
  }
  return idx;
}

std::vector<double> Grid::center(const Index& idx) const {
  std::vector<double> x(n());
  for (int k = 0; k < n(); ++k) x[k] = coordinate(k, idx[k]);
  return x;
}

std::vector<double> Grid::box_center() const {
  std::vector<double> x(n());
  for (int k = 0; k < n(); ++k) x[k] = origin_[k] + 0.5 * (shape_[k] - 1) * h_;
  return x;
}

bool Grid::aligned_with(const Grid& other) const {
  if (other.n() != n() || std::abs(other.h_ - h_) > 1e-12 * h_) return false;
  for (int k = 0; k < n(); ++k) {
    const double off = (other.origin_[k] - origin_[k]) / h_;
    if (std::abs(off - std::round(off)) > 1e-9) return false;
  }
  return true;
}

VoxelSet::VoxelSet(Grid grid) : grid_(std::move(grid)), occ_(grid_.size(), 0) {}

VoxelSet::VoxelSet(Grid grid, std::vector<std::uint8_t> occupancy)
    : grid_(std::move(grid)), occ_(std::move(occupancy)) {
  if (occ_.size() != grid_.size()) {
    throw Error(Errc::invalid_argument, "occupancy length " + std::to_string(occ_.size()) +
                                            " does not match grid " + shape_string(grid_.shape()));
  }
  for (auto& v : occ_) v = v ? 1 : 0;
}

std::size_t VoxelSet::count() const {
  return static_cast<std::size_t>(std::count(occ_.begin(), occ_.end(), std::uint8_t{1}));
}

double VoxelSet::volume() const { return static_cast<double>(count()) * grid_.cell_volume(); }

double VoxelSet::volume_radius() const { return riesz::volume_radius(volume(), n()); }

void require_nonempty(const VoxelSet& set) {
  if (set.empty()) throw Error(Errc::precondition, "set is empty (finite positive volume required)");
}

double CoverageField::volume() const {
  Accumulator acc;
  for (double v : values) acc += v;
  return acc.value() * grid.cell_volume();
}

double PotentialField::max() const { return *std::max_element(values.begin(), values.end()); }

CoverageField rasterize_ball(const BallSpec& ball, const Grid& grid, int subsamples) {
  const int n = grid.n();
  if (subsamples < 1) throw Error(Errc::invalid_argument, "subsamples must be >= 1");
  if (static_cast<int>(ball.center.size()) != n) throw Error(Errc::invalid_argument, "ball center has wrong dimension");
  if (!(ball.radius > 0.0)) throw Error(Errc::invalid_argument, "ball radius must be positive");
  const double h = grid.spacing();
  const double R = ball.radius;
  for (int k = 0; k < n; ++k) {
    const double lo = grid.origin()[k] - 0.5 * h;
    const double hi = lo + grid.extent(k) * h;
    if (!(ball.center[k] - R > lo && ball.center[k] + R < hi)) {
      throw Error(Errc::precondition, "ball is not strictly inside the grid box");
    }
  }

  const double half_diag = 0.5 * h * std::sqrt(static_cast<double>(n));
  const double inner2 = R > half_diag ? (R - half_diag) * (R - half_diag) : -1.0;
  const double outer2 = (R + half_diag) * (R + half_diag);
  const double R2 = R * R;
  int samples = 1;
  for (int k = 0; k < n; ++k) samples *= subsamples;

  CoverageField out{grid, std::vector<double>(grid.size(), 0.0)};
  for_each_cell(grid, [&](std::size_t i, const Index& idx) {
    double d2 = 0.0;
    double x[kMaxGridDim];
    for (int k = 0; k < n; ++k) {
      x[k] = grid.coordinate(k, idx[k]) - ball.center[k];
      d2 += x[k] * x[k];
    }
    if (d2 <= inner2) {
      out.values[i] = 1.0;
      return;
    }
    if (d2 >= outer2) return;
    int inside = 0;
    for (int s = 0; s < samples; ++s) {
      int rest = s;
      double p2 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double u = x[k] + h * ((rest % subsamples + 0.5) / subsamples - 0.5);
        rest /= subsamples;
        p2 += u * u;
      }
      if (p2 < R2) ++inside;
    }
    out.values[i] = static_cast<double>(inside) / samples;
  });
  return out;
}

VoxelSet binarize(const CoverageField& field, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error(Errc::invalid_argument, "threshold must be in (0, 1)");
  std::vector<std::uint8_t> occ(field.values.size());
  for (std::size_t i = 0; i < occ.size(); ++i) occ[i] = field.values[i] >= threshold;
  return VoxelSet(field.grid, std::move(occ));
}

VoxelSet binarize_volume(const CoverageField& field) {
  std::vector<double> levels;
  for (double v : field.values) {
    if (v > 0.0) levels.push_back(v);
  }
  std::sort(levels.begin(), levels.end(), std::greater<>());
  const double target = field.volume() / field.grid.cell_volume();
  // walk down the tie groups; levels closer than 1e-12 count as equal
  double best_err = target;
  double cut = 2.0;
  std::size_t i = 0;
  while (i < levels.size()) {
    std::size_t j = i;
    while (j < levels.size() && levels[i] - levels[j] <= 1e-12) ++j;
    const double err = std::abs(static_cast<double>(j) - target);
    if (err < best_err) {
      best_err = err;
      cut = levels[j - 1] - 1e-12;
    }
    if (static_cast<double>(j) > target) break;
    i = j;
  }
  std::vector<std::uint8_t> occ(field.values.size());
  for (std::size_t k = 0; k < occ.size(); ++k) occ[k] = field.values[k] > 0.0 && field.values[k] >= cut;
  return VoxelSet(field.grid, std::move(occ));
}

VoxelSet voxelize(const RadialSet& set, const Grid& grid, std::span<const double> center) {
  const int n = grid.n();
  if (set.n() != n) throw Error(Errc::invalid_dimension, "radial set and grid dimensions differ");
  if (!center.empty() && static_cast<int>(center.size()) != n) {
    throw Error(Errc::invalid_argument, "center has wrong dimension");
  }
  VoxelSet out(grid);
  const auto shells = set.shells();
  for_each_cell(grid, [&](std::size_t i, const Index& idx) {
    double d2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double x = grid.coordinate(k, idx[k]) - (center.empty() ? 0.0 : center[k]);
      d2 += x * x;
    }
    const double r = std::sqrt(d2);
    for (const Shell& s : shells) {
      if (r >= s.inner && r < s.outer) {
        out.set(i, true);
        break;
      }
    }
  });
  return out;
}

VoxelSet set_union(const VoxelSet& a, const VoxelSet& b) {
  require_same_grid(a, b);
  VoxelSet out(a.grid());
  for (std::size_t i = 0; i < a.grid().size(); ++i) out.set(i, a[i] || b[i]);
  return out;
}

VoxelSet set_intersection(const VoxelSet& a, const VoxelSet& b) {
  require_same_grid(a, b);
  VoxelSet out(a.grid());
  for (std::size_t i = 0; i < a.grid().size(); ++i) out.set(i, a[i] && b[i]);
  return out;
}

VoxelSet set_difference(const VoxelSet& a, const VoxelSet& b) {
  require_same_grid(a, b);
  VoxelSet out(a.grid());
  for (std::size_t i = 0; i < a.grid().size(); ++i) out.set(i, a[i] && !b[i]);
  return out;
}

std::size_t symmetric_difference_count(const VoxelSet& a, const VoxelSet& b) {
  require_same_grid(a, b);
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.grid().size(); ++i) c += a[i] != b[i];
  return c;
}

VoxelSet reflect(const VoxelSet& set, int axis) {
  const Grid& g = set.grid();
  if (axis < 0 || axis >= g.n()) throw Error(Errc::invalid_argument, "axis out of range");
  VoxelSet out(g);
  for_each_cell(g, [&](std::size_t i, const Index& idx) {
    if (!set[i]) return;
    Index m = idx;
    m[axis] = g.extent(axis) - 1 - idx[axis];
    out.set(g.flat(m), true);
  });
  return out;
}

VoxelSet translate(const VoxelSet& set, std::span<const int> offset) {
  const Grid& g = set.grid();
  if (static_cast<int>(offset.size()) != g.n()) throw Error(Errc::invalid_argument, "offset has wrong dimension");
  VoxelSet out(g);
  for_each_cell(g, [&](std::size_t i, const Index& idx) {
    if (!set[i]) return;
    Index m = idx;
    for (int k = 0; k < g.n(); ++k) {
      m[k] += offset[k];
      if (m[k] < 0 || m[k] >= g.extent(k)) {
        throw Error(Errc::precondition, "translation moves occupied cells outside the grid");
      }
    }
    out.set(g.flat(m), true);
  });
  return out;
}

BoundingBox bounding_box(const VoxelSet& set) {
  require_nonempty(set);
  const Grid& g = set.grid();
  BoundingBox box;
  for (int k = 0; k < g.n(); ++k) box.lo[k] = g.extent(k), box.hi[k] = -1;
  for_each_cell(g, [&](std::size_t i, const Index& idx) {
    if (!set[i]) return;
    for (int k = 0; k < g.n(); ++k) {
      box.lo[k] = std::min(box.lo[k], idx[k]);
      box.hi[k] = std::max(box.hi[k], idx[k]);
    }
  });
  return box;
}

VoxelSet crop(const VoxelSet& set, int margin) {
  if (margin < 0) throw Error(Errc::invalid_argument, "margin must be >= 0");
  const Grid& g = set.grid();
  const BoundingBox box = bounding_box(set);
  std::vector<int> shape(g.n());
  std::vector<double> origin(g.n());
  for (int k = 0; k < g.n(); ++k) {
    shape[k] = box.hi[k] - box.lo[k] + 1 + 2 * margin;
    origin[k] = g.coordinate(k, box.lo[k] - margin);
  }
  return embed(set, Grid(shape, g.spacing(), origin));
}

VoxelSet embed(const VoxelSet& set, const Grid& target) {
  const Grid& g = set.grid();
  if (!g.aligned_with(target)) throw Error(Errc::invalid_argument, "target grid is not aligned with the set's grid");
  std::array<int, kMaxGridDim> off{};
  for (int k = 0; k < g.n(); ++k) {
    off[k] = static_cast<int>(std::lround((g.origin()[k] - target.origin()[k]) / g.spacing()));
  }
  VoxelSet out(target);
  for_each_cell(g, [&](std::size_t i, const Index& idx) {
    if (!set[i]) return;
    Index m = idx;
    for (int k = 0; k < g.n(); ++k) {
      m[k] += off[k];
      if (m[k] < 0 || m[k] >= target.extent(k)) {
        throw Error(Errc::precondition, "occupied cells do not fit into the target grid");
      }
    }
    out.set(target.flat(m), true);
  });
  return out;
}

std::vector<double> barycenter(const VoxelSet& set) {
  require_nonempty(set);
  const Grid& g = set.grid();
  std::vector<Accumulator> acc(g.n());
  for_each_cell(g, [&](std::size_t i, const Index& idx) {
    if (!set[i]) return;
    for (int k = 0; k < g.n(); ++k) acc[k] += g.coordinate(k, idx[k]);
  });
  std::vector<double> c(g.n());
  const double m = static_cast<double>(set.count());
  for (int k = 0; k < g.n(); ++k) c[k] = acc[k].value() / m;
  return c;
}

std::optional<std::vector<double>> point_symmetry_center(const VoxelSet& set) {
  const Grid& g = set.grid();
  const BoundingBox box = bounding_box(set);
  bool symmetric = true;
  for_each_cell(g, [&](std::size_t i, const Index& idx) {
    if (!symmetric || !set[i]) return;
    Index m{};
    for (int k = 0; k < g.n(); ++k) m[k] = box.lo[k] + box.hi[k] - idx[k];
    if (!set[g.flat(m)]) symmetric = false;
  });
  if (!symmetric) return std::nullopt;
  std::vector<double> c(g.n());
  for (int k = 0; k < g.n(); ++k) c[k] = g.origin()[k] + 0.5 * (box.lo[k] + box.hi[k]) * g.spacing();
  return c;
}

}  // namespace riesz
