#include "riesz/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "riesz/error.hpp"

namespace riesz {

namespace {

template <class Inside>
VoxelSet sample(const Grid& grid, Inside&& inside) {
  VoxelSet s(grid);
  for_each_cell(grid, [&](std::size_t i, const Index& idx) { s.set(i, inside(grid.center(idx))); });
  return s;
}

void require_dim(const Grid& grid, std::size_t size, const char* what) {
  if (size != static_cast<std::size_t>(grid.n())) {
    throw Error(Errc::invalid_dimension, std::string(what) + " does not match the grid dimension");
  }
}

}  // namespace

VoxelSet make_ball(const Grid& grid, double radius, std::vector<double> center) {
  if (!(radius > 0)) throw Error(Errc::invalid_argument, "radius must be positive");
  if (center.empty()) center.assign(grid.n(), 0.0);
  require_dim(grid, center.size(), "ball center");
  return sample(grid, [&](const std::vector<double>& x) {
    double d2 = 0;
    for (int k = 0; k < grid.n(); ++k) d2 += (x[k] - center[k]) * (x[k] - center[k]);
    return d2 <= radius * radius;
  });
}

VoxelSet make_ellipsoid(const Grid& grid, std::vector<double> semi_axes) {
  require_dim(grid, semi_axes.size(), "semi-axes");
  for (double a : semi_axes) {
    if (!(a > 0)) throw Error(Errc::invalid_argument, "semi-axes must be positive");
  }
  return sample(grid, [&](const std::vector<double>& x) {
    double q = 0;
    for (int k = 0; k < grid.n(); ++k) q += (x[k] / semi_axes[k]) * (x[k] / semi_axes[k]);
    return q <= 1.0;
  });
}

VoxelSet make_two_balls(const Grid& grid, double radius, double separation) {
  if (!(separation >= 0)) throw Error(Errc::invalid_argument, "separation must be nonnegative");
  std::vector<double> c(grid.n(), 0.0);
  c[0] = 0.5 * separation;
  const VoxelSet right = make_ball(grid, radius, c);
  c[0] = -c[0];
  return set_union(right, make_ball(grid, radius, c));
}

VoxelSet make_box(const Grid& grid, std::vector<double> sides) {
  require_dim(grid, sides.size(), "box sides");
  for (double s : sides) {
    if (!(s > 0)) throw Error(Errc::invalid_argument, "box sides must be positive");
  }
  return sample(grid, [&](const std::vector<double>& x) {
    for (int k = 0; k < grid.n(); ++k) {
      if (std::abs(x[k]) > 0.5 * sides[k]) return false;
    }
    return true;
  });
}

VoxelSet make_blob(const Grid& grid, std::uint64_t seed, int steps, double step, double radius) {
  if (steps < 0 || !(step >= 0) || !(radius > 0)) throw Error(Errc::invalid_argument, "invalid blob parameters");
  const int n = grid.n();
  // keep the dilated walk inside the grid box
  double limit = 1e300;
  for (int k = 0; k < n; ++k) {
    limit = std::min(limit, std::min(-grid.coordinate(k, 0), grid.coordinate(k, grid.extent(k) - 1)));
  }
  limit -= radius + grid.spacing();
  if (!(limit > 0)) throw Error(Errc::invalid_argument, "grid too small for the blob");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> walk{std::vector<double>(n, 0.0)};
  for (int s = 0; s < steps; ++s) {
    std::vector<double> d(n);
    double norm = 0;
    for (double& v : d) {
      v = gauss(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    std::vector<double> p = walk.back();
    for (int k = 0; k < n; ++k) {
      p[k] += step * d[k] / norm;
      if (p[k] > limit) p[k] = 2 * limit - p[k];
      if (p[k] < -limit) p[k] = -2 * limit - p[k];
    }
    walk.push_back(std::move(p));
  }
  return sample(grid, [&](const std::vector<double>& x) {
    for (const auto& p : walk) {
      double d2 = 0;
      for (int k = 0; k < n; ++k) d2 += (x[k] - p[k]) * (x[k] - p[k]);
      if (d2 <= radius * radius) return true;
    }
    return false;
  });
}

std::vector<CorpusEntry> standard_corpus(int cells, int n) {
  const Grid g = Grid::centered(n, cells, 4.0);
  std::vector<CorpusEntry> out;
  auto add = [&](std::string name, VoxelSet s) { out.push_back({std::move(name), std::move(s)}); };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  auto along = [&](double first, double rest) {
    std::vector<double> v(n, rest);
    v[0] = first;
    return v;
  };

  add("ball-1", make_ball(g, 1.0));
  add("ball-1.2", make_ball(g, 1.2));
  std::vector<double> shift(n, 0.0);
  shift[0] = 0.3;
  shift[1] = -0.2;
  add("ball-0.8-shifted", make_ball(g, 0.8, shift));

  for (double a : {0.05, 0.1, 0.15, 0.2, 0.25, 0.3}) add("annulus-" + fmt(a), voxelize(annulus_perturbation(a, n), g));

  for (double s : {1.1, 1.2, 1.35, 1.5, 1.65, 1.8}) {
    std::vector<double> axes(n, 1.0);
    axes[0] = s;
    axes[n - 1] = 1.0 / s;
    add("ellipsoid-triaxial-" + fmt(s), make_ellipsoid(g, axes));
  }
  for (double s : {1.3, 1.6}) add("ellipsoid-prolate-" + fmt(s), make_ellipsoid(g, along(s, std::pow(s, -1.0 / (n - 1)))));

  for (double d : {1.3, 1.6, 2.0, 2.6}) add("two-balls-" + fmt(d), make_two_balls(g, 0.6, d));

  add("box-cube", make_box(g, std::vector<double>(n, 1.6)));
  std::vector<double> sides = along(2.0, 1.0);
  sides[1] = 1.4;
  add("box-2-1.4-1", make_box(g, sides));
  add("box-2.4-1.2", make_box(g, along(2.4, 1.2)));
  add("box-3-1", make_box(g, along(3.0, 1.0)));

  for (std::uint64_t seed = 1; seed <= 11; ++seed) add("blob-" + std::to_string(seed), make_blob(g, seed));
  return out;
}

}  // namespace riesz
