#include "riesz/potential.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "riesz/asymmetry.hpp"
#include "riesz/error.hpp"
#include "riesz/fft.hpp"
#include "riesz/quadrature.hpp"

namespace riesz {

namespace {

constexpr int kNear = 2;
constexpr int kNearSide = 2 * kNear + 1;

// ∫_{[0,1]^n} prod_i (a_i + b_i w_i) |w|^{-lambda} dw. Pyramid k (w_k largest)
// is parametrized by w_k = s, w_j = s t_j; the s-integral of the polynomial
// weight against s^{n-1-lambda} is exact, the t-integral smooth.
double corner_integral(int n, double lambda, std::span<const double> a, std::span<const double> b) {
  Accumulator total;
  for (int k = 0; k < n; ++k) {
    auto f = [&](std::span<const double> t) {
      std::vector<double> poly{a[k], b[k]};
      double t2 = 0.0;
      int j = 0;
      for (int i = 0; i < n; ++i) {
        if (i == k) continue;
        const double tj = t[j++];
        t2 += tj * tj;
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t m = 0; m < poly.size(); ++m) {
          next[m] += a[i] * poly[m];
          next[m + 1] += b[i] * tj * poly[m];
        }
        poly = std::move(next);
      }
      double s_int = 0.0;
      for (std::size_t m = 0; m < poly.size(); ++m) s_int += poly[m] / (n - lambda + static_cast<double>(m));
      return s_int * std::pow(1.0 + t2, -0.5 * lambda);
    };
    total += unit_cube_gauss(f, n - 1, 24, 1);
  }
  return total.value();
}

double far_weight(double d2, double lambda) {
  if (lambda == 1.0) return 1.0 / std::sqrt(d2);
  if (lambda == 2.0) return 1.0 / d2;
  return std::pow(d2, -0.5 * lambda);
}

int near_slot(const Index& d, int n) {
  int slot = 0;
  int scale = 1;
  for (int k = 0; k < n; ++k) {
    if (d[k] < -kNear || d[k] > kNear) return -1;
    slot += (d[k] + kNear) * scale;
    scale *= kNearSide;
  }
  return slot;
}

// Exact average over a unit cell of |d + u|^{-lambda}; smooth for d != 0.
double cell_average(const Index& d, int n, double lambda) {
  return unit_cube_gauss(
      [&](std::span<const double> u) {
        double r2 = 0.0;
        for (int k = 0; k < n; ++k) r2 += std::pow(d[k] + u[k] - 0.5, 2);
        return std::pow(r2, -0.5 * lambda);
      },
      n, 16, 2);
}

// ∫_{[-1,1]^n} prod(1 - |z_i|) |d + z|^{-lambda} dz: cell-pair average at offset d.
double pair_average(const Index& d, int n, double lambda) {
  Accumulator acc;
  for (int orth = 0; orth < (1 << n); ++orth) {
    int sigma[kMaxGridDim];
    bool singular = true;
    for (int k = 0; k < n; ++k) {
      sigma[k] = (orth >> k) & 1 ? 1 : -1;
      // -d must be a vertex of this orthant cube
      singular = singular && (d[k] == 0 || (std::abs(d[k]) == 1 && sigma[k] == -d[k]));
    }
    if (singular) {
      std::vector<double> a(n), b(n);
      for (int k = 0; k < n; ++k) {
        if (d[k] == 0) a[k] = 1.0, b[k] = -1.0;
        else a[k] = 0.0, b[k] = 1.0;
      }
      acc += corner_integral(n, lambda, a, b);
    } else {
      acc += unit_cube_gauss(
          [&](std::span<const double> w) {
            double weight = 1.0;
            double r2 = 0.0;
            for (int k = 0; k < n; ++k) {
              weight *= 1.0 - w[k];
              r2 += std::pow(d[k] + sigma[k] * w[k], 2);
            }
            return weight * std::pow(r2, -0.5 * lambda);
          },
          n, 16, 2);
    }
  }
  return acc.value();
}

CellKernelTable build_table(const Kernel& kernel, bool nearfield) {
  const int n = kernel.n();
  const double lambda = kernel.lambda();
  if (n > kMaxGridDim) throw Error(Errc::unsupported_dimension, "cell constants need n <= 4");
  CellKernelTable t{kernel};
  const std::vector<double> one(n, 1.0), zero(n, 0.0), minus(n, -1.0);
  t.self_potential = std::pow(2.0, n) * std::pow(0.5, n - lambda) * corner_integral(n, lambda, one, zero);
  t.self_energy = std::pow(2.0, n) * corner_integral(n, lambda, one, minus);
  t.nearfield = nearfield;
  if (nearfield) {
    int slots = 1;
    for (int k = 0; k < n; ++k) slots *= kNearSide;
    t.near_potential.assign(slots, 0.0);
    t.near_energy.assign(slots, 0.0);
    for (int s = 0; s < slots; ++s) {
      Index d{};
      int rest = s;
      bool origin = true;
      for (int k = 0; k < n; ++k) {
        d[k] = rest % kNearSide - kNear;
        rest /= kNearSide;
        origin = origin && d[k] == 0;
      }
      t.near_potential[s] = origin ? t.self_potential : cell_average(d, n, lambda);
      t.near_energy[s] = origin ? t.self_energy : pair_average(d, n, lambda);
    }
  }
  return t;
}

double offset_norm2(const Index& d, int n) {
  double d2 = 0.0;
  for (int k = 0; k < n; ++k) d2 += static_cast<double>(d[k]) * d[k];
  return d2;
}

// Weights of all offsets |d_k| < extent_k, centered, scaled by h^{n-lambda}.
RealArray weight_table(const Grid& g, const CellKernelTable& t, bool energy) {
  const int n = g.n();
  std::vector<int> shape(n);
  for (int k = 0; k < n; ++k) shape[k] = 2 * g.extent(k) - 1;
  RealArray table{shape, {}};
  std::size_t total = 1;
  for (int e : shape) total *= static_cast<std::size_t>(e);
  table.values.resize(total);
  const double scale = std::pow(g.spacing(), n - t.kernel.lambda());
  const Grid tg(shape, 1.0, std::vector<double>(n, 0.0));
  for_each_cell(tg, [&](std::size_t i, const Index& idx) {
    Index d{};
    for (int k = 0; k < n; ++k) d[k] = idx[k] - (g.extent(k) - 1);
    table.values[i] = scale * (energy ? t.energy_weight(d) : t.potential_weight(d));
  });
  return table;
}

RealArray occupancy_array(const VoxelSet& set) {
  RealArray a{set.grid().shape(), std::vector<double>(set.grid().size())};
  for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] = set[i] ? 1.0 : 0.0;
  return a;
}

std::vector<Index> occupied_cells(const VoxelSet& set) {
  std::vector<Index> cells;
  for_each_cell(set.grid(), [&](std::size_t i, const Index& idx) {
    if (set[i]) cells.push_back(idx);
  });
  return cells;
}

}  // namespace

double CellKernelTable::potential_weight(const Index& d) const {
  const int n = kernel.n();
  if (nearfield) {
    const int s = near_slot(d, n);
    if (s >= 0) return near_potential[s];
  }
  const double d2 = offset_norm2(d, n);
  return d2 == 0.0 ? self_potential : far_weight(d2, kernel.lambda());
}

double CellKernelTable::energy_weight(const Index& d) const {
  const int n = kernel.n();
  if (nearfield) {
    const int s = near_slot(d, n);
    if (s >= 0) return near_energy[s];
  }
  const double d2 = offset_norm2(d, n);
  return d2 == 0.0 ? self_energy : far_weight(d2, kernel.lambda());
}

const CellKernelTable& compute_cell_constants(const Kernel& kernel, bool nearfield) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double, bool>, std::unique_ptr<CellKernelTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{kernel.n(), kernel.lambda(), nearfield}];
  if (!slot) slot = std::make_unique<CellKernelTable>(build_table(kernel, nearfield));
  return *slot;
}

PotentialField potential_direct(const VoxelSet& set, const Kernel& kernel, const EngineOptions& opt) {
  std::vector<std::size_t> all(set.grid().size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return PotentialField{set.grid(), kernel, potential_direct_at(set, kernel, all, opt)};
}

std::vector<double> potential_direct_at(const VoxelSet& set, const Kernel& kernel,
                                        std::span<const std::size_t> cells, const EngineOptions& opt) {
  require_nonempty(set);
  const Grid& g = set.grid();
  const int n = g.n();
  if (kernel.n() != n) throw Error(Errc::invalid_dimension, "kernel and set dimensions differ");
  const CellKernelTable& t = compute_cell_constants(kernel, opt.nearfield);
  const double scale = std::pow(g.spacing(), n - kernel.lambda());
  const auto occupied = occupied_cells(set);
  std::vector<double> out(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Index x = g.unflat(cells[c]);
    Accumulator acc;
    for (const Index& y : occupied) {
      Index d{};
      for (int k = 0; k < n; ++k) d[k] = x[k] - y[k];
      acc += t.potential_weight(d);
    }
    out[c] = scale * acc.value();
  }
  return out;
}

std::vector<double> potential_at_points(const VoxelSet& set, const Kernel& kernel,
                                        const std::vector<std::vector<double>>& points) {
  require_nonempty(set);
  const Grid& g = set.grid();
  const int n = g.n();
  if (kernel.n() != n) throw Error(Errc::invalid_dimension, "kernel and set dimensions differ");
  const double h = g.spacing();
  const double lambda = kernel.lambda();
  const auto cells = occupied_cells(set);

  // Tensor rule on [-1/2, 1/2]^n: 4 Gauss nodes on each of 2 panels per axis.
  const GaussRule& rule = gauss_legendre(4);
  std::vector<double> x1, w1;
  for (int p = 0; p < 2; ++p) {
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      x1.push_back(-0.5 + 0.25 * (2 * p + 1 + rule.nodes[i]));
      w1.push_back(0.25 * rule.weights[i]);
    }
  }
  const double near2 = 6.25 * h * h;
  const double hn = g.cell_volume();

  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& x : points) {
    if (x.size() != static_cast<std::size_t>(n)) throw Error(Errc::invalid_dimension, "point dimension differs");
    Accumulator acc;
    for (const Index& c : cells) {
      std::array<double, kMaxGridDim> d{};
      double d2 = 0;
      for (int k = 0; k < n; ++k) {
        d[k] = x[k] - g.coordinate(k, c[k]);
        d2 += d[k] * d[k];
      }
      if (d2 >= near2) {
        acc += hn * far_weight(d2, lambda);
        continue;
      }
      // average of |x - y|^{-lambda} over the cell
      const std::size_t m = x1.size();
      std::array<std::size_t, kMaxGridDim> idx{};
      double sum = 0;
      while (true) {
        double w = 1, r2 = 0;
        for (int k = 0; k < n; ++k) {
          const double u = d[k] - h * x1[idx[k]];
          r2 += u * u;
          w *= w1[idx[k]];
        }
        sum += w * far_weight(r2, lambda);
        int k = 0;
        while (k < n && ++idx[k] == m) idx[k++] = 0;
        if (k == n) break;
      }
      acc += hn * sum;
    }
    out.push_back(acc.value());
  }
  return out;
}

PotentialField potential_fft(const VoxelSet& set, const Kernel& kernel, const EngineOptions& opt) {
  require_nonempty(set);
  const Grid& g = set.grid();
  if (kernel.n() != g.n()) throw Error(Errc::invalid_dimension, "kernel and set dimensions differ");
  const CellKernelTable& t = compute_cell_constants(kernel, opt.nearfield);
  const RealArray phi = convolve_centered(occupancy_array(set), weight_table(g, t, false));
  return PotentialField{g, kernel, phi.values};
}

double energy_density(const Grid& g, std::span<const double> f, const Kernel& kernel, const EngineOptions& opt) {
  if (kernel.n() != g.n()) throw Error(Errc::invalid_dimension, "kernel and grid dimensions differ");
  if (f.size() != g.size()) throw Error(Errc::invalid_argument, "density does not match the grid");
  const CellKernelTable& t = compute_cell_constants(kernel, opt.nearfield);
  RealArray a{g.shape(), std::vector<double>(f.begin(), f.end())};
  const RealArray u = convolve_centered(a, weight_table(g, t, true));
  Accumulator acc;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] != 0.0) acc += f[i] * u.values[i];
  }
  return g.cell_volume() * acc.value();
}

double energy_voxel(const VoxelSet& input, const Kernel& kernel, const EngineOptions& opt) {
  require_nonempty(input);
  // Cropping makes the result bit-identical under lattice translations.
  const VoxelSet set = crop(input);
  const RealArray occ = occupancy_array(set);
  return energy_density(set.grid(), occ.values, kernel, opt);
}

double energy_direct(const VoxelSet& set, const Kernel& kernel, const EngineOptions& opt) {
  require_nonempty(set);
  const Grid& g = set.grid();
  const int n = g.n();
  if (kernel.n() != n) throw Error(Errc::invalid_dimension, "kernel and set dimensions differ");
  const CellKernelTable& t = compute_cell_constants(kernel, opt.nearfield);
  const auto occupied = occupied_cells(set);
  Accumulator acc;
  for (const Index& x : occupied) {
    for (const Index& y : occupied) {
      Index d{};
      for (int k = 0; k < n; ++k) d[k] = x[k] - y[k];
      acc += t.energy_weight(d);
    }
  }
  return std::pow(g.spacing(), 2 * n - kernel.lambda()) * acc.value();
}

PoissonResidual poisson_residual(const PotentialField& phi, const VoxelSet& set, int margin) {
  const Grid& g = set.grid();
  const int n = g.n();
  if (!(phi.grid == g)) throw Error(Errc::invalid_argument, "field and set live on different grids");
  if (!phi.kernel.is_newton()) throw Error(Errc::invalid_kernel, "Poisson identity needs the Newton kernel");
  if (margin < 0) throw Error(Errc::invalid_argument, "margin must be >= 0");

  // Chebyshev dilations of the set and of its complement (separable max filters).
  auto dilate = [&](std::vector<std::uint8_t> mask, int radius) {
    for (int k = 0; k < n; ++k) {
      std::vector<std::uint8_t> next(mask.size(), 0);
      for_each_cell(g, [&](std::size_t i, const Index& idx) {
        if (!mask[i]) return;
        const int lo = std::max(0, idx[k] - radius);
        const int hi = std::min(g.extent(k) - 1, idx[k] + radius);
        const std::size_t base = i - static_cast<std::size_t>(idx[k]) * g.stride(k);
        for (int j = lo; j <= hi; ++j) next[base + static_cast<std::size_t>(j) * g.stride(k)] = 1;
      });
      mask = std::move(next);
    }
    return mask;
  };
  std::vector<std::uint8_t> inside(g.size()), outside(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) inside[i] = set[i], outside[i] = !set[i];
  const auto near_set = dilate(inside, margin);
  const auto near_complement = dilate(outside, 2);

  PoissonResidual r;
  r.target = n * (n - 2) * unit_ball_volume(n);
  const double h2 = g.spacing() * g.spacing();
  Accumulator in_sum, out_sum;
  for_each_cell(g, [&](std::size_t i, const Index& idx) {
    for (int k = 0; k < n; ++k) {
      if (idx[k] == 0 || idx[k] == g.extent(k) - 1) return;
    }
    double lap = -2.0 * n * phi.values[i];
    for (int k = 0; k < n; ++k) lap += phi.values[i - g.stride(k)] + phi.values[i + g.stride(k)];
    lap /= h2;
    if (set[i] && !near_complement[i]) {
      const double e = std::abs(-lap - r.target);
      in_sum += e;
      r.interior_max = std::max(r.interior_max, e);
      ++r.interior_cells;
    } else if (!near_set[i]) {
      const double e = std::abs(lap);
      out_sum += e;
      r.exterior_max = std::max(r.exterior_max, e);
      ++r.exterior_cells;
    }
  });
  if (r.interior_cells) r.interior_mean = in_sum.value() / r.interior_cells;
  if (r.exterior_cells) r.exterior_mean = out_sum.value() / r.exterior_cells;
  return r;
}

QuadraticDistance quadratic_distance(const VoxelSet& input, const Kernel& kernel, const QuadraticOptions& opt) {
  require_nonempty(input);
  if (!kernel.reflection_positive()) {
    throw Error(Errc::invalid_kernel, "quadratic distance needs a reflection-positive kernel");
  }
  const int n = input.n();
  const double h = input.grid().spacing();
  const double RA = input.volume_radius();
  // Room for the comparison ball anywhere over the set's bounding box.
  const VoxelSet set = crop(input, static_cast<int>(std::ceil(RA / h)) + 2);
  const Grid& g = set.grid();
  const double e_star = ball_energy(RA, kernel);

  QuadraticDistance out;
  out.energy_ball = e_star;
  out.energy_set = energy_voxel(set, kernel, opt.engine);
  std::vector<double> c = fraenkel_asymmetry(set, opt.subsamples).center;

  std::vector<double> u;
  if (opt.mode == CrossTerm::grid) {
    const CellKernelTable& t = compute_cell_constants(kernel, opt.engine.nearfield);
    u = convolve_centered(occupancy_array(set), weight_table(g, t, true)).values;
  }
  const auto occupied = occupied_cells(set);
  // Cross term <χ_A, Φ_ball> up to the factor h^n.
  auto cross = [&](std::span<const double> center) {
    Accumulator acc;
    if (opt.mode == CrossTerm::grid) {
      const auto cov = rasterize_ball(BallSpec{RA, {center.begin(), center.end()}}, g, opt.subsamples);
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (cov.values[i] != 0.0) acc += cov.values[i] * u[i];
      }
    } else {
      for (const Index& x : occupied) {
        double d2 = 0.0;
        for (int k = 0; k < n; ++k) d2 += std::pow(g.coordinate(k, x[k]) - center[k], 2);
        acc += ball_potential(RA, std::sqrt(d2), kernel);
      }
    }
    return acc.value() * g.cell_volume();
  };

  double best = cross(c);
  double width = h;
  for (int sweep = 0; sweep < 4; ++sweep) {
    const double before = best;
    for (int k = 0; k < n; ++k) {
      std::vector<double> trial = c;
      double arg = c[k];
      golden_section_max(
          [&](double x) {
            trial[k] = x;
            const double v = cross(trial);
            if (v > best) best = v, arg = x;
            return v;
          },
          c[k] - width, c[k] + width, 1e-2 * h);
      c[k] = arg;
    }
    width *= 0.5;
    if (best - before <= 1e-12 * std::abs(before)) break;
  }
  out.center = c;
  out.cross = best;

  if (opt.mode == CrossTerm::grid) {
    const auto cov = rasterize_ball(BallSpec{RA, c}, g, opt.subsamples);
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = (set[i] ? 1.0 : 0.0) - cov.values[i];
    out.energy_ball = energy_density(g, cov.values, kernel, opt.engine);
    out.value = energy_density(g, f, kernel, opt.engine) / e_star;
  } else {
    out.value = (out.energy_set + e_star - 2.0 * best) / e_star;
  }
  return out;
}

}  // namespace riesz
