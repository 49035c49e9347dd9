#include "riesz/asymmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "riesz/error.hpp"
#include "riesz/fft.hpp"
#include "riesz/quadrature.hpp"

namespace riesz {

double ball_overlap(const VoxelSet& set, std::span<const double> center, double radius, int subsamples) {
  const Grid& g = set.grid();
  const int n = g.n();
  if (static_cast<int>(center.size()) != n) throw Error(Errc::invalid_argument, "center has wrong dimension");
  if (subsamples < 1) throw Error(Errc::invalid_argument, "subsamples must be >= 1");
  const double h = g.spacing();
  Index lo{}, hi{};
  for (int k = 0; k < n; ++k) {
    const double a = (center[k] - radius - g.origin()[k]) / h;
    const double b = (center[k] + radius - g.origin()[k]) / h;
    lo[k] = std::max(0, static_cast<int>(std::floor(a)));
    hi[k] = std::min(g.extent(k) - 1, static_cast<int>(std::ceil(b)));
    if (lo[k] > hi[k]) return 0.0;
  }
  const double half_diag = 0.5 * h * std::sqrt(static_cast<double>(n));
  const double inner2 = radius > half_diag ? (radius - half_diag) * (radius - half_diag) : -1.0;
  const double outer2 = (radius + half_diag) * (radius + half_diag);
  const double R2 = radius * radius;
  int samples = 1;
  for (int k = 0; k < n; ++k) samples *= subsamples;

  std::size_t full = 0;
  std::size_t partial = 0;  // in units of 1/samples
  Index idx = lo;
  while (true) {
    if (set[g.flat(idx)]) {
      double x[kMaxGridDim];
      double d2 = 0.0;
      for (int k = 0; k < n; ++k) {
        x[k] = g.coordinate(k, idx[k]) - center[k];
        d2 += x[k] * x[k];
      }
      if (d2 <= inner2) {
        ++full;
      } else if (d2 < outer2) {
        for (int s = 0; s < samples; ++s) {
          int rest = s;
          double p2 = 0.0;
          for (int k = 0; k < n; ++k) {
            const double u = x[k] + h * ((rest % subsamples + 0.5) / subsamples - 0.5);
            rest /= subsamples;
            p2 += u * u;
          }
          partial += p2 < R2;
        }
      }
    }
    int k = 0;
    for (; k < n; ++k) {
      if (++idx[k] <= hi[k]) break;
      idx[k] = lo[k];
    }
    if (k == n) break;
  }
  return (static_cast<double>(full) + static_cast<double>(partial) / samples) * g.cell_volume();
}

FraenkelResult fraenkel_asymmetry(const VoxelSet& input, int subsamples) {
  require_nonempty(input);
  const VoxelSet set = crop(input);
  const Grid& g = set.grid();
  const int n = g.n();
  const double h = g.spacing();
  const double volume = set.volume();
  const double R = set.volume_radius();

  // Coverage table of a ball centered on a cell center; it is symmetric, so
  // the full convolution with the occupancy is the lattice overlap map.
  const int K = static_cast<int>(std::ceil(R / h + 0.5 * std::sqrt(static_cast<double>(n)))) + 1;
  const Grid table_grid(std::vector<int>(n, 2 * K + 1), h, std::vector<double>(n, -K * h));
  const CoverageField table = rasterize_ball(BallSpec{R, std::vector<double>(n, 0.0)}, table_grid, subsamples);

  RealArray occ{g.shape(), std::vector<double>(g.size())};
  for (std::size_t i = 0; i < g.size(); ++i) occ.values[i] = set[i] ? 1.0 : 0.0;
  const RealArray map = convolve_full(occ, RealArray{table_grid.shape(), table.values});

  // Best lattice centers, pairwise at least two cells apart.
  std::vector<std::size_t> order(map.values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t top = std::min<std::size_t>(order.size(), 256);
  std::partial_sort(order.begin(), order.begin() + top, order.end(), [&](std::size_t a, std::size_t b) {
    return map.values[a] > map.values[b] || (map.values[a] == map.values[b] && a < b);
  });
  const Grid map_grid(map.shape, h, std::vector<double>(n, 0.0));
  std::vector<Index> picked;
  for (std::size_t r = 0; r < top && picked.size() < 4; ++r) {
    const Index idx = map_grid.unflat(order[r]);
    bool far = true;
    for (const Index& p : picked) {
      int cheb = 0;
      for (int k = 0; k < n; ++k) cheb = std::max(cheb, std::abs(p[k] - idx[k]));
      far = far && cheb >= 2;
    }
    if (far) picked.push_back(idx);
  }

  FraenkelResult out;
  const double lattice_best = map.values[order[0]] * g.cell_volume();
  out.lattice_alpha = std::clamp(1.0 - lattice_best / volume, 0.0, 1.0);
  out.overlap = -1.0;

  for (const Index& p : picked) {
    std::vector<double> c(n);
    for (int k = 0; k < n; ++k) c[k] = g.coordinate(k, p[k] - K);
    double best = ball_overlap(set, c, R, subsamples);
    ++out.evaluations;
    double width = h;
    for (int sweep = 0; sweep < 8; ++sweep) {
      const double before = best;
      for (int k = 0; k < n; ++k) {
        std::vector<double> trial = c;
        double arg = c[k];
        auto f = [&](double x) {
          trial[k] = x;
          const double v = ball_overlap(set, trial, R, subsamples);
          ++out.evaluations;
          if (v > best) best = v, arg = x;
          return v;
        };
        golden_section_max(f, c[k] - width, c[k] + width, 1e-3 * h);
        c[k] = arg;
      }
      width *= 0.5;
      if (best - before <= 1e-12 * volume && sweep > 0) break;
    }
    if (best > out.overlap) {
      out.overlap = best;
      out.center = c;
    }
  }
  out.alpha = std::clamp(1.0 - out.overlap / volume, 0.0, 1.0);
  return out;
}

}  // namespace riesz
