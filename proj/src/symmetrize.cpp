#include "riesz/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "riesz/asymmetry.hpp"
#include "riesz/error.hpp"

namespace riesz {

namespace {

// Squared distance from the grid center in units of h/2; exact in integers.
long long doubled_norm2(const Grid& g, const Index& idx) {
  long long d2 = 0;
  for (int k = 0; k < g.n(); ++k) {
    const long long d = 2LL * idx[k] - (g.extent(k) - 1);
    d2 += d * d;
  }
  return d2;
}

}  // namespace

HalfspaceSymmetrization symmetrize_halfspace(const VoxelSet& set, int axis) {
  require_nonempty(set);
  const Grid& g = set.grid();
  if (axis < 0 || axis >= g.n()) throw Error(Errc::invalid_argument, "axis out of range");
  const int N = g.extent(axis);

  std::vector<std::size_t> slice(N, 0);
  for_each_cell(g, [&](std::size_t i, const Index& idx) { slice[idx[axis]] += set[i]; });
  const long long total = static_cast<long long>(set.count());

  // Face plane m separates cells [0, m) from [m, N). |2 left - total| is
  // V-shaped in m; take the middle of the minimizing range.
  long long left = 0;
  long long best = total;
  int m_lo = 0, m_hi = 0;
  for (int m = 0; m <= N; ++m) {
    if (m > 0) left += static_cast<long long>(slice[m - 1]);
    const long long imb = std::llabs(2 * left - total);
    if (imb < best) {
      best = imb;
      m_lo = m_hi = m;
    } else if (imb == best) {
      m_hi = m;
    }
  }
  const int m = (m_lo + m_hi) / 2;
  const int q = 2 * m - 1;  // mirror k -> q - k

  const int lo = std::min(0, q - (N - 1));
  const int hi = std::max(N - 1, q);
  std::vector<int> shape = g.shape();
  std::vector<double> origin = g.origin();
  shape[axis] = hi - lo + 1;
  origin[axis] = g.coordinate(axis, lo);
  const Grid out_grid(shape, g.spacing(), origin);

  HalfspaceSymmetrization out{VoxelSet(out_grid), VoxelSet(out_grid), 0.0, axis,
                              g.coordinate(axis, m) - 0.5 * g.spacing()};
  for_each_cell(g, [&](std::size_t i, const Index& idx) {
    if (!set[i]) return;
    VoxelSet& target = idx[axis] < m ? out.plus : out.minus;
    Index a = idx;
    a[axis] -= lo;
    target.set(out_grid.flat(a), true);
    a[axis] = q - idx[axis] - lo;
    target.set(out_grid.flat(a), true);
  });
  out.imbalance = static_cast<double>(best) * g.cell_volume();
  return out;
}

FmpResult fmp_symmetrize(const VoxelSet& set, int subsamples) {
  require_nonempty(set);
  const int n = set.n();
  struct Branch {
    VoxelSet set;
    double imbalance;
    std::vector<double> planes;
  };
  std::vector<Branch> branches{{crop(set), 0.0, {}}};
  for (int axis = 0; axis < n; ++axis) {
    std::vector<Branch> next;
    for (const Branch& b : branches) {
      auto s = symmetrize_halfspace(b.set, axis);
      auto planes = b.planes;
      planes.push_back(s.plane);
      for (VoxelSet* part : {&s.plus, &s.minus}) {
        if (part->empty()) continue;
        next.push_back({crop(*part), b.imbalance + s.imbalance, planes});
      }
    }
    branches = std::move(next);
  }

  FmpResult out{branches.front().set};
  out.alpha_in = fraenkel_asymmetry(set, subsamples).alpha;
  out.alpha_out = -1.0;
  for (const Branch& b : branches) {
    const double a = fraenkel_asymmetry(b.set, subsamples).alpha;
    if (a > out.alpha_out) {
      out.alpha_out = a;
      out.set = b.set;
      out.imbalance = b.imbalance;
      out.center = b.planes;
    }
  }
  out.ratio = out.alpha_in > 0.0 ? out.alpha_out / out.alpha_in : 0.0;
  return out;
}

Truncation truncate_tail(const VoxelSet& set, double alpha0, double c, const Kernel& kernel) {
  require_nonempty(set);
  if (!(alpha0 >= 0.0 && alpha0 <= 1.0)) throw Error(Errc::invalid_argument, "alpha0 must be in [0, 1]");
  if (!(c > 0.0)) throw Error(Errc::invalid_argument, "truncation constant c must be positive");
  const Grid& g = set.grid();
  const int n = g.n();
  if (kernel.n() != n) throw Error(Errc::invalid_dimension, "kernel and set dimensions differ");

  const double RA = set.volume_radius();
  Truncation out{set};
  out.outer_radius = RA * (1.0 + c * std::pow(alpha0, 1.0 - kernel.lambda() / n));
  out.inner_radius = RA;
  const double R2 = out.outer_radius * out.outer_radius;
  const double RA2 = RA * RA;

  struct Candidate {
    double d2;
    std::size_t flat;
  };
  std::vector<Candidate> candidates;
  for_each_cell(g, [&](std::size_t i, const Index& idx) {
    double d2 = 0.0;
    for (int k = 0; k < n; ++k) d2 += std::pow(g.coordinate(k, idx[k]), 2);
    if (set[i] && d2 >= R2) {
      out.set.set(i, false);
      ++out.removed;
    } else if (!set[i] && d2 >= RA2 && d2 < R2) {
      candidates.push_back({d2, i});
    }
  });
  if (out.removed == 0) return out;
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.d2 < b.d2 || (a.d2 == b.d2 && a.flat < b.flat);
  });

  // Antipode of a cell through the physical origin, if it is a grid cell.
  auto antipode = [&](std::size_t flat) -> std::optional<std::size_t> {
    Index idx = g.unflat(flat);
    for (int k = 0; k < n; ++k) {
      const double j = (-g.coordinate(k, idx[k]) - g.origin()[k]) / g.spacing();
      const long r = std::lround(j);
      if (std::abs(j - r) > 1e-9 || r < 0 || r >= g.extent(k)) return std::nullopt;
      idx[k] = static_cast<int>(r);
    }
    return g.flat(idx);
  };

  const std::size_t target = out.removed;
  std::size_t pos = 0;
  while (out.added < target) {
    if (pos >= candidates.size()) {
      throw Error(Errc::infeasible, "no r in (R_A, R) restores the volume; R is too small");
    }
    std::size_t end = pos;
    const double tol = 1e-12 * std::max(1.0, candidates[pos].d2);
    while (end < candidates.size() && candidates[end].d2 - candidates[pos].d2 <= tol) ++end;
    if (out.added + (end - pos) <= target) {
      for (std::size_t j = pos; j < end; ++j) out.set.set(candidates[j].flat, true);
      out.added += end - pos;
      out.inner_radius = std::sqrt(candidates[pos].d2);
      pos = end;
      continue;
    }
    // Partial shell: add antipodal pairs, then a single cell only if no pair fits.
    for (std::size_t j = pos; j < end && out.added + 2 <= target; ++j) {
      const auto a = antipode(candidates[j].flat);
      if (!a || out.set[*a] || out.set[candidates[j].flat] || *a == candidates[j].flat) continue;
      out.set.set(candidates[j].flat, true);
      out.set.set(*a, true);
      out.added += 2;
    }
    if (out.added + 1 == target && !point_symmetry_center(set)) {
      for (std::size_t j = pos; j < end; ++j) {
        if (!out.set[candidates[j].flat]) {
          out.set.set(candidates[j].flat, true);
          ++out.added;
          break;
        }
      }
    }
    out.inner_radius = std::sqrt(candidates[pos].d2);
    break;
  }
  return out;
}

std::vector<std::size_t> distance_order(const Grid& grid) {
  std::vector<long long> d2(grid.size());
  for_each_cell(grid, [&](std::size_t i, const Index& idx) { d2[i] = doubled_norm2(grid, idx); });
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d2[a] < d2[b]; });
  return order;
}

PotentialField rearrange_decreasing(const PotentialField& field) {
  for (double v : field.values) {
    if (!(v >= 0.0)) throw Error(Errc::precondition, "rearrangement needs a nonnegative field");
  }
  std::vector<double> sorted = field.values;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const auto order = distance_order(field.grid);
  PotentialField out{field.grid, field.kernel, std::vector<double>(field.values.size())};
  for (std::size_t r = 0; r < order.size(); ++r) out.values[order[r]] = sorted[r];
  return out;
}

}  // namespace riesz
