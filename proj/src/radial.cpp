#include "riesz/radial.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <numbers>
#include <cmath>
#include <string>

#include "riesz/error.hpp"
#include "riesz/quadrature.hpp"

namespace riesz {

namespace {

void require_dimension(const RadialSet& set, const Kernel& kernel) {
  if (set.n() != kernel.n()) {
    throw Error(Errc::invalid_dimension, "set dimension " + std::to_string(set.n()) +
                                             " does not match kernel dimension " +
                                             std::to_string(kernel.n()));
  }
}

double shells_volume(std::span<const Shell> shells, int n) {
  Accumulator acc;
  for (const Shell& s : shells) acc += std::pow(s.outer, n) - std::pow(s.inner, n);
  return unit_ball_volume(n) * acc.value();
}

double shells_potential(std::span<const Shell> shells, double t, const Kernel& kernel) {
  Accumulator acc;
  for (const Shell& s : shells) {
    acc += ball_potential(s.outer, t, kernel);
    if (s.inner > 0.0) acc += -ball_potential(s.inner, t, kernel);
  }
  return acc.value();
}

QuadratureOptions radial_options() {
  QuadratureOptions opt;
  opt.order = 32;
  opt.initial_panels = 1;
  opt.max_panels = 32;
  opt.rel_tol = 1e-10;
  return opt;
}

/// Graded breakpoints on every shell, refined at both shell boundaries.
std::vector<double> shell_breaks(const Shell& s, int levels = 20) {
  return graded_breaks(s.inner, s.outer, s.inner > 0.0, true, levels);
}

double shells_energy(std::span<const Shell> shells, const Kernel& kernel) {
  const int n = kernel.n();
  const double area = unit_sphere_area(n);
  auto f = [&](double t) { return shells_potential(shells, t, kernel) * area * std::pow(t, n - 1); };
  Accumulator acc;
  for (const Shell& s : shells) {
    acc += integrate_doubling(f, shell_breaks(s), radial_options()).value;
  }
  return acc.value();
}

/// Normalized measure of {ω ∈ S^{n-1} : ω·e > u0}.
double cap_fraction(double u0, int n) {
  if (u0 >= 1.0) return 0.0;
  if (u0 <= -1.0) return 1.0;
  if (n == 2) return std::acos(u0) / std::numbers::pi;
  if (n == 3) return 0.5 * (1.0 - u0);
  const double half = 0.5 * boost::math::ibeta(0.5 * (n - 1), 0.5, 1.0 - u0 * u0);
  return u0 >= 0.0 ? half : 1.0 - half;
}

}  // namespace

RadialSet::RadialSet(int n, std::vector<Shell> shells) : n_(n), shells_(std::move(shells)) {
  if (n < 1) throw Error(Errc::invalid_dimension, "dimension must be >= 1");
  if (shells_.empty()) throw Error(Errc::invalid_argument, "radial set needs at least one shell");
  double prev = -1.0;
  for (const Shell& s : shells_) {
    if (!(s.inner >= 0.0) || !(s.outer > s.inner) || !std::isfinite(s.outer)) {
      throw Error(Errc::invalid_argument, "shells must satisfy 0 <= inner < outer");
    }
    if (!(s.inner > prev) && prev >= 0.0) {
      throw Error(Errc::invalid_argument, "shells must be sorted and disjoint");
    }
    prev = s.outer;
  }
}

RadialSet RadialSet::ball(double radius, int n) { return RadialSet(n, {{0.0, radius}}); }

double RadialSet::volume() const { return shells_volume(shells_, n_); }

double RadialSet::volume_radius() const { return riesz::volume_radius(volume(), n_); }

std::vector<Shell> RadialSet::truncated(double r) const {
  std::vector<Shell> out;
  for (const Shell& s : shells_) {
    if (s.inner >= r) break;
    out.push_back({s.inner, std::min(s.outer, r)});
  }
  return out;
}

double radial_volume(const RadialSet& set) { return set.volume(); }

double truncated_volume_radius(const RadialSet& set, double r) {
  const auto part = set.truncated(r);
  if (part.empty()) return 0.0;
  return volume_radius(shells_volume(part, set.n()), set.n());
}

double radial_potential(const RadialSet& set, double t, const Kernel& kernel) {
  require_dimension(set, kernel);
  return shells_potential(set.shells(), t, kernel);
}

double radial_energy(const RadialSet& set, const Kernel& kernel) {
  require_dimension(set, kernel);
  return shells_energy(set.shells(), kernel);
}

double energy_via_shell_split(const RadialSet& set, double split_radius, const Kernel& kernel) {
  require_dimension(set, kernel);
  if (!(split_radius >= 0.0)) throw Error(Errc::invalid_argument, "split radius must be >= 0");
  const int n = kernel.n();
  const double area = unit_sphere_area(n);
  const auto inner = set.truncated(split_radius);
  Accumulator acc;
  if (!inner.empty()) acc += shells_energy(inner, kernel);

  // For r inside shell k, A ∩ B_r = shells before k plus [inner_k, r).
  const auto shells = set.shells();
  for (std::size_t k = 0; k < shells.size(); ++k) {
    const double lo = std::max(shells[k].inner, split_radius);
    const double hi = shells[k].outer;
    if (!(hi > lo)) continue;
    const auto below = shells.first(k);
    const double a = shells[k].inner;
    auto f = [&](double r) {
      double phi = shells_potential(below, r, kernel) + ball_potential(r, r, kernel);
      if (a > 0.0) phi -= ball_potential(a, r, kernel);
      return 2.0 * area * std::pow(r, n - 1) * phi;
    };
    acc += integrate_doubling(f, graded_breaks(lo, hi, a > 0.0 && lo == a, true, 20),
                              radial_options())
               .value;
  }
  return acc.value();
}

RadialSet annulus_perturbation(double a, int n) {
  if (!(a >= 0.0) || !(a < 1.0)) {
    throw Error(Errc::invalid_argument, "annulus parameter must satisfy 0 <= a < 1");
  }
  if (a == 0.0) return RadialSet::ball(1.0, n);
  return RadialSet(n, {{0.0, std::pow(1.0 - a, 1.0 / n)}, {1.0, std::pow(1.0 + a, 1.0 / n)}});
}

double radial_overlap(const RadialSet& set, double offset, double radius) {
  const int n = set.n();
  const double area = unit_sphere_area(n);
  const double c = offset;
  const double R = radius;
  if (c == 0.0) {
    const auto part = set.truncated(R);
    return part.empty() ? 0.0 : shells_volume(part, n);
  }
  auto cap_area = [&](double r) {
    if (r == 0.0) return 0.0;
    if (n == 1) {
      const double inside = (std::abs(r - c) < R ? 1.0 : 0.0) + (std::abs(r + c) < R ? 1.0 : 0.0);
      return inside;
    }
    const double u0 = (r * r + c * c - R * R) / (2.0 * r * c);
    return area * std::pow(r, n - 1) * cap_fraction(u0, n);
  };
  Accumulator acc;
  for (const Shell& s : set.shells()) {
    std::vector<double> breaks{s.inner};
    for (double kink : {std::abs(c - R), c + R}) {
      if (kink > s.inner && kink < s.outer) breaks.push_back(kink);
    }
    breaks.push_back(s.outer);
    std::sort(breaks.begin(), breaks.end());
    QuadratureOptions opt = radial_options();
    opt.rel_tol = 1e-12;
    opt.abs_floor = 1e-14;
    acc += integrate_doubling(cap_area, breaks, opt).value;
  }
  return acc.value();
}

RadialAsymmetry radial_asymmetry(const RadialSet& set) {
  const double volume = set.volume();
  const double R = set.volume_radius();
  const double cmax = set.outer_radius() + R;
  // Uniform scan plus the offsets where a shell boundary becomes tangent to the ball.
  constexpr int kScan = 101;
  std::vector<double> grid;
  for (int i = 0; i < kScan; ++i) grid.push_back(cmax * i / (kScan - 1));
  for (const Shell& s : set.shells()) {
    for (double r : {s.inner, s.outer}) {
      if (r > 0) grid.push_back(std::abs(r - R));
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> values(grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = radial_overlap(set, grid[i], R);
    if (values[i] > values[best]) best = i;
  }
  RadialAsymmetry out;
  out.offset = grid[best];
  out.overlap = values[best];
  const auto f = [&](double c) { return radial_overlap(set, c, R); };
  const double x_tol = 1e-10 * std::max(1.0, cmax);
  if (best > 0) {
    auto left = golden_section_max(f, grid[best - 1], grid[best], x_tol);
    if (left.value > out.overlap) out.offset = left.x, out.overlap = left.value;
  }
  if (best + 1 < grid.size()) {
    auto right = golden_section_max(f, grid[best], grid[best + 1], x_tol);
    if (right.value > out.overlap) out.offset = right.x, out.overlap = right.value;
  }
  out.centered_optimal = out.offset <= x_tol;
  out.alpha = std::clamp(1.0 - out.overlap / volume, 0.0, 1.0);
  return out;
}

double deficit_radial(const RadialSet& set, const Kernel& kernel) {
  require_dimension(set, kernel);
  const double ball = shells_energy(RadialSet::ball(set.volume_radius(), set.n()).shells(), kernel);
  const double energy = shells_energy(set.shells(), kernel);
  return (ball - energy) / ball;
}

}  // namespace riesz
