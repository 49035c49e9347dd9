#include "riesz/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "riesz/corpus.hpp"
#include "riesz/error.hpp"
#include "riesz/quadrature.hpp"
#include "riesz/symmetrize.hpp"

namespace riesz {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

StabilityReport start(const char* check, const Kernel& kernel, const VoxelSet& set) {
  StabilityReport r;
  r.check = check;
  r.kernel = kernel;
  r.shape = set.grid().shape();
  r.spacing = set.grid().spacing();
  return r;
}

void require_kernel_dim(const VoxelSet& set, const Kernel& kernel) {
  if (kernel.n() != set.n()) throw Error(Errc::invalid_dimension, "kernel and set dimensions differ");
}

void require_newton(const Kernel& kernel, const char* what) {
  if (!kernel.is_newton()) throw Error(Errc::invalid_kernel, std::string(what) + " needs the Newton kernel lambda = n - 2");
}

void require_reflection_positive(const Kernel& kernel, const char* what) {
  if (!kernel.reflection_positive()) {
    throw Error(Errc::invalid_kernel, std::string(what) + " needs n >= 3 and n - 2 <= lambda < n");
  }
}

double energy_or_zero(const VoxelSet& set, const Kernel& kernel, const EngineOptions& opt) {
  return set.empty() ? 0.0 : energy_voxel(set, kernel, opt);
}

double alpha_floor(const VoxelSet& set, const Tolerances& tol) {
  return tol.scale * tol.alpha_floor * tol.resolution(set);
}

double deficit_tolerance(const VoxelSet& set, const Tolerances& tol) {
  return tol.scale * tol.deficit * tol.resolution(set);
}

double potential_tolerance(const VoxelSet& set, const Tolerances& tol, double scale) {
  return tol.scale * tol.potential * tol.resolution(set) * scale;
}

// Grid aligned with `g` covering the cube [-half, half]^n.
Grid covering_grid(const Grid& g, double half) {
  const double h = g.spacing();
  std::vector<int> shape(g.n());
  std::vector<double> origin(g.n());
  for (int k = 0; k < g.n(); ++k) {
    const double lo = std::floor((-half - g.origin()[k]) / h);
    const double hi = std::ceil((half - g.origin()[k]) / h);
    origin[k] = g.origin()[k] + lo * h;
    shape[k] = static_cast<int>(hi - lo) + 1;
  }
  return Grid(shape, h, origin);
}

double norm(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

bool origin_symmetric(const VoxelSet& set) {
  const auto c = point_symmetry_center(set);
  if (!c) return false;
  return norm(*c) <= 1e-9 * std::max(1.0, set.grid().spacing());
}

// ∫_{B_rho} Φ_{B_R} = n omega_n ∫_0^rho t^{n-1} Φ_{B_R}(t) dt.
double ball_potential_integral(double R, double rho, const Kernel& kernel) {
  const int n = kernel.n();
  auto f = [&](double t) { return std::pow(t, n - 1) * ball_potential(R, t, kernel); };
  std::vector<double> breaks{0.0};
  if (R < rho) breaks.push_back(R);
  breaks.push_back(rho);
  QuadratureOptions q;
  q.order = 32;
  q.max_panels = 64;
  q.rel_tol = 1e-9;
  return unit_sphere_area(n) * integrate_doubling(f, breaks, q).value;
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

void finalize(StabilityReport& r, bool inconclusive) {
  r.margin = r.lhs - r.rhs;
  r.pass = r.margin >= -r.tolerance;
  r.status = inconclusive ? Status::inconclusive : (r.pass ? Status::pass : Status::fail);
}

double Tolerances::resolution(const VoxelSet& set) const { return set.grid().spacing() / set.volume_radius(); }

Deficit deficit(const VoxelSet& set, const Kernel& kernel, const EngineOptions& opt) {
  require_nonempty(set);
  require_kernel_dim(set, kernel);
  Deficit d;
  d.energy_set = energy_voxel(set, kernel, opt);
  d.energy_ball = ball_energy(set.volume_radius(), kernel);
  d.raw = (d.energy_ball - d.energy_set) / d.energy_ball;
  d.clamped = d.raw < 0.0;
  d.value = std::max(d.raw, 0.0);
  return d;
}

Measures measure(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt) {
  return {fraenkel_asymmetry(set, opt.subsamples), deficit(set, kernel, opt.engine)};
}

double theorem_main_constant(int n) {
  if (n < 3) throw Error(Errc::unsupported_dimension, "the main-bound constant needs n >= 3");
  return (n - 2) * std::pow(2.0, 0.5 * n) / std::pow(static_cast<double>(n), 2.0 + 0.5 * n);
}

double lemma_max_factor(const Kernel& kernel, double alpha) {
  const double n = kernel.n();
  const double l = kernel.lambda();
  return 1.0 - l * (n - l) * alpha * alpha / (n * n);
}

StabilityReport check_theorem_sharp3(const VoxelSet& set, const SuiteOptions& opt) {
  return check_theorem_sharp3(set, measure(set, Kernel(3, 1.0), opt), opt);
}

StabilityReport check_theorem_sharp3(const VoxelSet& set, const Measures& m, const SuiteOptions& opt) {
  if (set.n() != 3) throw Error(Errc::unsupported_dimension, "the sharp3 check is for n = 3");
  auto r = start("sharp3", Kernel(3, 1.0), set);
  const double alpha = m.fraenkel.alpha;
  const double floor = alpha_floor(set, opt.tol);
  const bool small = alpha < floor;
  r.values = {{"alpha", alpha}, {"delta", m.deficit.raw}, {"alpha_floor", floor}};
  if (alpha > 0) {
    r.lhs = m.deficit.raw / (alpha * alpha);
    r.tolerance = deficit_tolerance(set, opt.tol) / (alpha * alpha);
  } else {
    r.lhs = kNaN;
  }
  r.rhs = opt.tol.sharp3_floor;
  r.values["ratio"] = r.lhs;
  finalize(r, small || !(alpha > 0));
  if (small) r.note = "alpha below the grid floor";
  if (m.deficit.clamped) r.note += (r.note.empty() ? "" : "; ") + std::string("negative deficit from discretization");
  return r;
}

StabilityReport check_theorem_main(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt) {
  require_newton(kernel, "the main-bound check");
  return check_theorem_main(set, kernel, measure(set, kernel, opt), opt);
}

StabilityReport check_theorem_main(const VoxelSet& set, const Kernel& kernel, const Measures& m,
                                   const SuiteOptions& opt) {
  require_newton(kernel, "the main-bound check");
  require_kernel_dim(set, kernel);
  auto r = start("main", kernel, set);
  const int n = kernel.n();
  const double alpha = m.fraenkel.alpha;
  const double cn = theorem_main_constant(n);
  r.lhs = m.deficit.raw;
  r.rhs = cn * std::pow(alpha, n + 2);
  r.tolerance = deficit_tolerance(set, opt.tol);
  r.values = {{"alpha", alpha}, {"delta", m.deficit.raw}, {"c_n", cn}};
  if (alpha > 0) r.values["ratio"] = m.deficit.raw / std::pow(alpha, n + 2);
  finalize(r);
  return r;
}

StabilityReport check_lemma_max(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt) {
  require_kernel_dim(set, kernel);
  return check_lemma_max(set, kernel, {fraenkel_asymmetry(set, opt.subsamples), {}}, opt);
}

StabilityReport check_lemma_max(const VoxelSet& set, const Kernel& kernel, const Measures& m,
                                const SuiteOptions& opt) {
  require_kernel_dim(set, kernel);
  auto r = start("lemma-max", kernel, set);
  const double alpha = m.fraenkel.alpha;
  const double center = ball_center_potential(set.volume_radius(), kernel);
  const double factor = lemma_max_factor(kernel, alpha);
  r.lhs = center * factor;
  r.rhs = potential_fft(set, kernel, opt.engine).max();
  r.tolerance = potential_tolerance(set, opt.tol, center);
  r.values = {{"alpha", alpha}, {"factor", factor}, {"ball_center_potential", center}};
  finalize(r);
  return r;
}

StabilityReport check_lemma_key3(const VoxelSet& set, const Kernel& kernel, std::optional<double> r_opt,
                                 const SuiteOptions& opt) {
  require_nonempty(set);
  require_kernel_dim(set, kernel);
  if (!origin_symmetric(set)) {
    throw Error(Errc::precondition, "symmetry precondition: the set is not symmetric under x -> -x");
  }
  const Grid& g = set.grid();
  const int n = g.n();
  const double h = g.spacing();
  double reach = 0;
  for_each_cell(g, [&](std::size_t i, const Index& idx) {
    if (set[i]) reach = std::max(reach, norm(g.center(idx)));
  });
  const double r = r_opt ? *r_opt : reach + 0.5 * h;
  if (!(r > 0)) throw Error(Errc::invalid_argument, "r must be positive");
  if (reach > r * (1 + 1e-12)) throw Error(Errc::precondition, "the set is not contained in B_r");

  const Grid big = covering_grid(g, r + 2 * h);
  const VoxelSet a = embed(set, big);
  const auto phi = potential_fft(a, kernel, opt.engine);
  const double lambda = kernel.lambda();
  const double outside = ball_volume(r, n) - set.volume();
  const double deficit_term = std::pow(std::sqrt(2.0) * r, -lambda) * std::max(outside, 0.0);
  const double on_sphere = ball_potential(r, r, kernel);

  auto rep = start("key3", kernel, set);
  rep.lhs = std::numeric_limits<double>::infinity();
  std::size_t evaluated = 0;
  for_each_cell(big, [&](std::size_t i, const Index& idx) {
    const double t = norm(big.center(idx));
    if (std::abs(t - r) > h) return;
    ++evaluated;
    const double bound = ball_potential(r, t, kernel) - deficit_term;
    if (bound - phi.values[i] < rep.lhs - rep.rhs || evaluated == 1) {
      rep.lhs = bound;
      rep.rhs = phi.values[i];
    }
  });
  rep.tolerance = potential_tolerance(set, opt.tol, on_sphere);
  rep.values = {{"r", r},
                {"volume_outside", outside},
                {"deficit_term", deficit_term},
                {"evaluated_cells", static_cast<double>(evaluated)}};
  if (outside < 0) rep.note = "Vol(B_r \\ A) negative on the grid, clamped to 0";
  finalize(rep);
  return rep;
}

Key3Expansion key3_expansion(const VoxelSet& set, const Kernel& kernel, const std::vector<double>& eps,
                             const SuiteOptions&) {
  require_nonempty(set);
  require_kernel_dim(set, kernel);
  if (eps.size() < 2) throw Error(Errc::invalid_argument, "the expansion needs at least two eps values");
  const int n = kernel.n();
  const double lambda = kernel.lambda();
  const double RA = set.volume_radius();
  const double boundary = ball_potential(RA, RA, kernel);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> dirs(256, std::vector<double>(n));
  for (auto& d : dirs) {
    for (double& v : d) v = gauss(rng);
    const double l = norm(d);
    for (double& v : d) v /= l;
  }

  Key3Expansion out;
  out.eps = eps;
  for (double e : eps) {
    if (!(e > 0)) throw Error(Errc::invalid_argument, "eps must be positive");
    const double r = RA * (1 + e);
    const double bound = ball_potential(r, r, kernel) -
                         std::pow(std::sqrt(2.0) * r, -lambda) * (ball_volume(r, n) - set.volume());
    out.bound_gap.push_back(boundary - bound);
    auto points = dirs;
    for (auto& p : points) {
      for (double& v : p) v *= r;
    }
    const auto phi = potential_at_points(set, kernel, points);
    out.measured_gap.push_back(boundary - *std::max_element(phi.begin(), phi.end()));
  }
  // b(eps)/eps = slope + q eps: least squares, exact for two points
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double y = out.bound_gap[i] / eps[i];
    sx += eps[i];
    sy += y;
    sxx += eps[i] * eps[i];
    sxy += eps[i] * y;
  }
  const double q = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  out.slope = (sy - q * sx) / m;
  // d/de of the bound gap at e = 0
  out.predicted = std::pow(RA, n - lambda) *
                  (n * unit_ball_volume(n) * std::pow(2.0, -0.5 * lambda) - (n - lambda) * ball_potential(1.0, 1.0, kernel));
  return out;
}

StabilityReport check_reflection_positivity(const VoxelSet& set, int axis, const Kernel& kernel,
                                            const SuiteOptions& opt) {
  require_reflection_positive(kernel, "the reflection positivity check");
  require_kernel_dim(set, kernel);
  const auto s = symmetrize_halfspace(set, axis);
  const double e = energy_voxel(set, kernel, opt.engine);
  const double ep = energy_or_zero(s.plus, kernel, opt.engine);
  const double em = energy_or_zero(s.minus, kernel, opt.engine);
  auto r = start("reflection", kernel, set);
  r.lhs = ep + em;
  r.rhs = 2 * e;
  r.tolerance = opt.tol.scale * opt.tol.energy * opt.tol.resolution(set) * 2 * e;
  r.values = {{"axis", axis}, {"plane", s.plane}, {"imbalance", s.imbalance}};
  const double d = deficit(set, kernel, opt.engine).raw;
  double dsum = 0;
  for (const VoxelSet* part : {&s.plus, &s.minus}) {
    if (!part->empty()) dsum += deficit(*part, kernel, opt.engine).raw;
  }
  r.values["delta"] = d;
  r.values["delta_sum"] = dsum;
  r.values["delta_sum_margin"] = 2 * d - dsum;
  r.values["delta_sum_ok"] = 2 * d - dsum >= -2 * deficit_tolerance(set, opt.tol) ? 1.0 : 0.0;
  finalize(r);
  return r;
}

StabilityReport check_fmp_deficit(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt) {
  require_reflection_positive(kernel, "the symmetrization deficit check");
  require_kernel_dim(set, kernel);
  return check_fmp_deficit(set, kernel, fmp_symmetrize(set, opt.subsamples), opt);
}

StabilityReport check_fmp_deficit(const VoxelSet& set, const Kernel& kernel, const FmpResult& f,
                                  const SuiteOptions& opt) {
  require_reflection_positive(kernel, "the symmetrization deficit check");
  require_kernel_dim(set, kernel);
  const double factor = std::pow(2.0, set.n());
  const double d = deficit(set, kernel, opt.engine).raw;
  const double dt = deficit(f.set, kernel, opt.engine).raw;
  auto r = start("fmp-deficit", kernel, set);
  r.lhs = factor * d;
  r.rhs = dt;
  r.tolerance = (factor + 1) * deficit_tolerance(set, opt.tol);
  r.values = {{"delta", d},
              {"delta_symmetrized", dt},
              {"alpha_in", f.alpha_in},
              {"alpha_out", f.alpha_out},
              {"alpha_ratio", f.ratio},
              {"imbalance", f.imbalance}};
  finalize(r);
  return r;
}

StabilityReport check_talenti(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt) {
  require_newton(kernel, "the Talenti check");
  require_kernel_dim(set, kernel);
  const Grid& g = set.grid();
  const int n = g.n();
  const double RA = set.volume_radius();
  const auto rearranged = rearrange_decreasing(potential_fft(set, kernel, opt.engine));
  const auto order = distance_order(g);
  const double hn = g.cell_volume();
  const double omega = unit_ball_volume(n);

  auto r = start("talenti", kernel, set);
  double worst = std::numeric_limits<double>::infinity();
  double interior = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double rho = std::pow((k + 0.5) * hn / omega, 1.0 / n);
    const double bound = newton_potential_ball(RA, rho, n);
    const double value = rearranged.values[order[k]];
    if (bound - value < worst) {
      worst = bound - value;
      r.lhs = bound;
      r.rhs = value;
    }
    if (rho < 0.5 * RA) interior = std::min(interior, bound - value);
  }
  const double center = newton_potential_ball(RA, 0.0, n);
  r.tolerance = potential_tolerance(set, opt.tol, center);
  r.values = {{"interior_min_margin", interior}, {"ball_center_potential", center}};
  finalize(r);
  return r;
}

StabilityReport check_talenti_integrated(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt) {
  require_newton(kernel, "the Talenti check");
  require_kernel_dim(set, kernel);
  const Grid& g = set.grid();
  const int n = g.n();
  const double RA = set.volume_radius();
  const auto phi = potential_fft(set, kernel, opt.engine);
  const double hn = g.cell_volume();
  const double omega = unit_ball_volume(n);
  Accumulator lhs, rhs;
  for (std::size_t k = 0; k < g.size(); ++k) {
    lhs += hn * newton_potential_ball(RA, std::pow((k + 0.5) * hn / omega, 1.0 / n), n);
    rhs += hn * phi.values[k];
  }
  auto r = start("talenti-integrated", kernel, set);
  r.lhs = lhs.value();
  r.rhs = rhs.value();
  r.tolerance = opt.tol.scale * opt.tol.energy * opt.tol.resolution(set) * r.lhs;
  finalize(r);
  return r;
}

StabilityReport check_domination(const VoxelSet& set, const VoxelSet& other, const Kernel& kernel,
                                 const SuiteOptions& opt) {
  require_nonempty(set);
  require_nonempty(other);
  require_kernel_dim(set, kernel);
  if (!(set.grid() == other.grid())) throw Error(Errc::invalid_argument, "both sets must share one grid");
  const auto phi = potential_fft(set, kernel, opt.engine);
  Accumulator acc;
  for (std::size_t i = 0; i < phi.values.size(); ++i) {
    if (other[i]) acc += phi.values[i];
  }
  auto r = start("dom", kernel, set);
  r.lhs = ball_potential_integral(set.volume_radius(), other.volume_radius(), kernel);
  r.rhs = acc.value() * set.grid().cell_volume();
  r.tolerance = opt.tol.scale * opt.tol.potential * opt.tol.resolution(set) * r.lhs;
  r.values = {{"volume_other", other.volume()}};
  finalize(r);
  return r;
}

StabilityReport check_alpha_yg(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt) {
  require_reflection_positive(kernel, "the alpha-YG check");
  require_kernel_dim(set, kernel);
  return check_alpha_yg(set, kernel, {fraenkel_asymmetry(set, opt.subsamples), {}}, opt);
}

StabilityReport check_alpha_yg(const VoxelSet& set, const Kernel& kernel, const Measures& m,
                               const SuiteOptions& opt) {
  require_reflection_positive(kernel, "the alpha-YG check");
  require_kernel_dim(set, kernel);
  QuadraticOptions q;
  q.subsamples = opt.subsamples;
  q.engine = opt.engine;
  const auto qd = quadratic_distance(set, kernel, q);
  const double alpha = m.fraenkel.alpha;
  const double floor = alpha_floor(set, opt.tol);
  auto r = start("alpha-yg", kernel, set);
  r.lhs = qd.value;
  r.rhs = 0.0;
  r.tolerance = deficit_tolerance(set, opt.tol);
  const double upper_exp = 2.0 - kernel.lambda() / kernel.n();
  r.values = {{"alpha", alpha},
              {"middle", qd.value},
              {"ratio_lower", alpha > 0 ? qd.value / std::pow(alpha, 4) : kNaN},
              {"ratio_upper", alpha > 0 ? qd.value / std::pow(alpha, upper_exp) : kNaN},
              {"alpha_floor", floor}};
  const bool small = alpha < floor;
  finalize(r, small);
  if (small) r.note = "alpha below the grid floor";
  return r;
}

VoxelSet recenter(const VoxelSet& set, const std::vector<double>& point) {
  const Grid& g = set.grid();
  if (point.size() != static_cast<std::size_t>(g.n())) throw Error(Errc::invalid_dimension, "point dimension differs");
  std::vector<double> origin = g.origin();
  for (int k = 0; k < g.n(); ++k) origin[k] -= point[k];
  return VoxelSet(Grid(g.shape(), g.spacing(), origin), {set.occupancy().begin(), set.occupancy().end()});
}

StabilityReport check_truncation(const VoxelSet& set, const Kernel& kernel, double c, const SuiteOptions& opt) {
  require_kernel_dim(set, kernel);
  return check_truncation(set, kernel, c, measure(set, kernel, opt), opt);
}

StabilityReport check_truncation(const VoxelSet& set, const Kernel& kernel, double c, const Measures& m,
                                 const SuiteOptions& opt) {
  require_kernel_dim(set, kernel);
  const double alpha0 = m.fraenkel.alpha;
  if (alpha0 > opt.tol.truncation_alpha) {
    throw Error(Errc::precondition, "truncation needs alpha0 <= " + std::to_string(opt.tol.truncation_alpha));
  }
  const VoxelSet a = recenter(set, m.fraenkel.center);
  const auto t = truncate_tail(a, alpha0, c, kernel);

  // Vol(X △ A*) / (2 Vol(X)) with A* = B(0, R_A) by cell centers
  const double RA = a.volume_radius();
  const Grid& g = a.grid();
  auto fraction = [&](const VoxelSet& x) {
    std::size_t out = 0;
    for_each_cell(g, [&](std::size_t i, const Index& idx) {
      if (x[i] && norm(g.center(idx)) >= RA) ++out;
    });
    return (2.0 * out * g.cell_volume() + a.volume() - x.volume()) / (2.0 * x.volume());
  };
  const double f0 = fraction(a);
  const double f1 = fraction(t.set);
  if (std::abs(f1 - f0) > g.cell_volume() / a.volume() * (1 + 1e-9)) {
    throw Error(Errc::infeasible, "truncation changed the symmetric-difference fraction");
  }

  const double d1 = t.removed == 0 ? m.deficit.raw : deficit(t.set, kernel, opt.engine).raw;
  auto r = start("truncation", kernel, set);
  r.lhs = m.deficit.raw;
  r.rhs = d1;
  r.tolerance = deficit_tolerance(set, opt.tol);
  r.values = {{"c", c},
              {"alpha0", alpha0},
              {"outer_radius", t.outer_radius},
              {"inner_radius", t.inner_radius},
              {"removed", static_cast<double>(t.removed)},
              {"added", static_cast<double>(t.added)},
              {"fraction_before", f0},
              {"fraction_after", f1}};
  finalize(r);
  return r;
}

StabilityReport check_poisson(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt) {
  require_newton(kernel, "the Poisson check");
  require_kernel_dim(set, kernel);
  const auto pr = poisson_residual(potential_fft(set, kernel, opt.engine), set);
  auto r = start("poisson", kernel, set);
  r.lhs = opt.tol.scale * opt.tol.poisson * pr.target;
  r.rhs = std::max(pr.interior_mean, pr.exterior_mean);
  r.tolerance = 0.0;
  r.values = {{"target", pr.target},
              {"interior_mean", pr.interior_mean},
              {"interior_max", pr.interior_max},
              {"interior_cells", static_cast<double>(pr.interior_cells)},
              {"exterior_mean", pr.exterior_mean},
              {"exterior_max", pr.exterior_max},
              {"exterior_cells", static_cast<double>(pr.exterior_cells)}};
  const bool empty = pr.interior_cells == 0;
  finalize(r, empty);
  if (empty) r.note = "no interior cells at this resolution";
  return r;
}

StabilityReport check_theorem_main_radial(const RadialSet& set, const Kernel& kernel) {
  require_newton(kernel, "the main-bound check");
  if (kernel.n() != set.n()) throw Error(Errc::invalid_dimension, "kernel and set dimensions differ");
  const int n = kernel.n();
  const double alpha = radial_asymmetry(set).alpha;
  const double delta = deficit_radial(set, kernel);
  const double cn = theorem_main_constant(n);
  StabilityReport r;
  r.check = "main-radial";
  r.kernel = kernel;
  r.lhs = delta;
  r.rhs = cn * std::pow(alpha, n + 2);
  r.tolerance = 1e-8;
  r.values = {{"alpha", alpha}, {"delta", delta}, {"c_n", cn}};
  if (alpha > 0) r.values["ratio"] = delta / std::pow(alpha, n + 2);
  finalize(r);
  return r;
}

FamilySweep fit_exponent(std::string family, const Kernel& kernel, std::vector<SweepPoint> points,
                         double alpha_floor) {
  FamilySweep out{std::move(family), kernel, std::move(points)};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : out.points) {
    if (!(p.alpha > alpha_floor) || !(p.delta > 0)) continue;
    const double x = std::log(p.alpha);
    const double y = std::log(p.delta);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++out.fitted;
  }
  if (out.fitted < 4) throw Error(Errc::invalid_argument, "the exponent fit needs at least 4 points above the floor");
  const double m = static_cast<double>(out.fitted);
  const double den = m * sxx - sx * sx;
  if (!(den > 0)) throw Error(Errc::singular, "all fitted points share one alpha");
  out.slope = (m * sxy - sx * sy) / den;
  out.intercept = (sy - out.slope * sx) / m;
  return out;
}

namespace {

SweepPoint make_point(double param, double alpha, double delta, int n, double middle) {
  SweepPoint p{param, alpha, delta, kNaN, kNaN, middle};
  if (alpha > 0) {
    p.ratio_quadratic = delta / (alpha * alpha);
    p.ratio_theorem_main = delta / std::pow(alpha, n + 2);
  }
  return p;
}

}  // namespace

SweepPoint radial_point(double param, const RadialSet& set, const Kernel& kernel) {
  return make_point(param, radial_asymmetry(set).alpha, deficit_radial(set, kernel), kernel.n(), kNaN);
}

SweepPoint voxel_point(double param, const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt,
                       bool with_middle) {
  const auto m = measure(set, kernel, opt);
  double middle = kNaN;
  if (with_middle && kernel.reflection_positive()) {
    QuadraticOptions q;
    q.subsamples = opt.subsamples;
    q.engine = opt.engine;
    middle = quadratic_distance(set, kernel, q).value;
  }
  return make_point(param, m.fraenkel.alpha, m.deficit.raw, kernel.n(), middle);
}

FamilySweep sweep_annulus(const std::vector<double>& a, const Kernel& kernel) {
  if (a.empty()) throw Error(Errc::invalid_argument, "empty parameter range");
  std::vector<SweepPoint> points;
  for (double v : a) points.push_back(radial_point(v, annulus_perturbation(v, kernel.n()), kernel));
  return fit_exponent("annulus", kernel, std::move(points));
}

FamilySweep sweep_ellipsoid(const std::vector<double>& e, const Kernel& kernel, int cells, const SuiteOptions& opt) {
  if (e.empty()) throw Error(Errc::invalid_argument, "empty parameter range");
  const Grid g = Grid::centered(kernel.n(), cells, 4.0);
  std::vector<SweepPoint> points;
  for (double v : e) {
    std::vector<double> axes(kernel.n(), 1.0);
    axes.front() = 1 + v;
    axes.back() = 1 / (1 + v);
    points.push_back(voxel_point(v, make_ellipsoid(g, axes), kernel, opt));
  }
  const VoxelSet probe = make_ellipsoid(g, std::vector<double>(kernel.n(), 1.0));
  return fit_exponent("ellipsoid", kernel, std::move(points), alpha_floor(probe, opt.tol));
}

FamilySweep sweep_two_balls(const std::vector<double>& separation, const Kernel& kernel, int cells,
                            const SuiteOptions& opt) {
  if (separation.empty()) throw Error(Errc::invalid_argument, "empty parameter range");
  const Grid g = Grid::centered(kernel.n(), cells, 4.0);
  std::vector<SweepPoint> points;
  for (double d : separation) points.push_back(voxel_point(d, make_two_balls(g, 0.6, d), kernel, opt));
  return fit_exponent("two-balls", kernel, std::move(points));
}

FamilySweep sweep_lambda(const std::vector<double>& lambda, double a) {
  if (lambda.empty()) throw Error(Errc::invalid_argument, "empty parameter range");
  FamilySweep out{"lambda-scan", Kernel(3, 1.0), {}};
  const RadialSet set = annulus_perturbation(a, 3);
  for (double l : lambda) out.points.push_back(radial_point(l, set, Kernel(3, l)));
  out.slope = kNaN;
  out.intercept = kNaN;
  return out;
}

}  // namespace riesz
