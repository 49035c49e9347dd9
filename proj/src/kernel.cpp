#include "riesz/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "riesz/error.hpp"
#include "riesz/quadrature.hpp"

namespace riesz {

namespace {

constexpr double kPi = std::numbers::pi;

void require_radius(double R) {
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw Error(Errc::invalid_argument, "radius must be positive, got " + std::to_string(R));
  }
}

void require_distance(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(Errc::invalid_argument, "distance must be >= 0, got " + std::to_string(t));
  }
}

/// Breakpoints on [a, b] clustered at `focus` (one of the ends) down to `width`.
std::vector<double> layer_breaks(double a, double b, bool focus_right, double width) {
  const double len = b - a;
  int levels = 0;
  if (width < len) levels = std::clamp(static_cast<int>(std::ceil(std::log2(len / width))) + 3, 0, 48);
  return graded_breaks(a, b, !focus_right, focus_right, levels);
}

// Closed form for n = 3 obtained by integrating shell_potential_3d over (0, R).
double ball_potential_3d_closed(double R, double t, double lambda) {
  const double p = 2.0 - lambda;
  const double q1 = p + 1.0;
  const double q2 = p + 2.0;
  const double plus = std::pow(R + t, q2) / q2 - t * std::pow(R + t, q1) / q1 +
                      std::pow(t, q2) * (1.0 / q1 - 1.0 / q2);
  auto H = [&](double u) { return t * std::pow(u, q1) / q1 - std::pow(u, q2) / q2; };
  const double m = std::min(R, t);
  double minus = H(t) - H(t - m);
  if (R > t) minus += std::pow(R - t, q2) / q2 + t * std::pow(R - t, q1) / q1;
  return 2.0 * kPi / (t * p) * (plus - minus);
}

double ball_potential_3d_log(double R, double t) {
  if (t == R) return 2.0 * kPi * R;
  return 2.0 * kPi / t * (0.5 * (R * R - t * t) * std::log((R + t) / std::abs(R - t)) + t * R);
}

double ball_potential_1d(double R, double t, double lambda) {
  const double p = 1.0 - lambda;
  if (t <= R) return (std::pow(R + t, p) + std::pow(R - t, p)) / p;
  return (std::pow(t + R, p) - std::pow(t - R, p)) / p;
}

}  // namespace

Kernel::Kernel(int n, double lambda) : n_(n), lambda_(lambda) {
  if (n < 1) throw Error(Errc::invalid_dimension, "dimension must be >= 1");
  if (!(lambda > 0.0) || !(lambda < n) || !std::isfinite(lambda)) {
    throw Error(Errc::invalid_kernel, "exponent must satisfy 0 < lambda < n (n=" +
                                          std::to_string(n) + ", lambda=" +
                                          std::to_string(lambda) + ")");
  }
}

Kernel Kernel::newton(int n) {
  if (n < 3) throw Error(Errc::unsupported_dimension, "Newton kernel needs n >= 3");
  return Kernel(n, n - 2.0);
}

double unit_ball_volume(int n) {
  if (n < 1) throw Error(Errc::invalid_dimension, "dimension must be >= 1");
  return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

double ball_volume(double R, int n) { return unit_ball_volume(n) * std::pow(R, n); }

double volume_radius(double volume, int n) {
  if (!(volume > 0.0)) throw Error(Errc::invalid_argument, "volume must be positive");
  return std::pow(volume / unit_ball_volume(n), 1.0 / n);
}

double newton_potential_ball(double R, double t, int n) {
  if (n < 3) throw Error(Errc::unsupported_dimension, "Newton potential needs n >= 3");
  require_radius(R);
  require_distance(t);
  const double scale = unit_ball_volume(n) * R * R;
  const double u = t / R;
  if (t <= R) return scale * (0.5 * n - 0.5 * (n - 2) * u * u);
  return scale * std::pow(u, -(n - 2.0));
}

double newton_energy_ball(double R, int n) {
  if (n < 3) throw Error(Errc::unsupported_dimension, "Newton energy needs n >= 3");
  require_radius(R);
  const double w = unit_ball_volume(n);
  return 2.0 * n / (n + 2.0) * w * w * std::pow(R, n + 2.0);
}

double shell_potential_3d(double s, double t, double lambda) {
  require_radius(s);
  require_distance(t);
  if (!(lambda > 0.0 && lambda < 3.0)) {
    throw Error(Errc::invalid_kernel, "shell potential needs 0 < lambda < 3");
  }
  if (t == 0.0) return 4.0 * kPi * std::pow(s, 2.0 - lambda);
  if (t == s && lambda >= 2.0) {
    throw Error(Errc::singular, "shell potential is infinite on the shell for lambda >= 2");
  }
  if (lambda == 2.0) return 2.0 * kPi * s / t * std::log((s + t) / std::abs(s - t));
  const double p = 2.0 - lambda;
  return 2.0 * kPi * s / (t * p) * (std::pow(s + t, p) - std::pow(std::abs(s - t), p));
}

double ball_center_potential(double R, const Kernel& kernel) {
  require_radius(R);
  const int n = kernel.n();
  return unit_sphere_area(n) / (n - kernel.lambda()) * std::pow(R, n - kernel.lambda());
}

double ball_potential_quadrature(double R, double t, const Kernel& kernel) {
  require_radius(R);
  require_distance(t);
  const int n = kernel.n();
  if (n < 2) throw Error(Errc::unsupported_dimension, "ray quadrature needs n >= 2");
  if (t == 0.0) return ball_center_potential(R, kernel);

  const double p = n - kernel.lambda();
  const double lower_area = unit_sphere_area(n - 1);
  const double half_pi = 0.5 * kPi;
  QuadratureOptions opt;
  opt.order = 64;
  opt.initial_panels = 1;
  opt.max_panels = 64;
  opt.rel_tol = 1e-10;

  auto sin_pow = [n](double s) { return n == 2 ? 1.0 : std::pow(s, n - 2); };

  double integral = 0.0;
  if (t < R) {
    const double width = std::sqrt(R * R - t * t) / t;
    auto f = [&](double th) {
      const double st = std::sin(th);
      const double rho = t * std::cos(th) + std::sqrt(R * R - t * t * st * st);
      return std::pow(rho, p) * sin_pow(st);
    };
    auto left = layer_breaks(0.0, half_pi, true, width);
    auto right = layer_breaks(half_pi, kPi, false, width);
    integral = integrate_doubling(f, left, opt).value + integrate_doubling(f, right, opt).value;
  } else if (t == R) {
    auto f = [&](double th) { return std::pow(2.0 * R * std::cos(th), p) * sin_pow(std::sin(th)); };
    const double b[] = {0.0, half_pi};
    integral = integrate_doubling(f, b, opt).value;
  } else {
    const double k = R / t;
    const double width = std::sqrt(t * t - R * R) / t;
    auto f = [&](double phi) {
      const double sp = std::sin(phi);
      const double cp = std::cos(phi);
      const double st = k * sp;
      const double ct = std::sqrt(1.0 - st * st);
      const double rp = t * ct + R * cp;
      const double rm = std::sqrt(t * t - R * R * sp * sp) - R * cp;
      return (std::pow(rp, p) - std::pow(rm, p)) * sin_pow(st) * k * cp / ct;
    };
    auto breaks = layer_breaks(0.0, half_pi, true, width);
    integral = integrate_doubling(f, breaks, opt).value;
  }
  return lower_area / p * integral;
}

double ball_potential(double R, double t, const Kernel& kernel) {
  require_radius(R);
  require_distance(t);
  if (t == 0.0) return ball_center_potential(R, kernel);
  if (kernel.is_newton()) return newton_potential_ball(R, t, kernel.n());
  const double lambda = kernel.lambda();
  switch (kernel.n()) {
    case 1:
      return ball_potential_1d(R, t, lambda);
    case 3:
      if (lambda == 2.0) return ball_potential_3d_log(R, t);
      // Both closed forms lose digits to cancellation for small t or lambda near 2.
      if (t < 1e-2 * R || std::abs(lambda - 2.0) < 1e-4) break;
      return ball_potential_3d_closed(R, t, lambda);
    default:
      break;
  }
  return ball_potential_quadrature(R, t, kernel);
}

double ball_energy(double R, const Kernel& kernel) {
  require_radius(R);
  if (kernel.is_newton()) return newton_energy_ball(R, kernel.n());
  const int n = kernel.n();
  const double area = unit_sphere_area(n);
  auto f = [&](double t) { return ball_potential(R, t, kernel) * area * std::pow(t, n - 1); };
  QuadratureOptions opt;
  opt.order = 32;
  opt.max_panels = 64;
  opt.rel_tol = 1e-12;
  const auto breaks = graded_breaks(0.0, R, false, true, 30);
  return integrate_doubling(f, breaks, opt).value;
}

}  // namespace riesz
