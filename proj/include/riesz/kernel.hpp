#pragma once

#include <vector>

namespace riesz {

/// Riesz kernel |x - y|^{-lambda} on R^n, 0 < lambda < n.
class Kernel {
 public:
  Kernel(int n, double lambda);

  /// The Newton kernel lambda = n - 2 (n >= 3).
  static Kernel newton(int n);

  int n() const { return n_; }
  double lambda() const { return lambda_; }

  /// n >= 3 and n - 2 <= lambda < n: the functional is reflection positive
  /// and positive definite in this range.
  bool reflection_positive() const { return n_ >= 3 && lambda_ >= n_ - 2; }
  bool is_newton() const { return n_ >= 3 && lambda_ == n_ - 2; }

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  int n_;
  double lambda_;
};

struct BallSpec {
  double radius;
  std::vector<double> center;
};

/// omega_n = pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);

/// |S^{n-1}| = n omega_n.
double unit_sphere_area(int n);

double ball_volume(double R, int n);

/// Radius of the ball with the given volume.
double volume_radius(double volume, int n);

/// Newton potential of B_R at distance t from the center (lambda = n - 2).
double newton_potential_ball(double R, double t, int n);

/// E(B_R) = 2n/(n+2) omega_n^2 R^{n+2} for the Newton kernel.
double newton_energy_ball(double R, int n);

/// Integral of |x - y|^{-lambda} over the sphere of radius s, at distance t
/// from its center (n = 3).
double shell_potential_3d(double s, double t, double lambda);

/// Phi_{B_R}(0) = n omega_n / (n - lambda) R^{n - lambda}.
double ball_center_potential(double R, const Kernel& kernel);

/// Riesz potential of B_R at distance t from its center.
double ball_potential(double R, double t, const Kernel& kernel);

/// Same quantity by 1D quadrature over ray directions, valid for every n >= 2.
/// Used by ball_potential outside the closed-form cases.
double ball_potential_quadrature(double R, double t, const Kernel& kernel);

/// E(B_R): closed form for the Newton kernel, radial quadrature otherwise.
double ball_energy(double R, const Kernel& kernel);

}  // namespace riesz
