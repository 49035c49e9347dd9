#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "riesz/error.hpp"
#include "riesz/kernel.hpp"
#include "riesz/quadrature.hpp"

using namespace riesz;
using std::numbers::pi;

namespace {

// Oracle: brute 2D tensor Gauss over (theta, phi) on the sphere of radius s.
double shell_potential_sphere_oracle(double s, double t, double lambda) {
  const GaussRule& g = gauss_legendre(200);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double th = 0.5 * pi * (1.0 + g.nodes[i]);
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
      const double ph = pi * (1.0 + g.nodes[j]);
      const double x = s * std::sin(th) * std::cos(ph);
      const double y = s * std::sin(th) * std::sin(ph);
      const double z = s * std::cos(th) - t;
      const double w = g.weights[i] * 0.5 * pi * g.weights[j] * pi;
      sum += w * s * s * std::sin(th) * std::pow(x * x + y * y + z * z, -0.5 * lambda);
    }
  }
  return sum;
}

// Oracle: Monte-Carlo estimate of int_{B_R} |x - y|^{-lambda} dy in R^3, x = (t,0,0).
double ball_potential_monte_carlo(double R, double t, double lambda, int samples) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-R, R);
  double sum = 0.0;
  int accepted = 0;
  while (accepted < samples) {
    const double y0 = u(rng), y1 = u(rng), y2 = u(rng);
    if (y0 * y0 + y1 * y1 + y2 * y2 >= R * R) continue;
    ++accepted;
    const double dx = t - y0;
    sum += std::pow(dx * dx + y1 * y1 + y2 * y2, -0.5 * lambda);
  }
  return sum / samples * (4.0 / 3.0) * pi * R * R * R;
}

// Oracle: E(B_R) in R^3 through the lens-volume representation
// E = 4 pi int_0^{2R} r^{2-lambda} V(r) dr, V(r) = pi (4R + r)(2R - r)^2 / 12,
// with r = u^8 to tame the endpoint singularity.
double ball_energy_lens_oracle(double R, double lambda) {
  const GaussRule& g = gauss_legendre(400);
  const double umax = std::pow(2.0 * R, 0.125);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double u = 0.5 * umax * (1.0 + g.nodes[i]);
    const double r = std::pow(u, 8);
    const double lens = pi * (4.0 * R + r) * (2.0 * R - r) * (2.0 * R - r) / 12.0;
    sum += 0.5 * umax * g.weights[i] * 4.0 * pi * std::pow(r, 2.0 - lambda) * lens * 8.0 * std::pow(u, 7);
  }
  return sum;
}

}  // namespace

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-15));
  CHECK(unit_ball_volume(4) == doctest::Approx(pi * pi / 2.0).epsilon(1e-15));
  CHECK_THROWS_AS(unit_ball_volume(0), Error);
  try {
    unit_ball_volume(0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_dimension);
  }
}

TEST_CASE("kernel validation and reflection-positive regime") {
  CHECK_THROWS_AS(Kernel(3, 3.0), Error);
  CHECK_THROWS_AS(Kernel(3, 0.0), Error);
  CHECK_THROWS_AS(Kernel(0, 0.5), Error);
  CHECK(Kernel(3, 1.0).reflection_positive());
  CHECK(Kernel(3, 2.5).reflection_positive());
  CHECK_FALSE(Kernel(3, 0.9).reflection_positive());
  CHECK_FALSE(Kernel(2, 0.5).reflection_positive());
  CHECK(Kernel(4, 2.0).reflection_positive());
  CHECK_FALSE(Kernel(4, 1.9).reflection_positive());
  CHECK(Kernel(3, 1.0).is_newton());
  CHECK(Kernel::newton(5).lambda() == 3.0);
}

TEST_CASE("Newton potential of the ball") {
  CHECK(newton_potential_ball(1, 0, 3) == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK(newton_potential_ball(1, 1, 3) == doctest::Approx(4 * pi / 3).epsilon(1e-15));
  CHECK(newton_potential_ball(1, 2, 3) == doctest::Approx(2 * pi / 3).epsilon(1e-15));
  CHECK_THROWS_AS(newton_potential_ball(1, 0, 2), Error);

  SUBCASE("branches agree at the sphere") {
    for (int n = 3; n <= 7; ++n) {
      for (double R : {0.3, 1.0, 2.7}) {
        const double below = newton_potential_ball(R, std::nextafter(R, 0.0), n);
        const double above = newton_potential_ball(R, std::nextafter(R, 10.0), n);
        CHECK(below == doctest::Approx(above).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("Newton energy of the ball") {
  const double e1 = 32 * pi * pi / 15;
  CHECK(newton_energy_ball(1, 3) == doctest::Approx(e1).epsilon(1e-15));
  CHECK(newton_energy_ball(2, 3) == doctest::Approx(32 * e1).epsilon(1e-14));
  CHECK(newton_energy_ball(1, 4) == doctest::Approx(std::pow(pi, 4) / 3).epsilon(1e-14));
  for (int n = 3; n <= 6; ++n) {
    for (double R : {0.5, 1.0, 1.9}) {
      const double via_center = 4.0 / (n + 2.0) * ball_volume(R, n) * newton_potential_ball(R, 0, n);
      CHECK(via_center == doctest::Approx(newton_energy_ball(R, n)).epsilon(1e-14));
    }
  }
  CHECK(ball_energy_lens_oracle(1.0, 1.0) == doctest::Approx(e1).epsilon(1e-10));
}

TEST_CASE("shell potential in three dimensions") {
  CHECK(shell_potential_3d(1, 0, 1) == doctest::Approx(4 * pi).epsilon(1e-15));
  CHECK(shell_potential_3d(1, 2, 1) == doctest::Approx(2 * pi).epsilon(1e-15));
  const double oracle = shell_potential_sphere_oracle(1.0, 0.5, 1.5);
  CHECK(shell_potential_3d(1, 0.5, 1.5) == doctest::Approx(oracle).epsilon(1e-8));
  CHECK(shell_potential_3d(1, 0.5, 2.0) ==
        doctest::Approx(shell_potential_sphere_oracle(1.0, 0.5, 2.0)).epsilon(1e-8));
  CHECK(shell_potential_3d(0.7, 1.9, 2.4) ==
        doctest::Approx(shell_potential_sphere_oracle(0.7, 1.9, 2.4)).epsilon(1e-8));
  CHECK_THROWS_AS(shell_potential_3d(1, 1, 2.0), Error);
  CHECK_THROWS_AS(shell_potential_3d(1, 1, 2.5), Error);
  CHECK(std::isfinite(shell_potential_3d(1, 1, 1.5)));
}

TEST_CASE("Riesz potential of the ball") {
  CHECK(ball_potential(1, 0, Kernel(3, 1)) == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK(ball_potential(1, 0, Kernel(4, 2)) == doctest::Approx(pi * pi).epsilon(1e-15));
  const double mc = ball_potential_monte_carlo(1.0, 1.7, 1.4, 4'000'000);
  CHECK(ball_potential(1, 1.7, Kernel(3, 1.4)) == doctest::Approx(mc).epsilon(1e-3));

  SUBCASE("closed forms agree with ray quadrature") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uR(0.2, 3.0), ut(0.0, 3.0);
    for (int i = 0; i < 100; ++i) {
      const double R = uR(rng);
      const double t = ut(rng) * R;
      for (int n : {3, 4, 5}) {
        const Kernel k = Kernel::newton(n);
        CHECK(newton_potential_ball(R, t, n) ==
              doctest::Approx(ball_potential_quadrature(R, t, k)).epsilon(1e-8));
      }
      for (double lambda : {0.5, 0.9, 1.1, 1.5, 2.0, 2.5}) {
        const Kernel k(3, lambda);
        CHECK(ball_potential(R, t, k) ==
              doctest::Approx(ball_potential_quadrature(R, t, k)).epsilon(1e-8));
      }
    }
  }

  SUBCASE("exact at the center, positive and non-increasing") {
    for (const Kernel& k : {Kernel(3, 1), Kernel(3, 1.4), Kernel(3, 2.0), Kernel(3, 2.7),
                            Kernel(4, 2), Kernel(4, 3.1), Kernel(2, 0.7), Kernel(1, 0.4)}) {
      const double R = 1.3;
      double prev = ball_potential(R, 0, k);
      CHECK(prev == ball_center_potential(R, k));
      for (int i = 1; i <= 400; ++i) {
        const double t = 0.01 * i;
        const double v = ball_potential(R, t, k);
        CHECK(v > 0.0);
        CHECK(v <= prev * (1 + 1e-12));
        prev = v;
      }
    }
  }
}

TEST_CASE("ball energy for general exponents") {
  CHECK(ball_energy(1.0, Kernel(3, 1)) == doctest::Approx(32 * pi * pi / 15).epsilon(1e-15));
  for (double lambda : {0.8, 1.2, 1.5, 2.0, 2.6}) {
    CHECK(ball_energy(1.0, Kernel(3, lambda)) ==
          doctest::Approx(ball_energy_lens_oracle(1.0, lambda)).epsilon(1e-8));
  }
  // scaling E(B_R) = R^{2n - lambda} E(B_1)
  CHECK(ball_energy(2.0, Kernel(3, 1.5)) ==
        doctest::Approx(std::pow(2.0, 4.5) * ball_energy(1.0, Kernel(3, 1.5))).epsilon(1e-9));
}
