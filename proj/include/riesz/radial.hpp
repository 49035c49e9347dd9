#pragma once

#include <span>
#include <vector>

#include "riesz/kernel.hpp"

namespace riesz {

/// Half-open radial interval [inner, outer).
struct Shell {
  double inner;
  double outer;
  friend bool operator==(const Shell&, const Shell&) = default;
};

/// Centered radial set: a finite union of disjoint concentric shells in R^n.
/// Shells are sorted, non-degenerate and pairwise disjoint; volume is positive.
class RadialSet {
 public:
  RadialSet(int n, std::vector<Shell> shells);

  static RadialSet ball(double radius, int n);

  int n() const { return n_; }
  std::span<const Shell> shells() const { return shells_; }
  double volume() const;
  double volume_radius() const;
  double outer_radius() const { return shells_.back().outer; }

  /// A ∩ B_r as a raw shell list (may be empty).
  std::vector<Shell> truncated(double r) const;

  friend bool operator==(const RadialSet&, const RadialSet&) = default;

 private:
  int n_;
  std::vector<Shell> shells_;
};

double radial_volume(const RadialSet& set);

/// Volume radius of A ∩ B_r, closed form from the shell boundaries.
double truncated_volume_radius(const RadialSet& set, double r);

double radial_potential(const RadialSet& set, double t, const Kernel& kernel);

/// E(A) = ∫_A Phi_A by radial quadrature over the shells.
double radial_energy(const RadialSet& set, const Kernel& kernel);

/// E(A ∩ B_R) + 2 ∫_R^∞ σ(A ∩ ∂B_r) Phi_{A ∩ B_r}(r) dr. Equals radial_energy.
double energy_via_shell_split(const RadialSet& set, double split_radius, const Kernel& kernel);

/// Unit ball with the annulus [(1-a)^{1/n}, 1) moved to [1, (1+a)^{1/n}).
RadialSet annulus_perturbation(double a, int n = 3);

/// Vol(A ∩ B(c e, R)) for a ball of radius R whose center is at distance c.
double radial_overlap(const RadialSet& set, double offset, double radius);

struct RadialAsymmetry {
  double alpha = 0.0;
  double offset = 0.0;          ///< optimal distance of the ball center from the origin
  double overlap = 0.0;
  bool centered_optimal = true;  ///< dense scan found its maximum at offset 0
};

/// Fraenkel asymmetry of a centered radial set: 1 - max_c overlap / Vol.
RadialAsymmetry radial_asymmetry(const RadialSet& set);

/// δ(A) = (E(A*) - E(A)) / E(A*), both energies by the same radial quadrature.
double deficit_radial(const RadialSet& set, const Kernel& kernel);

}  // namespace riesz
