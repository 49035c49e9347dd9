#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riesz/asymmetry.hpp"
#include "riesz/kernel.hpp"
#include "riesz/potential.hpp"
#include "riesz/radial.hpp"
#include "riesz/symmetrize.hpp"
#include "riesz/voxel.hpp"

namespace riesz {

enum class Status { pass, fail, inconclusive };

const char* to_string(Status s);

/// Every check is phrased as lhs >= rhs; margin = lhs - rhs.
struct StabilityReport {
  std::string check;
  Kernel kernel{3, 1.0};
  std::string set;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  std::vector<int> shape{};
  double spacing = 0.0;
  bool pass = false;  ///< margin >= -tolerance
  Status status = Status::fail;
  std::map<std::string, double> values{};  ///< auxiliary quantities
  std::string note{};
};

/// Fills margin, pass and status (inconclusive when `inconclusive` is set).
void finalize(StabilityReport& r, bool inconclusive = false);

/// Discretization tolerances, each K * h / R_A times a natural scale.
struct Tolerances {
  double deficit = 0.05;      ///< absolute on δ
  double potential = 0.1;     ///< relative to Φ_{A*}(0)
  double energy = 0.02;       ///< relative to the energies compared
  double alpha_floor = 1.0;   ///< α below K h / R_A is indistinguishable from a ball
  double sharp3_floor = 1e-3; ///< smallest accepted δ/α²
  double poisson = 0.05;      ///< relative residual allowed by the Poisson check
  double truncation_alpha = 0.35;  ///< largest α0 for which truncation is attempted
  double scale = 1.0;         ///< multiplies every K (the --tol flag)

  double resolution(const VoxelSet& set) const;  ///< h / R_A
};

struct SuiteOptions {
  Tolerances tol;
  int subsamples = 4;
  EngineOptions engine;
};

struct Deficit {
  double value = 0.0;  ///< max(raw, 0)
  double raw = 0.0;
  double energy_set = 0.0;
  double energy_ball = 0.0;
  bool clamped = false;
};

/// δ(A) = (E(A*) - E(A)) / E(A*) with E(A*) exact at R_A and E(A) on the grid.
Deficit deficit(const VoxelSet& set, const Kernel& kernel, const EngineOptions& opt = {});

/// α and δ of one set, shared by several checks.
struct Measures {
  FraenkelResult fraenkel;
  Deficit deficit;
};

Measures measure(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt = {});

/// Constant of the main bound: (n - 2) 2^{n/2} / n^{2 + n/2}.
double theorem_main_constant(int n);

/// 1 - lambda (n - lambda) α² / n².
double lemma_max_factor(const Kernel& kernel, double alpha);

/// δ/α² >= floor (n = 3, lambda = 1).
StabilityReport check_theorem_sharp3(const VoxelSet& set, const SuiteOptions& opt = {});
StabilityReport check_theorem_sharp3(const VoxelSet& set, const Measures& m, const SuiteOptions& opt = {});

/// δ >= c_n α^{n+2} for the Newton kernel.
StabilityReport check_theorem_main(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt = {});
StabilityReport check_theorem_main(const VoxelSet& set, const Kernel& kernel, const Measures& m,
                                   const SuiteOptions& opt = {});

/// Φ_{A*}(0) (1 - lambda (n - lambda) α² / n²) >= sup Φ_A.
StabilityReport check_lemma_max(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt = {});
StabilityReport check_lemma_max(const VoxelSet& set, const Kernel& kernel, const Measures& m,
                                const SuiteOptions& opt = {});

/// Φ_{B_r}(x) - (√2 r)^{-lambda} Vol(B_r \ A) >= Φ_A(x) for boundary cells of
/// B_r. A must be origin symmetric and inside B_r. Without `r` the smallest
/// ball containing every cell is used.
StabilityReport check_lemma_key3(const VoxelSet& set, const Kernel& kernel, std::optional<double> r = {},
                                 const SuiteOptions& opt = {});

struct Key3Expansion {
  std::vector<double> eps;
  std::vector<double> bound_gap;     ///< Φ_{A*}(R_A) - [Φ_{B_r}(r) - (√2 r)^{-lambda} Vol(B_r \ A)]
  std::vector<double> measured_gap;  ///< Φ_{A*}(R_A) - sup Φ_A on ∂B_r
  double slope = 0.0;       ///< of bound_gap at eps -> 0, two-point fit
  double predicted = 0.0;   ///< omega_n (-2 + n 2^{1-n/2}) R_A^{n-lambda} for lambda = n - 2
};

/// Boundary expansion of the key-3 bound at r = R_A (1 + eps).
Key3Expansion key3_expansion(const VoxelSet& set, const Kernel& kernel, const std::vector<double>& eps,
                             const SuiteOptions& opt = {});

/// E(A+) + E(A-) >= 2 E(A) for the symmetrization orthogonal to `axis`.
/// Also records δ(A+) + δ(A-) against 2 δ(A).
StabilityReport check_reflection_positivity(const VoxelSet& set, int axis, const Kernel& kernel,
                                            const SuiteOptions& opt = {});

/// 2^n δ(A) >= δ(Ã) for the full symmetrization of fmp_symmetrize.
StabilityReport check_fmp_deficit(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt = {});
/// Same with the symmetrization already computed.
StabilityReport check_fmp_deficit(const VoxelSet& set, const Kernel& kernel, const FmpResult& f,
                                  const SuiteOptions& opt = {});

/// Φ_{A*}(ρ_k) >= (Φ_A)^*_k at every distance rank k, ρ_k the radius of the
/// ball holding k + 1/2 cells. Newton kernel only.
StabilityReport check_talenti(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt = {});

/// ∫ Φ_{A*} >= ∫ (Φ_A)^* over the grid.
StabilityReport check_talenti_integrated(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt = {});

/// ∫_{E*} Φ_{A*} >= ∫_E Φ_A, the right side by exact ball potentials.
StabilityReport check_domination(const VoxelSet& set, const VoxelSet& other, const Kernel& kernel,
                                 const SuiteOptions& opt = {});

/// Middle term of the alpha-YG sandwich: quadratic distance >= 0, with the
/// ratios to α⁴ and α^{2 - lambda/n} recorded.
StabilityReport check_alpha_yg(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt = {});
StabilityReport check_alpha_yg(const VoxelSet& set, const Kernel& kernel, const Measures& m,
                               const SuiteOptions& opt = {});

/// δ(A) >= δ(Ã) for the tail truncation with constant c, the set first
/// shifted so that its Fraenkel center is the origin.
StabilityReport check_truncation(const VoxelSet& set, const Kernel& kernel, double c, const SuiteOptions& opt = {});
StabilityReport check_truncation(const VoxelSet& set, const Kernel& kernel, double c, const Measures& m,
                                 const SuiteOptions& opt = {});

/// Relative Poisson residual of the voxel potential below the threshold.
StabilityReport check_poisson(const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt = {});

/// δ >= c_n α^{n+2} for a radial set by quadrature (any n >= 3, Newton kernel).
StabilityReport check_theorem_main_radial(const RadialSet& set, const Kernel& kernel);

/// A copy of the set on a grid shifted so that `point` becomes the origin.
VoxelSet recenter(const VoxelSet& set, const std::vector<double>& point);

struct SweepPoint {
  double param = 0.0;
  double alpha = 0.0;
  double delta = 0.0;
  double ratio_quadratic = 0.0;     ///< δ/α²
  double ratio_theorem_main = 0.0;  ///< δ/α^{n+2}
  double middle_yg = 0.0;           ///< quadratic distance, NaN when not computed
};

struct FamilySweep {
  std::string family;
  Kernel kernel{3, 1.0};
  std::vector<SweepPoint> points;
  double slope = 0.0;  ///< least squares of log δ against log α
  double intercept = 0.0;
  std::size_t fitted = 0;  ///< points used by the fit
};

/// Least-squares fit over the points with α > alpha_floor and δ > 0; at least 4 needed.
FamilySweep fit_exponent(std::string family, const Kernel& kernel, std::vector<SweepPoint> points,
                         double alpha_floor = 0.0);

SweepPoint radial_point(double param, const RadialSet& set, const Kernel& kernel);
SweepPoint voxel_point(double param, const VoxelSet& set, const Kernel& kernel, const SuiteOptions& opt = {},
                       bool with_middle = true);

/// Radial annulus family, exact quadrature.
FamilySweep sweep_annulus(const std::vector<double>& a, const Kernel& kernel);
/// Volume-preserving ellipsoids with semi-axes (s, 1, 1/s), s = 1 + e.
FamilySweep sweep_ellipsoid(const std::vector<double>& e, const Kernel& kernel, int cells,
                            const SuiteOptions& opt = {});
/// Two balls of radius 0.6 at the given center separations.
FamilySweep sweep_two_balls(const std::vector<double>& separation, const Kernel& kernel, int cells,
                            const SuiteOptions& opt = {});
/// Fixed annulus, lambda varied (n = 3); no exponent fit.
FamilySweep sweep_lambda(const std::vector<double>& lambda, double a);

}  // namespace riesz
