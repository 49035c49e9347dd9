#include "riesz/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace riesz {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::invalid_dimension: return "invalid-dimension";
    case Errc::unsupported_dimension: return "unsupported-dimension";
    case Errc::invalid_kernel: return "invalid-kernel";
    case Errc::singular: return "singular";
    case Errc::non_convergence: return "non-convergence";
    case Errc::precondition: return "precondition";
    case Errc::infeasible: return "infeasible";
    case Errc::resource: return "resource";
    case Errc::io: return "io";
  }
  return "unknown";
}

namespace {

GaussRule build_rule(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 1) throw Error(Errc::invalid_argument, "Gauss order must be >= 1");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussRule>(build_rule(order));
  return *slot;
}

std::vector<double> graded_breaks(double a, double b, bool refine_left, bool refine_right,
                                  int levels) {
  std::vector<double> out{a};
  if (!(b > a)) {
    out.push_back(b);
    return out;
  }
  const double len = b - a;
  if (refine_left && refine_right) {
    const double mid = a + 0.5 * len;
    for (int k = levels; k >= 1; --k) out.push_back(a + 0.5 * len * std::ldexp(1.0, -k));
    out.push_back(mid);
    for (int k = 1; k <= levels; ++k) out.push_back(b - 0.5 * len * std::ldexp(1.0, -k));
  } else if (refine_left) {
    for (int k = levels; k >= 1; --k) out.push_back(a + len * std::ldexp(1.0, -k));
  } else if (refine_right) {
    for (int k = 1; k <= levels; ++k) out.push_back(b - len * std::ldexp(1.0, -k));
  }
  out.push_back(b);
  return out;
}

}  // namespace riesz
