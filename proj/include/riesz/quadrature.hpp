#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "riesz/error.hpp"

namespace riesz {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (thread safe).
const GaussRule& gauss_legendre(int order);

/// Compensated (Neumaier) accumulator. Summation order is the call order.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Accumulator& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <class F>
double gauss_panel(const GaussRule& rule, F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Accumulator acc;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * acc.value();
}

/// Sum of `panels` equal Gauss panels on every interval [breaks[k], breaks[k+1]].
template <class F>
double composite_gauss(F&& f, std::span<const double> breaks, int panels, const GaussRule& rule) {
  Accumulator acc;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k];
    const double b = breaks[k + 1];
    if (!(b > a)) continue;
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      acc += gauss_panel(rule, f, a + p * w, p + 1 == panels ? b : a + (p + 1) * w);
    }
  }
  return acc.value();
}

struct QuadratureOptions {
  int order = 64;
  int initial_panels = 1;
  int max_panels = 256;
  double rel_tol = 1e-10;
  double abs_floor = 1e-300;
};

struct QuadratureResult {
  double value = 0.0;
  double rel_change = 0.0;
  int panels = 0;
};

/// Composite Gauss-Legendre with the panel count doubled until two successive
/// estimates agree to `rel_tol`. Throws Errc::non_convergence with the last
/// change as residual estimate.
template <class F>
QuadratureResult integrate_doubling(F&& f, std::span<const double> breaks,
                                    const QuadratureOptions& opt = {}) {
  const GaussRule& rule = gauss_legendre(opt.order);
  int panels = opt.initial_panels;
  double prev = composite_gauss(f, breaks, panels, rule);
  while (panels < opt.max_panels) {
    panels *= 2;
    const double cur = composite_gauss(f, breaks, panels, rule);
    const double scale = std::max(std::abs(cur), opt.abs_floor);
    const double change = std::abs(cur - prev) / scale;
    if (change <= opt.rel_tol) return {cur, change, panels};
    prev = cur;
  }
  const double last = composite_gauss(f, breaks, panels, rule);
  const double change = std::abs(last - prev) / std::max(std::abs(last), opt.abs_floor);
  if (change <= opt.rel_tol) return {last, change, panels};
  throw Error(Errc::non_convergence,
              "quadrature did not converge, residual estimate " + std::to_string(change));
}

/// Breakpoints on [a, b] refined geometrically towards the flagged ends,
/// for integrands with endpoint singularities or thin boundary layers.
std::vector<double> graded_breaks(double a, double b, bool refine_left, bool refine_right,
                                  int levels = 24);

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a maximum of a unimodal function on [a, b].
template <class F>
ScalarOptimum golden_section_max(F&& f, double a, double b, double x_tol, int max_iter = 200) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  return fc >= fd ? ScalarOptimum{c, fc, evals} : ScalarOptimum{d, fd, evals};
}

/// Tensor-product Gauss rule over the unit cube [0,1]^dim, `panels` panels per axis.
template <class F>
double unit_cube_gauss(F&& f, int dim, int order, int panels) {
  const GaussRule& rule = gauss_legendre(order);
  std::vector<double> x1;
  std::vector<double> w1;
  for (int p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels;
    const double half = 0.5 / panels;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      x1.push_back(a + half * (1.0 + rule.nodes[i]));
      w1.push_back(half * rule.weights[i]);
    }
  }
  if (dim == 0) {
    std::vector<double> none;
    return f(std::span<const double>(none));
  }
  const std::size_t m = x1.size();
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> point(dim, x1[0]);
  Accumulator acc;
  while (true) {
    double w = 1.0;
    for (int k = 0; k < dim; ++k) {
      point[k] = x1[idx[k]];
      w *= w1[idx[k]];
    }
    acc += w * f(std::span<const double>(point));
    int k = 0;
    while (k < dim && ++idx[k] == m) {
      idx[k] = 0;
      ++k;
    }
    if (k == dim) break;
  }
  return acc.value();
}

}  // namespace riesz
