#include "diagent/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace diagent::quadrature {

GaussLegendreRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order < 1");
  GaussLegendreRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 1; i <= half; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double z = std::cos(std::numbers::pi * (i - 0.25) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = order * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.nodes[i - 1] = -z;
    rule.nodes[order - i] = z;
    rule.weights[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[order - i] = rule.weights[i - 1];
  }
  return rule;
}

namespace {

std::complex<double> apply_rule(const GaussLegendreRule& rule,
                                ComplexIntegrand f, const void* ctx, double a,
                                double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    sum += rule.weights[k] * f(mid + half * rule.nodes[k], ctx);
  return half * sum;
}

struct Panel {
  double a;
  double b;
  std::complex<double> estimate;
};

}  // namespace

AdaptiveResult integrate_adaptive(ComplexIntegrand f, const void* ctx,
                                  std::span<const double> breakpoints,
                                  const AdaptiveOptions& options) {
  if (breakpoints.size() < 2)
    throw std::invalid_argument("integrate_adaptive: need two breakpoints");
  const GaussLegendreRule rule = gauss_legendre(options.order);
  const double total = breakpoints.back() - breakpoints.front();

  AdaptiveResult result;
  result.converged = true;
  std::vector<Panel> stack;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (!(b > a)) continue;
    stack.push_back({a, b, apply_rule(rule, f, ctx, a, b)});
    ++result.panels;
  }

  while (!stack.empty()) {
    const Panel panel = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (panel.a + panel.b);
    const auto left = apply_rule(rule, f, ctx, panel.a, mid);
    const auto right = apply_rule(rule, f, ctx, mid, panel.b);
    result.panels += 2;
    const double err = std::abs(panel.estimate - (left + right));
    const double width = panel.b - panel.a;
    const double local_tol = options.abs_tol * width / total;
    if (err <= local_tol || width < options.min_width) {
      result.value += left + right;
      result.error_estimate += err;
      continue;
    }
    if (result.panels >= options.max_panels) {
      result.converged = false;
      result.value += left + right;
      result.error_estimate += err;
      continue;
    }
    stack.push_back({mid, panel.b, right});
    stack.push_back({panel.a, mid, left});
  }
  if (result.error_estimate > options.abs_tol) result.converged = false;
  return result;
}

}  // namespace diagent::quadrature
