#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace diagent::quadrature {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int order);

struct AdaptiveOptions {
  double abs_tol = 1e-12;
  int order = 20;
  std::size_t max_panels = 50000;
  // Panels narrower than this are accepted unconditionally; their error
  // estimate still counts against abs_tol.
  double min_width = 1e-13;
};

struct AdaptiveResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  std::size_t panels = 0;
  bool converged = false;
};

// Integrand of unit-mapped complex values: f(x) for x in [a, b].
using ComplexIntegrand = std::complex<double> (*)(double x, const void* ctx);

// Adaptive bisection over the intervals between consecutive breakpoints.
// A panel is accepted when the one-panel and two-half-panel rules agree to
// abs_tol * width / total_width.
AdaptiveResult integrate_adaptive(ComplexIntegrand f, const void* ctx,
                                  std::span<const double> breakpoints,
                                  const AdaptiveOptions& options);

template <class F>
AdaptiveResult integrate_adaptive(const F& f,
                                  std::span<const double> breakpoints,
                                  const AdaptiveOptions& options) {
  return integrate_adaptive(
      [](double x, const void* ctx) -> std::complex<double> {
        return (*static_cast<const F*>(ctx))(x);
      },
      &f, breakpoints, options);
}

}  // namespace diagent::quadrature
