#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "diagent/gaussian_measure.hpp"
#include "diagent/scaling_fit.hpp"

namespace diagent {

struct ScanOptions {
  int L_min = 1;
  int L_max = 14;
  double quad_tol = 1e-12;
  // 0 picks std::thread::hardware_concurrency().
  int threads = 0;
  DistributionOptions distribution;
};

// Diagonal-entropy scaling fit at one (gamma, lambda) point.
ScalingFit fit_point(double gamma, double lambda, const ScanOptions& options);

struct SweepResult {
  double gamma = 0.0;
  double step = 0.0;
  std::vector<double> lambda;
  std::vector<double> a, b, c;
  std::vector<double> da, db, dc;
  std::vector<double> rms;
  // false where the point failed; its coefficients are NaN.
  std::vector<bool> ok;
  std::vector<std::string> failures;
};

// Finite differences on a uniform grid: central where both neighbours are
// valid, one-sided against whichever neighbour is valid otherwise, NaN for
// an isolated or failed point.
std::vector<double> grid_derivative(std::span<const double> values,
                                    const std::vector<bool>& ok, double step);

// `steps` grid points spanning [lo, hi] inclusive.
SweepResult sweep(double gamma, double lo, double hi, int steps,
                  const ScanOptions& options = {});

// Transverse-field Ising chain: sweep at gamma = 1.
SweepResult ising_scan(double lo, double hi, int steps,
                       const ScanOptions& options = {});

// One sweep per gamma, all points evaluated from one shared work pool.
// Results are ordered by ascending gamma.
std::vector<SweepResult> grid_scan(std::span<const double> gammas, double lo,
                                   double hi, int steps,
                                   const ScanOptions& options = {});

enum class RootKind {
  SignChange,  // c changes sign across the bracket
  Touching,    // c touches zero at a minimum; the bracket holds a sign change of dc/dlambda
};

struct BoundaryPoint {
  double gamma = 0.0;
  double lambda_star = 0.0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double residual_c = 0.0;
  RootKind kind = RootKind::SignChange;
};

struct BoundaryOptions {
  ScanOptions scan{.L_max = 12, .distribution = {}};
  double lo = 0.0;
  double hi = 0.995;
  int coarse_steps = 100;
  double lambda_tol = 1e-4;
  double residual_tol = 1e-3;
};

// Zero of the fitted constant c(lambda) inside the ferromagnetic region.
// Throws NoSignChange when no point with |c| < residual_tol exists.
BoundaryPoint find_boundary(double gamma, const BoundaryOptions& options = {});

// Runs `body(i)` for i in [0, n) on `threads` workers. Each index is handled
// exactly once; exceptions escape from the first failing index.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body);

int resolve_threads(int requested);

}  // namespace diagent
