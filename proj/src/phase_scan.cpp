#include "diagent/phase_scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "diagent/entropy.hpp"
#include "diagent/error.hpp"

namespace diagent {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_grid(double lo, double hi, int steps) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
    throw Error(ErrorKind::InvalidArgument, "lambda range needs lo < hi");
  if (steps < 8)
    throw Error(ErrorKind::InvalidArgument, "sweep needs at least 8 steps");
}

std::vector<double> uniform_grid(double lo, double hi, int steps) {
  std::vector<double> grid(steps);
  const double h = (hi - lo) / (steps - 1);
  for (int i = 0; i < steps; ++i) grid[i] = lo + i * h;
  grid.back() = hi;
  return grid;
}

struct PointOutcome {
  ScalingFit fit;
  bool ok = false;
  std::string failure;
};

PointOutcome evaluate(double gamma, double lambda, const ScanOptions& options) {
  PointOutcome out;
  try {
    out.fit = fit_point(gamma, lambda, options);
    out.ok = true;
  } catch (const Error& e) {
    std::ostringstream os;
    os.precision(17);
    os << "gamma=" << gamma << " lambda=" << lambda << ": "
       << to_string(e.kind()) << ": " << e.what();
    out.failure = os.str();
  }
  return out;
}

SweepResult assemble(double gamma, const std::vector<double>& grid,
                     std::span<const PointOutcome> points) {
  SweepResult r;
  r.gamma = gamma;
  r.lambda = grid;
  r.step = (grid.back() - grid.front()) / (grid.size() - 1);
  for (const auto& p : points) {
    r.ok.push_back(p.ok);
    r.a.push_back(p.ok ? p.fit.a : kNaN);
    r.b.push_back(p.ok ? p.fit.b : kNaN);
    r.c.push_back(p.ok ? p.fit.c : kNaN);
    r.rms.push_back(p.ok ? p.fit.rms_residual : kNaN);
    if (!p.ok) r.failures.push_back(p.failure);
  }
  r.da = grid_derivative(r.a, r.ok, r.step);
  r.db = grid_derivative(r.b, r.ok, r.step);
  r.dc = grid_derivative(r.c, r.ok, r.step);
  return r;
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body) {
  const auto workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(resolve_threads(threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = n;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (i < error_index) {
              error_index = i;
              error = std::current_exception();
            }
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

ScalingFit fit_point(double gamma, double lambda, const ScanOptions& options) {
  const ModelParams params(gamma, lambda, options.quad_tol);
  CurveOptions curve_options;
  curve_options.distribution = options.distribution;
  curve_options.with_entanglement = false;
  const EntropyCurve curve = entropy_curve(params, options.L_max, curve_options);
  return fit_scaling(curve.sizes, curve.de, {options.L_min, options.L_max});
}

std::vector<double> grid_derivative(std::span<const double> values,
                                    const std::vector<bool>& ok, double step) {
  const std::size_t n = values.size();
  std::vector<double> d(n, kNaN);
  const auto valid = [&](std::size_t i) { return i < n && ok[i]; };
  for (std::size_t i = 0; i < n; ++i) {
    if (!valid(i)) continue;
    const bool left = i > 0 && valid(i - 1);
    const bool right = valid(i + 1);
    if (left && right)
      d[i] = (values[i + 1] - values[i - 1]) / (2.0 * step);
    else if (right)
      d[i] = (values[i + 1] - values[i]) / step;
    else if (left)
      d[i] = (values[i] - values[i - 1]) / step;
  }
  return d;
}

SweepResult sweep(double gamma, double lo, double hi, int steps,
                  const ScanOptions& options) {
  const double g[] = {gamma};
  return std::move(grid_scan(g, lo, hi, steps, options).front());
}

SweepResult ising_scan(double lo, double hi, int steps,
                       const ScanOptions& options) {
  return sweep(1.0, lo, hi, steps, options);
}

std::vector<SweepResult> grid_scan(std::span<const double> gammas, double lo,
                                   double hi, int steps,
                                   const ScanOptions& options) {
  if (gammas.empty())
    throw Error(ErrorKind::InvalidArgument, "grid scan needs at least one gamma");
  check_grid(lo, hi, steps);
  if (options.L_max > options.distribution.max_block)
    throw Error(ErrorKind::BlockTooLarge, "L_max exceeds the block cap",
                options.L_max);

  std::vector<double> order(gammas.begin(), gammas.end());
  std::stable_sort(order.begin(), order.end());
  const auto grid = uniform_grid(lo, hi, steps);
  const std::size_t per_gamma = grid.size();
  std::vector<PointOutcome> points(order.size() * per_gamma);
  parallel_for(points.size(), options.threads, [&](std::size_t i) {
    points[i] = evaluate(order[i / per_gamma], grid[i % per_gamma], options);
  });

  std::vector<SweepResult> out;
  out.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k)
    out.push_back(assemble(
        order[k], grid,
        std::span<const PointOutcome>(points).subspan(k * per_gamma, per_gamma)));
  return out;
}

BoundaryPoint find_boundary(double gamma, const BoundaryOptions& options) {
  // Coefficients within this of zero are treated as rounding, not sign.
  constexpr double kSignFloor = 1e-9;
  if (!(gamma > 0.0) || gamma > 1.0)
    throw Error(ErrorKind::InvalidArgument, "find_boundary needs 0 < gamma <= 1");
  if (options.lo < 0.0 || !(options.hi > options.lo) || options.hi >= 1.0)
    throw Error(ErrorKind::InvalidArgument,
                "boundary search range must lie in [0, 1)");
  if (options.coarse_steps < 3)
    throw Error(ErrorKind::InvalidArgument, "need at least 3 coarse steps");

  const auto c_at = [&](double lambda) {
    return fit_point(gamma, lambda, options.scan).c;
  };

  const auto grid = uniform_grid(options.lo, options.hi, options.coarse_steps);
  std::vector<double> c(grid.size());
  parallel_for(grid.size(), options.scan.threads,
               [&](std::size_t i) { c[i] = c_at(grid[i]); });

  BoundaryPoint bp;
  bp.gamma = gamma;
  bool found = false;

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const bool crosses = (c[i] < -kSignFloor && c[i + 1] > kSignFloor) ||
                         (c[i] > kSignFloor && c[i + 1] < -kSignFloor);
    if (!crosses) continue;
    double lo = grid[i], hi = grid[i + 1];
    double c_lo = c[i];
    while (hi - lo > options.lambda_tol) {
      const double mid = 0.5 * (lo + hi);
      const double c_mid = c_at(mid);
      if ((c_mid < 0.0) == (c_lo < 0.0)) {
        lo = mid;
        c_lo = c_mid;
      } else {
        hi = mid;
      }
    }
    bp.kind = RootKind::SignChange;
    bp.lambda_lo = lo;
    bp.lambda_hi = hi;
    bp.lambda_star = 0.5 * (lo + hi);
    bp.residual_c = c_at(bp.lambda_star);
    found = true;
    break;
  }

  if (!found) {
    // No transversal crossing: c vanishes at a minimum. Bisect on the sign
    // of the symmetric difference of c around the smallest grid value.
    const auto best = static_cast<std::size_t>(
        std::min_element(c.begin(), c.end(),
                         [](double x, double y) {
                           return std::abs(x) < std::abs(y);
                         }) -
        c.begin());
    double lo = grid[best == 0 ? 0 : best - 1];
    double hi = grid[std::min(best + 1, grid.size() - 1)];
    const double delta = 0.1 * options.lambda_tol;
    while (hi - lo > options.lambda_tol) {
      const double mid = 0.5 * (lo + hi);
      const double slope = c_at(mid + delta) - c_at(mid - delta);
      if (slope > 0.0)
        hi = mid;
      else
        lo = mid;
    }
    bp.kind = RootKind::Touching;
    bp.lambda_lo = lo;
    bp.lambda_hi = hi;
    bp.lambda_star = 0.5 * (lo + hi);
    bp.residual_c = c_at(bp.lambda_star);
  }

  if (!(std::abs(bp.residual_c) < options.residual_tol)) {
    std::ostringstream os;
    os.precision(6);
    os << "c(lambda) has no zero in [" << options.lo << ", " << options.hi
       << "] at gamma=" << gamma << " (closest |c|=" << std::abs(bp.residual_c)
       << " at lambda=" << bp.lambda_star << ")";
    throw Error(ErrorKind::NoSignChange, os.str());
  }
  return bp;
}

}  // namespace diagent
