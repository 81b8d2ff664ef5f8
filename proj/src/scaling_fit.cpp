#include "diagent/scaling_fit.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "diagent/error.hpp"

namespace diagent {

namespace {

struct Selection {
  std::vector<int> sizes;
  std::vector<double> values;
};

Selection select(std::span<const int> sizes, std::span<const double> values,
                 FitRange range, std::size_t min_points) {
  if (sizes.size() != values.size())
    throw Error(ErrorKind::InvalidArgument,
                "sizes and values must have equal length");
  if (range.L_min < 1 || range.L_max < range.L_min)
    throw Error(ErrorKind::InvalidArgument, "fit range must satisfy 1 <= L_min <= L_max");
  Selection sel;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < range.L_min || sizes[i] > range.L_max) continue;
    if (!std::isfinite(values[i]))
      throw Error(ErrorKind::InvalidArgument,
                  "non-finite entropy at L=" + std::to_string(sizes[i]),
                  sizes[i]);
    sel.sizes.push_back(sizes[i]);
    sel.values.push_back(values[i]);
  }
  if (sel.sizes.size() < min_points)
    throw Error(ErrorKind::InvalidArgument,
                "fit range holds " + std::to_string(sel.sizes.size()) +
                    " points, need at least " + std::to_string(min_points));
  return sel;
}

Eigen::VectorXd solve_qr(const Eigen::MatrixXd& design,
                         const Eigen::VectorXd& rhs) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < design.cols())
    throw Error(ErrorKind::RankDeficient,
                "design matrix has rank " + std::to_string(qr.rank()) +
                    " < " + std::to_string(design.cols()));
  return qr.solve(rhs);
}

}  // namespace

double ScalingFit::predict(int L) const {
  return a * L + b * std::log2(static_cast<double>(L)) + c;
}

ScalingFit fit_scaling(std::span<const int> sizes,
                       std::span<const double> values, FitRange range) {
  const Selection sel = select(sizes, values, range, 4);
  const auto n = static_cast<Eigen::Index>(sel.sizes.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double L = sel.sizes[i];
    design(i, 0) = L;
    design(i, 1) = std::log2(L);
    design(i, 2) = 1.0;
    rhs(i) = sel.values[i];
  }
  const Eigen::VectorXd x = solve_qr(design, rhs);
  ScalingFit fit;
  fit.a = x(0);
  fit.b = x(1);
  fit.c = x(2);
  fit.rms_residual = std::sqrt((design * x - rhs).squaredNorm() / n);
  fit.fit_range = range;
  return fit;
}

std::vector<Residual> fit_report(const ScalingFit& fit,
                                 std::span<const int> sizes,
                                 std::span<const double> values) {
  const Selection sel = select(sizes, values, fit.fit_range, 1);
  std::vector<Residual> out;
  out.reserve(sel.sizes.size());
  for (std::size_t i = 0; i < sel.sizes.size(); ++i) {
    const double model = fit.predict(sel.sizes[i]);
    out.push_back({sel.sizes[i], sel.values[i], model, sel.values[i] - model});
  }
  return out;
}

LogFit fit_log_scaling(std::span<const int> sizes,
                       std::span<const double> values, FitRange range) {
  const Selection sel = select(sizes, values, range, 3);
  const auto n = static_cast<Eigen::Index>(sel.sizes.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = std::log2(static_cast<double>(sel.sizes[i]));
    design(i, 1) = 1.0;
    rhs(i) = sel.values[i];
  }
  const Eigen::VectorXd x = solve_qr(design, rhs);
  LogFit fit;
  fit.slope = x(0);
  fit.offset = x(1);
  fit.rms_residual = std::sqrt((design * x - rhs).squaredNorm() / n);
  fit.fit_range = range;
  return fit;
}

}  // namespace diagent
