#include "diagent/model_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "diagent/error.hpp"
#include "diagent/quadrature.hpp"

namespace diagent {

namespace {

constexpr double kPi = std::numbers::pi;

std::string describe(const ModelParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(gamma=" << p.gamma() << ", lambda=" << p.lambda() << ")";
  return os.str();
}

// (cos phi - lambda - i gamma sin phi) / |...|, with the one-sided limit at
// the isolated zeros that occur for |lambda| = 1.
std::complex<double> unit_phase(double gamma, double lambda, double phi) {
  const double a = std::cos(phi) - lambda;
  const double b = gamma * std::sin(phi);
  const double r = std::hypot(a, b);
  if (r == 0.0) {
    if (gamma == 0.0) return {lambda > 0.0 ? -1.0 : 1.0, 0.0};
    return {0.0, gamma > 0.0 ? -1.0 : 1.0};
  }
  return {a / r, -b / r};
}

std::vector<double> breakpoints_for(const ModelParams& p) {
  std::vector<double> pts{-kPi, 0.0, kPi};
  if (std::abs(p.lambda()) <= 1.0) {
    const double edge = std::acos(p.lambda());
    pts.push_back(edge);
    pts.push_back(-edge);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

ModelParams::ModelParams(double gamma, double lambda, double quad_tol)
    : gamma_(gamma), lambda_(lambda), quad_tol_(quad_tol) {
  if (!std::isfinite(gamma) || !std::isfinite(lambda))
    throw Error(ErrorKind::InvalidArgument,
                "gamma and lambda must be finite");
  if (!(quad_tol > 0.0) || !std::isfinite(quad_tol))
    throw Error(ErrorKind::InvalidArgument, "quad_tol must be positive");
}

std::complex<double> kernel_integral(const ModelParams& params, int l,
                                     bool reflected) {
  const double gamma = params.gamma();
  const double lambda = params.lambda();
  const double sign = reflected ? -1.0 : 1.0;
  const auto integrand = [=](double phi) {
    const double x = sign * phi;
    const std::complex<double> mode(std::cos(l * x), -std::sin(l * x));
    return mode * unit_phase(gamma, lambda, x) / (2.0 * kPi);
  };

  const auto pts = breakpoints_for(params);
  quadrature::AdaptiveOptions opts;
  opts.abs_tol = params.quad_tol();
  const auto res = quadrature::integrate_adaptive(integrand, pts, opts);
  if (!res.converged)
    throw Error(ErrorKind::QuadratureNonconvergence,
                "g_" + std::to_string(l) + " did not reach quad_tol at " +
                    describe(params) + " after " +
                    std::to_string(res.panels) + " panels",
                l);
  return res.value;
}

double compute_g(const ModelParams& params, int l) {
  const auto value = kernel_integral(params, l);
  if (std::abs(value.imag()) > 10.0 * params.quad_tol())
    throw Error(ErrorKind::QuadratureNonconvergence,
                "g_" + std::to_string(l) + " has imaginary residue " +
                    std::to_string(value.imag()) + " at " + describe(params),
                l);
  return value.real();
}

CorrelationTable::CorrelationTable(ModelParams params, int l_max,
                                   std::vector<double> g)
    : params_(params), l_max_(l_max), g_(std::move(g)) {
  if (l_max < 0 || g_.size() != static_cast<std::size_t>(2 * l_max + 1))
    throw Error(ErrorKind::InvalidArgument,
                "correlation table needs 2*l_max+1 entries");
}

double CorrelationTable::at(int l) const {
  if (l < -l_max_ || l > l_max_)
    throw Error(ErrorKind::TableTooSmall,
                "g_" + std::to_string(l) + " outside table with l_max=" +
                    std::to_string(l_max_),
                l);
  return g_[l + l_max_];
}

CorrelationTable build_table(const ModelParams& params, int l_max) {
  if (l_max < 1)
    throw Error(ErrorKind::InvalidArgument, "build_table: l_max must be >= 1");
  std::vector<double> g;
  g.reserve(2 * l_max + 1);
  for (int l = -l_max; l <= l_max; ++l) g.push_back(compute_g(params, l));
  return CorrelationTable(params, l_max, std::move(g));
}

MajoranaMatrix::MajoranaMatrix(Eigen::MatrixXd gamma_matrix)
    : gamma_matrix_(std::move(gamma_matrix)) {
  if (gamma_matrix_.rows() != gamma_matrix_.cols() ||
      gamma_matrix_.rows() % 2 != 0 || gamma_matrix_.rows() == 0)
    throw Error(ErrorKind::InvalidArgument,
                "Majorana matrix must be 2L x 2L with L >= 1");
}

MajoranaMatrix build_majorana_matrix(const CorrelationTable& table, int L) {
  if (L < 1) throw Error(ErrorKind::InvalidArgument, "block size must be >= 1");
  if (L > table.l_max() + 1)
    throw Error(ErrorKind::TableTooSmall,
                "block of " + std::to_string(L) +
                    " sites needs l_max >= " + std::to_string(L - 1),
                L);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * L, 2 * L);
  for (int row = 0; row < L; ++row) {
    for (int col = 0; col < L; ++col) {
      const int d = col - row;
      m(2 * row, 2 * col + 1) = table[d];
      m(2 * row + 1, 2 * col) = -table[-d];
    }
  }
  return MajoranaMatrix(std::move(m));
}

}  // namespace diagent
