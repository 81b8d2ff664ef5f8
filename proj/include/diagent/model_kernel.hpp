#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace diagent {

// Couplings of the XY chain in a transverse field plus the absolute
// tolerance used for every correlation-kernel integral.
class ModelParams {
 public:
  ModelParams(double gamma, double lambda, double quad_tol = 1e-12);

  double gamma() const noexcept { return gamma_; }
  double lambda() const noexcept { return lambda_; }
  double quad_tol() const noexcept { return quad_tol_; }

 private:
  double gamma_;
  double lambda_;
  double quad_tol_;
};

// Raw value of
//   (1/2pi) \int_{-pi}^{pi} e^{-il phi} (cos phi - lambda - i gamma sin phi)
//                          / |cos phi - lambda - i gamma sin phi| dphi
// before the imaginary part is discarded. With `reflected` the integrand is
// evaluated at -phi, which must give the same real part.
std::complex<double> kernel_integral(const ModelParams& params, int l,
                                     bool reflected = false);

// Real correlation kernel g_l. Throws QuadratureNonconvergence when the
// adaptive rule misses quad_tol or leaves an imaginary part above
// 10 * quad_tol.
double compute_g(const ModelParams& params, int l);

class CorrelationTable {
 public:
  CorrelationTable(ModelParams params, int l_max, std::vector<double> g);

  const ModelParams& params() const noexcept { return params_; }
  int l_max() const noexcept { return l_max_; }

  // g_l for -l_max <= l <= l_max; throws TableTooSmall outside.
  double at(int l) const;
  double operator[](int l) const noexcept { return g_[l + l_max_]; }

  // Entries ordered from l = -l_max to l = l_max.
  const std::vector<double>& values() const noexcept { return g_; }

 private:
  ModelParams params_;
  int l_max_;
  std::vector<double> g_;
};

// Evaluates g_l for every |l| <= l_max; g_l and g_{-l} are integrated
// separately. Nonconvergence is rethrown with the failing l as index().
CorrelationTable build_table(const ModelParams& params, int l_max);

// 2L x 2L Majorana correlation matrix: block (m, n) is
//   Pi_{n-m} = [[0, g_{n-m}], [-g_{m-n}, 0]].
class MajoranaMatrix {
 public:
  explicit MajoranaMatrix(Eigen::MatrixXd gamma_matrix);

  int size() const noexcept {
    return static_cast<int>(gamma_matrix_.rows() / 2);
  }
  const Eigen::MatrixXd& matrix() const noexcept { return gamma_matrix_; }

 private:
  Eigen::MatrixXd gamma_matrix_;
};

MajoranaMatrix build_majorana_matrix(const CorrelationTable& table, int L);

}  // namespace diagent
