#include "diagent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "diagent/error.hpp"

namespace diagent {

namespace {

constexpr double kZeroCutoff = 1e-14;
constexpr double kPairTol = 1e-8;
constexpr double kNuSlack = 1e-9;

double binary_entropy(double x) {
  double h = 0.0;
  if (x > kZeroCutoff) h -= x * std::log2(x);
  if (1.0 - x > kZeroCutoff) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

}  // namespace

double diagonal_entropy(const DiagonalDistribution& dist) {
  double h = 0.0;
  for (double p : dist.probabilities())
    if (p >= kZeroCutoff) h -= p * std::log2(p);
  return h;
}

std::vector<double> symplectic_spectrum(const MajoranaMatrix& gamma_matrix) {
  const Eigen::MatrixXd& m = gamma_matrix.matrix();
  const int n = static_cast<int>(m.rows());
  Eigen::RealSchur<Eigen::MatrixXd> schur(m, /*computeU=*/false);
  if (schur.info() != Eigen::Success)
    throw Error(ErrorKind::SpectrumInvalid, "real Schur did not converge");
  const Eigen::MatrixXd& t = schur.matrixT();

  std::vector<double> nu;
  std::vector<double> singles;
  double trace = 0.0;
  for (int i = 0; i < n;) {
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      // 2x2 block [[a, b], [c, d]] with eigenvalues a +- i sqrt(-bc) when a = d
      const double a = t(i, i);
      const double d = t(i + 1, i + 1);
      const double bc = t(i, i + 1) * t(i + 1, i);
      const double disc = 0.25 * (a - d) * (a - d) + bc;
      if (disc > kPairTol * kPairTol)
        throw Error(ErrorKind::SpectrumInvalid,
                    "Majorana matrix has a real eigenvalue pair");
      trace += a + d;
      nu.push_back(std::sqrt(std::max(0.0, -disc)));
      i += 2;
    } else {
      singles.push_back(t(i, i));
      trace += t(i, i);
      ++i;
    }
  }
  if (std::abs(trace) > kPairTol)
    throw Error(ErrorKind::SpectrumInvalid,
                "eigenvalues of the Majorana matrix do not sum to zero");
  // Real eigenvalues of an antisymmetric matrix are zeros; they pair up.
  if (singles.size() % 2 != 0)
    throw Error(ErrorKind::SpectrumInvalid, "unpaired real eigenvalue");
  for (double v : singles) {
    if (std::abs(v) > kPairTol)
      throw Error(ErrorKind::SpectrumInvalid,
                  "nonzero real eigenvalue " + std::to_string(v));
  }
  for (std::size_t i = 0; i < singles.size(); i += 2) nu.push_back(0.0);

  for (double& v : nu) {
    if (v > 1.0 + kNuSlack)
      throw Error(ErrorKind::SpectrumInvalid,
                  "symplectic eigenvalue " + std::to_string(v) + " above 1");
    v = std::min(v, 1.0);
  }
  std::sort(nu.begin(), nu.end());
  return nu;
}

double entanglement_entropy(const MajoranaMatrix& gamma_matrix) {
  double s = 0.0;
  for (double v : symplectic_spectrum(gamma_matrix))
    s += binary_entropy(0.5 * (1.0 + v));
  return s;
}

EntropyCurve entropy_curve(const CorrelationTable& table, int L_max,
                           const CurveOptions& options) {
  if (L_max < 1)
    throw Error(ErrorKind::InvalidArgument, "L_max must be >= 1");
  if (L_max > options.distribution.max_block)
    throw Error(ErrorKind::BlockTooLarge,
                "L_max " + std::to_string(L_max) + " exceeds cap " +
                    std::to_string(options.distribution.max_block),
                L_max);
  EntropyCurve curve{table.params(), {}, {}, {}, {}};
  for (int L = 1; L <= L_max; ++L) {
    const double de =
        diagonal_entropy(diag_distribution(table, L, options.distribution));
    curve.sizes.push_back(L);
    curve.de.push_back(de);
    if (!options.with_entanglement) continue;
    const double ee = entanglement_entropy(build_majorana_matrix(table, L));
    curve.ee.push_back(ee);
    curve.coherence.push_back(coherence(de, ee));
  }
  return curve;
}

EntropyCurve entropy_curve(const ModelParams& params, int L_max,
                           const CurveOptions& options) {
  if (L_max < 1)
    throw Error(ErrorKind::InvalidArgument, "L_max must be >= 1");
  return entropy_curve(build_table(params, std::max(1, L_max - 1)), L_max,
                       options);
}

}  // namespace diagent
