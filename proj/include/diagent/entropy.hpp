#pragma once

#include <vector>

#include "diagent/gaussian_measure.hpp"
#include "diagent/model_kernel.hpp"

namespace diagent {

// Shannon entropy of the sigma^z outcome distribution, in bits. Entries
// below 1e-14 contribute nothing.
double diagonal_entropy(const DiagonalDistribution& dist);

// Symplectic spectrum of an antisymmetric Majorana matrix: the nu_k of the
// eigenvalue pairs +-i nu_k, ascending.
std::vector<double> symplectic_spectrum(const MajoranaMatrix& gamma_matrix);

// Von Neumann entropy of the block in bits, sum_k H2((1 + nu_k) / 2).
double entanglement_entropy(const MajoranaMatrix& gamma_matrix);

// Relative entropy of coherence.
inline double coherence(double de, double ee) { return de - ee; }

struct EntropyCurve {
  ModelParams params;
  std::vector<int> sizes;
  std::vector<double> de;
  std::vector<double> ee;
  std::vector<double> coherence;
};

struct CurveOptions {
  DistributionOptions distribution;
  // When false, ee and coherence stay empty.
  bool with_entanglement = true;
};

// L = 1..L_max from a single correlation table.
EntropyCurve entropy_curve(const ModelParams& params, int L_max,
                           const CurveOptions& options = {});
EntropyCurve entropy_curve(const CorrelationTable& table, int L_max,
                           const CurveOptions& options = {});

}  // namespace diagent
