#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "diagent/model_kernel.hpp"

namespace diagent {

// L x L Toeplitz matrix with entry (j, k) = g_{k-j}. Its principal minors
// are the multi-site sigma^z correlators.
class ZCorrelationMatrix {
 public:
  ZCorrelationMatrix(const CorrelationTable& table, int L);

  int size() const noexcept { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }

 private:
  Eigen::MatrixXd entries_;
};

// Probabilities of sigma^z outcome strings on an L-site block. Bit b of the
// index holds site b+1; a clear bit is s = +1, a set bit s = -1.
class DiagonalDistribution {
 public:
  DiagonalDistribution(int L, std::vector<double> p);

  int size() const noexcept { return L_; }
  std::span<const double> probabilities() const noexcept { return p_; }
  double operator[](std::uint32_t s) const noexcept { return p_[s]; }
  double total() const noexcept;

 private:
  int L_;
  std::vector<double> p_;
};

// Index of the spin string read back to front.
std::uint32_t reverse_string(std::uint32_t s, int L) noexcept;

// Determinant by LU with partial pivoting.
double lu_determinant(Eigen::MatrixXd a);

// <prod_{l in sites} sigma^z_l> as the principal minor of the z-correlation
// matrix. Sites are 1-based, strictly increasing and at most L.
double z_correlator(const CorrelationTable& table, std::span<const int> sites,
                    int L);

enum class EnumerationMethod {
  FullLU,    // one LU per string
  GrayCode,  // rank-1 determinant updates along a Gray code
};

struct DistributionOptions {
  EnumerationMethod method = EnumerationMethod::GrayCode;
  int max_block = 20;
  // Values in [-clamp_floor, 0) are zeroed with a warning; anything lower is a
  // hard NegativeProbability error.
  double clamp_floor = 1e-10;
  double normalization_tol = 1e-9;
};

// p(s) = 2^{-L} det(I + diag(s) G).
DiagonalDistribution diag_distribution(const CorrelationTable& table, int L,
                                       const DistributionOptions& options = {});

// Sums out the last site.
DiagonalDistribution marginalize(const DiagonalDistribution& dist);

// max_s |p(reverse(s)) - p(s)|
double reflection_defect(const DiagonalDistribution& dist);

}  // namespace diagent
