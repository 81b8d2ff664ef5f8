#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "diagent/model_kernel.hpp"

// Slow reference implementations for the test suite. Nothing here shares
// determinant or quadrature code with the production path.
namespace diagent::oracle {

// Composite midpoint rule with `nodes` points over one period.
double dense_quadrature(const ModelParams& params, int l,
                        int nodes = 1'000'000);

// <prod sigma^z> over 1-based block sites by pairing expansion (Pfaffian) of
// the Majorana two-point functions read directly from the table.
double wick_correlator(const CorrelationTable& table,
                       std::span<const int> sites);

// p(s) as the explicit sum over all subsets A of the block of
// (prod_{l in A} s_l) <prod_{l in A} sigma^z_l>, divided by 2^L.
// Spin string s uses the DiagonalDistribution bit convention. L <= 8.
double wick_bruteforce(const CorrelationTable& table, int L, std::uint32_t s);

// All 2^L probabilities, sharing subset correlators across strings.
std::vector<double> wick_bruteforce_distribution(const CorrelationTable& table,
                                                 int L);

struct FiniteChainSpec {
  int N = 14;
  double gamma = 1.0;
  double lambda = 0.5;
};

struct EdResult {
  int L = 0;
  // Diagonal of the reduced density matrix of sites 1..L.
  std::vector<double> block_probabilities;
  // Von Neumann entropy (bits) of the full reduced density matrix.
  double entanglement_entropy = 0.0;
  double energy_even = 0.0;
  double energy_odd = 0.0;
  // Lowest levels of the two parity sectors closer than 1e-10.
  bool degenerate = false;
};

// Ground state of the periodic ring
//   H = -sum_l [(1+gamma)/2 X_l X_{l+1} + (1-gamma)/2 Y_l Y_{l+1}]
//       + lambda sum_l Z_l
// in the even sector of prod_l Z_l, by Lanczos with full
// reorthogonalization.
EdResult ed_ground_state(const FiniteChainSpec& spec, int L);

// Lowest eigenvalue of a sector of the ring, exposed for tests.
double ed_sector_energy(const FiniteChainSpec& spec, bool even_sector);

}  // namespace diagent::oracle
