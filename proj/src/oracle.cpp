#include "diagent/oracle.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "diagent/error.hpp"

namespace diagent::oracle {

namespace {

// Majorana two-point matrix entry for block-local indices a = 2m + alpha,
// b = 2n + beta.
double majorana_entry(const CorrelationTable& table, int a, int b) {
  const int m = a / 2, n = b / 2;
  if (a % 2 == 0 && b % 2 == 1) return table.at(n - m);
  if (a % 2 == 1 && b % 2 == 0) return -table.at(m - n);
  return 0.0;
}

double pfaffian(const CorrelationTable& table, std::vector<int>& idx) {
  if (idx.empty()) return 1.0;
  const int first = idx.front();
  double sum = 0.0;
  for (std::size_t j = 1; j < idx.size(); ++j) {
    const double w = majorana_entry(table, first, idx[j]);
    if (w == 0.0) continue;
    std::vector<int> rest;
    rest.reserve(idx.size() - 2);
    for (std::size_t k = 1; k < idx.size(); ++k)
      if (k != j) rest.push_back(idx[k]);
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    sum += sign * w * pfaffian(table, rest);
  }
  return sum;
}

double subset_correlator(const CorrelationTable& table, std::uint32_t subset) {
  std::vector<int> idx;
  for (int site = 0; subset >> site; ++site) {
    if (!(subset >> site & 1u)) continue;
    idx.push_back(2 * site);
    idx.push_back(2 * site + 1);
  }
  // (-i)^k <c c ... c> with <c_a c_b> = i Gamma_ab reduces to Pf(Gamma_sub).
  return pfaffian(table, idx);
}

void check_block(int L) {
  if (L < 1 || L > 8)
    throw Error(ErrorKind::TooLarge,
                "brute-force Wick expansion supports 1 <= L <= 8", L);
}

}  // namespace

double dense_quadrature(const ModelParams& params, int l, int nodes) {
  if (std::abs(l) > 32)
    throw Error(ErrorKind::InvalidArgument, "dense_quadrature needs |l| <= 32", l);
  const double h = 2.0 * std::numbers::pi / nodes;
  long double sum = 0.0L;
  for (int k = 0; k < nodes; ++k) {
    const double phi = (k + 0.5) * h;
    const double re = std::cos(phi) - params.lambda();
    const double im = params.gamma() * std::sin(phi);
    const double mod = std::sqrt(re * re + im * im);
    sum += (re * std::cos(l * phi) - im * std::sin(l * phi)) / mod;
  }
  return static_cast<double>(sum / nodes);
}

double wick_correlator(const CorrelationTable& table,
                       std::span<const int> sites) {
  std::uint32_t subset = 0;
  for (int s : sites) {
    if (s < 1 || s > 31)
      throw Error(ErrorKind::InvalidSites, "site out of range");
    subset |= 1u << (s - 1);
  }
  return subset_correlator(table, subset);
}

double wick_bruteforce(const CorrelationTable& table, int L, std::uint32_t s) {
  check_block(L);
  double sum = 0.0;
  for (std::uint32_t subset = 0; subset < (1u << L); ++subset) {
    const double sign = (std::popcount(subset & s) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * subset_correlator(table, subset);
  }
  return std::ldexp(sum, -L);
}

std::vector<double> wick_bruteforce_distribution(const CorrelationTable& table,
                                                 int L) {
  check_block(L);
  const std::uint32_t n = 1u << L;
  std::vector<double> corr(n);
  for (std::uint32_t subset = 0; subset < n; ++subset)
    corr[subset] = subset_correlator(table, subset);
  std::vector<double> p(n);
  for (std::uint32_t s = 0; s < n; ++s) {
    double sum = 0.0;
    for (std::uint32_t subset = 0; subset < n; ++subset)
      sum += (std::popcount(subset & s) % 2 == 0 ? 1.0 : -1.0) * corr[subset];
    p[s] = std::ldexp(sum, -L);
  }
  return p;
}

namespace {

struct Sector {
  std::vector<std::uint32_t> states;
  std::vector<std::int32_t> index;  // full-space state -> sector index, -1 if absent
};

Sector build_sector(int N, bool even) {
  Sector sec;
  sec.index.assign(std::size_t{1} << N, -1);
  for (std::uint32_t x = 0; x < (1u << N); ++x) {
    if ((std::popcount(x) % 2 == 0) != even) continue;
    sec.index[x] = static_cast<std::int32_t>(sec.states.size());
    sec.states.push_back(x);
  }
  return sec;
}

void apply_hamiltonian(const FiniteChainSpec& spec, const Sector& sec,
                       const Eigen::VectorXd& in, Eigen::VectorXd& out) {
  const int N = spec.N;
  out.setZero(in.size());
  for (std::size_t i = 0; i < sec.states.size(); ++i) {
    const std::uint32_t x = sec.states[i];
    const double amp = in(static_cast<Eigen::Index>(i));
    // sigma^z = +1 on a clear bit
    out(i) += spec.lambda * (N - 2 * std::popcount(x)) * amp;
    for (int l = 0; l < N; ++l) {
      const int r = (l + 1) % N;
      const bool same = ((x >> l) & 1u) == ((x >> r) & 1u);
      const std::uint32_t y = x ^ (1u << l) ^ (1u << r);
      const double coupling = same ? -spec.gamma : -1.0;
      out(sec.index[y]) += coupling * amp;
    }
  }
}

struct Eigenpair {
  double value;
  Eigen::VectorXd vector;
};

Eigenpair lanczos_ground(const FiniteChainSpec& spec, const Sector& sec) {
  const auto dim = static_cast<Eigen::Index>(sec.states.size());
  const int max_iter = static_cast<int>(std::min<Eigen::Index>(dim, 400));
  Eigen::MatrixXd basis(dim, max_iter);
  std::vector<double> alpha, beta;

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = uni(rng);
  v.normalize();

  Eigen::VectorXd w(dim);
  double ritz = 0.0;
  Eigen::VectorXd coeffs;
  int m = 0;
  for (; m < max_iter; ++m) {
    basis.col(m) = v;
    apply_hamiltonian(spec, sec, v, w);
    alpha.push_back(v.dot(w));
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass)
      w -= basis.leftCols(m + 1) * (basis.leftCols(m + 1).transpose() * w);
    const double b = w.norm();

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int k = 0; k <= m; ++k) {
      t(k, k) = alpha[k];
      if (k < m) t(k, k + 1) = t(k + 1, k) = beta[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    ritz = es.eigenvalues()(0);
    coeffs = es.eigenvectors().col(0);
    const double residual = std::abs(b * coeffs(m));
    if (residual < 1e-12 || b < 1e-14 || m + 1 == dim) {
      ++m;
      break;
    }
    beta.push_back(b);
    v = w / b;
  }
  Eigen::VectorXd ground = basis.leftCols(m) * coeffs.head(m);
  ground.normalize();
  return {ritz, std::move(ground)};
}

void check_spec(const FiniteChainSpec& spec) {
  if (spec.N < 2 || spec.N > 16)
    throw Error(ErrorKind::TooLarge, "exact diagonalization needs 2 <= N <= 16",
                spec.N);
  if (!std::isfinite(spec.gamma) || !std::isfinite(spec.lambda))
    throw Error(ErrorKind::InvalidArgument, "couplings must be finite");
}

}  // namespace

double ed_sector_energy(const FiniteChainSpec& spec, bool even_sector) {
  check_spec(spec);
  return lanczos_ground(spec, build_sector(spec.N, even_sector)).value;
}

EdResult ed_ground_state(const FiniteChainSpec& spec, int L) {
  check_spec(spec);
  if (L < 1 || L > spec.N / 2)
    throw Error(ErrorKind::InvalidArgument, "block must satisfy 1 <= L <= N/2", L);

  const Sector even = build_sector(spec.N, true);
  const Eigenpair ground = lanczos_ground(spec, even);

  EdResult result;
  result.L = L;
  result.energy_even = ground.value;
  result.energy_odd = ed_sector_energy(spec, false);
  result.degenerate = std::abs(result.energy_even - result.energy_odd) < 1e-10;
  if (result.degenerate)
    warn("parity sectors degenerate at N=" + std::to_string(spec.N) +
         "; using the even-sector ground state");

  // psi as a (block x environment) matrix; rho = M M^T.
  const std::uint32_t mask = (1u << L) - 1u;
  const int env_bits = spec.N - L;
  Eigen::MatrixXd amplitudes =
      Eigen::MatrixXd::Zero(Eigen::Index{1} << L, Eigen::Index{1} << env_bits);
  for (std::size_t i = 0; i < even.states.size(); ++i) {
    const std::uint32_t x = even.states[i];
    amplitudes(x & mask, x >> L) = ground.vector(static_cast<Eigen::Index>(i));
  }
  const Eigen::MatrixXd rho = amplitudes * amplitudes.transpose();
  result.block_probabilities.resize(rho.rows());
  for (Eigen::Index s = 0; s < rho.rows(); ++s)
    result.block_probabilities[s] = rho(s, s);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho, Eigen::EigenvaluesOnly);
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double w = es.eigenvalues()(k);
    if (w > 1e-14) result.entanglement_entropy -= w * std::log2(w);
  }
  return result;
}

}  // namespace diagent::oracle
