#include "diagent/gaussian_measure.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "diagent/error.hpp"

namespace diagent {

namespace {

// In-place LU with partial pivoting; keeps the factors so the inverse can be
// formed when the Gray-code path needs it.
struct LuFactor {
  Eigen::MatrixXd lu;
  std::vector<int> perm;
  double det = 1.0;
  double min_pivot = 0.0;
  double max_pivot = 0.0;

  explicit LuFactor(Eigen::MatrixXd a) : lu(std::move(a)) {
    const int n = static_cast<int>(lu.rows());
    perm.resize(n);
    std::iota(perm.begin(), perm.end(), 0);
    min_pivot = n > 0 ? INFINITY : 0.0;
    for (int col = 0; col < n; ++col) {
      int pivot = col;
      double best = std::abs(lu(col, col));
      for (int r = col + 1; r < n; ++r) {
        if (std::abs(lu(r, col)) > best) {
          best = std::abs(lu(r, col));
          pivot = r;
        }
      }
      if (pivot != col) {
        lu.row(pivot).swap(lu.row(col));
        std::swap(perm[pivot], perm[col]);
        det = -det;
      }
      const double d = lu(col, col);
      det *= d;
      min_pivot = std::min(min_pivot, std::abs(d));
      max_pivot = std::max(max_pivot, std::abs(d));
      if (d == 0.0) continue;
      for (int r = col + 1; r < n; ++r) {
        const double f = lu(r, col) / d;
        lu(r, col) = f;
        if (f == 0.0) continue;
        for (int c = col + 1; c < n; ++c) lu(r, c) -= f * lu(col, c);
      }
    }
  }

  bool invertible(double rel_tol) const {
    return min_pivot > rel_tol * max_pivot && min_pivot > 0.0;
  }

  Eigen::MatrixXd inverse() const {
    const int n = static_cast<int>(lu.rows());
    Eigen::MatrixXd inv(n, n);
    Eigen::VectorXd x(n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        double v = perm[i] == j ? 1.0 : 0.0;
        for (int k = 0; k < i; ++k) v -= lu(i, k) * x(k);
        x(i) = v;
      }
      for (int i = n - 1; i >= 0; --i) {
        double v = x(i);
        for (int k = i + 1; k < n; ++k) v -= lu(i, k) * x(k);
        x(i) = v / lu(i, i);
      }
      inv.col(j) = x;
    }
    return inv;
  }
};

Eigen::MatrixXd string_matrix(const Eigen::MatrixXd& g, std::uint32_t s) {
  const int n = static_cast<int>(g.rows());
  Eigen::MatrixXd m = g;
  for (int k = 0; k < n; ++k) {
    if (s >> k & 1u) m.row(k) = -m.row(k);
    m(k, k) += 1.0;
  }
  return m;
}

std::vector<double> determinants_full_lu(const Eigen::MatrixXd& g) {
  const int n = static_cast<int>(g.rows());
  std::vector<double> det(std::size_t{1} << n);
  for (std::uint32_t s = 0; s < det.size(); ++s)
    det[s] = LuFactor(string_matrix(g, s)).det;
  return det;
}

// Walks the reflected Gray code, flipping one row of I + S G per step and
// updating det and inverse by Sherman-Morrison. Falls back to a fresh LU
// when the update ratio is small or the inverse is large (ill-conditioned
// string), and refreshes periodically to bound drift.
std::vector<double> determinants_gray_code(const Eigen::MatrixXd& g) {
  constexpr double kMinRatio = 1e-2;
  constexpr double kPivotTol = 1e-8;
  constexpr int kRefresh = 32;
  constexpr double kMaxInverse = 1e3;

  const int n = static_cast<int>(g.rows());
  std::vector<double> det(std::size_t{1} << n);

  std::uint32_t s = 0;
  Eigen::MatrixXd inv;
  double current = 0.0;
  bool have_inverse = false;
  int since_refresh = 0;

  const auto refactor = [&](std::uint32_t string) {
    LuFactor f(string_matrix(g, string));
    current = f.det;
    have_inverse = f.invertible(kPivotTol);
    if (have_inverse) {
      inv = f.inverse();
      have_inverse = inv.cwiseAbs().maxCoeff() <= kMaxInverse;
    }
    since_refresh = 0;
  };

  refactor(s);
  det[s] = current;
  Eigen::RowVectorXd u(n);
  for (std::uint32_t t = 1; t < det.size(); ++t) {
    const int k = std::countr_zero(t);
    const double old_sign = (s >> k & 1u) ? -1.0 : 1.0;
    s ^= 1u << k;
    if (have_inverse && since_refresh < kRefresh) {
      u = (-2.0 * old_sign) * g.row(k);
      const double ratio = 1.0 + u.dot(inv.col(k));
      if (std::abs(ratio) >= kMinRatio) {
        const Eigen::VectorXd col = inv.col(k);
        const Eigen::RowVectorXd row = u * inv;
        inv.noalias() -= (col * row) / ratio;
        current *= ratio;
        ++since_refresh;
        det[s] = current;
        have_inverse = inv.cwiseAbs().maxCoeff() <= kMaxInverse;
        continue;
      }
    }
    refactor(s);
    det[s] = current;
  }
  return det;
}

}  // namespace

ZCorrelationMatrix::ZCorrelationMatrix(const CorrelationTable& table, int L) {
  if (L < 1) throw Error(ErrorKind::InvalidArgument, "block size must be >= 1");
  if (L > table.l_max() + 1)
    throw Error(ErrorKind::TableTooSmall,
                "block of " + std::to_string(L) + " sites needs l_max >= " +
                    std::to_string(L - 1),
                L);
  entries_.resize(L, L);
  for (int j = 0; j < L; ++j)
    for (int k = 0; k < L; ++k) entries_(j, k) = table[k - j];
}

DiagonalDistribution::DiagonalDistribution(int L, std::vector<double> p)
    : L_(L), p_(std::move(p)) {
  if (L < 1 || L > 30 || p_.size() != (std::size_t{1} << L))
    throw Error(ErrorKind::InvalidArgument,
                "distribution needs 2^L entries for 1 <= L <= 30");
}

double DiagonalDistribution::total() const noexcept {
  return std::accumulate(p_.begin(), p_.end(), 0.0);
}

std::uint32_t reverse_string(std::uint32_t s, int L) noexcept {
  std::uint32_t r = 0;
  for (int b = 0; b < L; ++b)
    if (s >> b & 1u) r |= 1u << (L - 1 - b);
  return r;
}

double lu_determinant(Eigen::MatrixXd a) {
  if (a.rows() != a.cols())
    throw Error(ErrorKind::InvalidArgument, "determinant of non-square matrix");
  return LuFactor(std::move(a)).det;
}

double z_correlator(const CorrelationTable& table, std::span<const int> sites,
                    int L) {
  if (sites.empty())
    throw Error(ErrorKind::InvalidSites, "z_correlator: empty site set");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i] < 1 || sites[i] > L || (i > 0 && sites[i] <= sites[i - 1]))
      throw Error(ErrorKind::InvalidSites,
                  "z_correlator: sites must be strictly increasing in [1, " +
                      std::to_string(L) + "]");
  }
  const int span_needed = sites.back() - sites.front();
  if (span_needed > table.l_max())
    throw Error(ErrorKind::TableTooSmall,
                "z_correlator: site spread exceeds table range",
                span_needed);
  const int n = static_cast<int>(sites.size());
  Eigen::MatrixXd m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m(a, b) = table[sites[b] - sites[a]];
  return lu_determinant(std::move(m));
}

DiagonalDistribution diag_distribution(const CorrelationTable& table, int L,
                                       const DistributionOptions& options) {
  if (L < 1) throw Error(ErrorKind::InvalidArgument, "block size must be >= 1");
  if (L > options.max_block)
    throw Error(ErrorKind::BlockTooLarge,
                "block of " + std::to_string(L) + " sites exceeds cap " +
                    std::to_string(options.max_block),
                L);
  const ZCorrelationMatrix z(table, L);
  std::vector<double> p = options.method == EnumerationMethod::GrayCode
                              ? determinants_gray_code(z.entries())
                              : determinants_full_lu(z.entries());
  const double scale = std::ldexp(1.0, -L);
  std::size_t clamped = 0;
  double worst = 0.0;
  for (double& v : p) {
    v *= scale;
    if (v < 0.0) {
      if (v < -options.clamp_floor)
        throw Error(ErrorKind::NegativeProbability,
                    "probability " + std::to_string(v) + " below -" +
                        std::to_string(options.clamp_floor) +
                        " for L=" + std::to_string(L),
                    L);
      worst = std::min(worst, v);
      v = 0.0;
      ++clamped;
    }
  }
  if (clamped > 0)
    warn("clamped " + std::to_string(clamped) +
         " negative probabilities (most negative " + std::to_string(worst) +
         ") for L=" + std::to_string(L));
  DiagonalDistribution dist(L, std::move(p));
  if (std::abs(dist.total() - 1.0) > options.normalization_tol)
    throw Error(ErrorKind::Unnormalized,
                "distribution for L=" + std::to_string(L) +
                    " is not normalized: total " +
                    std::to_string(dist.total()),
                L);
  return dist;
}

DiagonalDistribution marginalize(const DiagonalDistribution& dist) {
  const int L = dist.size();
  if (L < 2)
    throw Error(ErrorKind::InvalidArgument, "marginalize needs L >= 2");
  const std::size_t half = std::size_t{1} << (L - 1);
  std::vector<double> p(half);
  for (std::size_t s = 0; s < half; ++s)
    p[s] = dist[static_cast<std::uint32_t>(s)] +
           dist[static_cast<std::uint32_t>(s | half)];
  return DiagonalDistribution(L - 1, std::move(p));
}

double reflection_defect(const DiagonalDistribution& dist) {
  double worst = 0.0;
  const auto p = dist.probabilities();
  for (std::uint32_t s = 0; s < p.size(); ++s)
    worst = std::max(worst,
                     std::abs(p[reverse_string(s, dist.size())] - p[s]));
  return worst;
}

}  // namespace diagent
