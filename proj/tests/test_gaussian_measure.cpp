#include <doctest.h>

#include <cmath>
#include <random>

#include "diagent/error.hpp"
#include "diagent/gaussian_measure.hpp"
#include "diagent/oracle.hpp"
#include "test_support.hpp"

using namespace diagent;

namespace {

// The seven-term three-site coefficient written out for sites l < m < n.
double explicit_three_site(const CorrelationTable& g, int l, int m, int n) {
  const double g0 = g.at(0);
  return g0 * g0 * g0 -
         g0 * (g.at(m - l) * g.at(l - m) + g.at(n - m) * g.at(m - n) +
               g.at(l - n) * g.at(n - l)) +
         g.at(l - m) * g.at(m - n) * g.at(n - l) +
         g.at(m - l) * g.at(n - m) * g.at(l - n);
}

CorrelationTable handmade(std::vector<double> g) {
  const int l_max = static_cast<int>(g.size() / 2);
  return CorrelationTable(ModelParams(0.0, 0.0), l_max, std::move(g));
}

}  // namespace

TEST_CASE("ZCorrelationMatrix is Toeplitz with g_0 on the diagonal") {
  const auto t = build_table(ModelParams(0.6, 0.3), 5);
  const ZCorrelationMatrix z(t, 6);
  for (int j = 0; j < 6; ++j)
    for (int k = 0; k < 6; ++k) CHECK(z.entries()(j, k) == t.at(k - j));
  CHECK_THROWS_AS(ZCorrelationMatrix(t, 7), Error);
}

TEST_CASE("lu_determinant") {
  Eigen::MatrixXd a(3, 3);
  a << 0, 2, 1, 1, 0, 0, 3, 1, 4;  // needs pivoting; det = -(2*4 - 1*1) = -7
  CHECK(lu_determinant(a) == doctest::Approx(-7.0).epsilon(1e-14));
  CHECK(lu_determinant(Eigen::MatrixXd::Zero(2, 2)) == 0.0);
  CHECK_THROWS_AS(lu_determinant(Eigen::MatrixXd::Zero(2, 3)), Error);
}

TEST_CASE("z_correlator reproduces the explicit expansions") {
  const auto t = build_table(ModelParams(0.7, 0.3), 7);
  const int one[] = {3};
  CHECK(z_correlator(t, one, 8) == doctest::Approx(t.at(0)).epsilon(1e-14));
  const int two[] = {2, 6};
  CHECK(std::abs(z_correlator(t, two, 8) -
                 (t.at(0) * t.at(0) - t.at(4) * t.at(-4))) < 1e-14);
  const int three[] = {1, 3, 8};
  CHECK(std::abs(z_correlator(t, three, 8) - explicit_three_site(t, 1, 3, 8)) < 1e-14);
}

TEST_CASE("property: z_correlator matches explicit expansions on random draws") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> site(1, 10);
  for (const auto& d : test::random_params(50, 17)) {
    const auto t = build_table(ModelParams(d.gamma, d.lambda), 9);
    int s[3];
    do {
      for (int& v : s) v = site(rng);
      std::sort(s, s + 3);
    } while (s[0] == s[1] || s[1] == s[2]);
    const int pair[] = {s[0], s[2]};
    CHECK(std::abs(z_correlator(t, pair, 10) -
                   (t.at(0) * t.at(0) - t.at(s[2] - s[0]) * t.at(s[0] - s[2]))) <
          1e-12);
    CHECK(std::abs(z_correlator(t, s, 10) - explicit_three_site(t, s[0], s[1], s[2])) <
          1e-12);
  }
}

TEST_CASE("z_correlator rejects bad sites") {
  const auto t = build_table(ModelParams(0.7, 0.3), 3);
  const std::vector<std::vector<int>> bad = {{}, {0}, {5}, {2, 2}, {3, 1}};
  for (const auto& s : bad) {
    try {
      (void)z_correlator(t, s, 4);
      FAIL("expected InvalidSites");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidSites);
    }
  }
}

TEST_CASE("diag_distribution examples") {
  SUBCASE("Ising at zero field is uniform") {
    const auto t = build_table(ModelParams(1.0, 0.0), 2);
    const auto d = diag_distribution(t, 3);
    CHECK(d.probabilities().size() == 8);
    for (double p : d.probabilities()) CHECK(std::abs(p - 0.125) < 1e-12);
    for (std::uint32_t s = 0; s < 8; ++s)
      CHECK(std::abs(oracle::wick_bruteforce(t, 3, s) - 0.125) < 1e-12);
  }
  SUBCASE("polarized limit concentrates on the all-down string") {
    for (double gamma : {0.0, 0.4, 1.0}) {
      const auto t = build_table(ModelParams(gamma, 1000.0), 1);
      const auto d = diag_distribution(t, 2);
      CHECK(d[0b11] >= 1.0 - 1e-2);
    }
  }
  SUBCASE("two sites from the one- and two-site coefficients") {
    const auto t = build_table(ModelParams(1.0, 0.5), 1);
    const auto d = diag_distribution(t, 2);
    const double g0 = t.at(0);
    const double pair = g0 * g0 - t.at(1) * t.at(-1);
    for (std::uint32_t s = 0; s < 4; ++s) {
      const double s1 = (s & 1u) ? -1.0 : 1.0;
      const double s2 = (s & 2u) ? -1.0 : 1.0;
      CHECK(std::abs(d[s] - (1.0 + (s1 + s2) * g0 + s1 * s2 * pair) / 4.0) < 1e-14);
    }
  }
}

TEST_CASE("Gray-code updates agree with full LU") {
  for (const auto& d : test::random_params(8, 23)) {
    const auto t = build_table(ModelParams(d.gamma, d.lambda), 11);
    for (int L : {1, 2, 5, 12}) {
      DistributionOptions lu;
      lu.method = EnumerationMethod::FullLU;
      const auto a = diag_distribution(t, L);
      const auto b = diag_distribution(t, L, lu);
      double worst = 0.0;
      for (std::size_t s = 0; s < a.probabilities().size(); ++s)
        worst = std::max(worst, std::abs(a.probabilities()[s] - b.probabilities()[s]));
      CHECK(worst < 1e-13);
    }
  }
}

TEST_CASE("Gray-code path survives exactly singular strings") {
  // product states on the circle gamma^2 + lambda^2 = 1 and the polarized
  // limit put many strings at exactly zero probability
  for (const auto& [gamma, lambda] :
       std::vector<std::pair<double, double>>{{0.6, 0.8}, {1.0, 0.0}, {0.3, 200.0}}) {
    const auto t = build_table(ModelParams(gamma, lambda), 9);
    DistributionOptions lu;
    lu.method = EnumerationMethod::FullLU;
    const auto a = diag_distribution(t, 10);
    const auto b = diag_distribution(t, 10, lu);
    for (std::size_t s = 0; s < a.probabilities().size(); ++s)
      CHECK(std::abs(a.probabilities()[s] - b.probabilities()[s]) < 1e-13);
  }
}

TEST_CASE("oracle equivalence for small blocks") {
  for (const auto& d : test::random_params(6, 41)) {
    const auto t = build_table(ModelParams(d.gamma, d.lambda), 5);
    for (int L = 1; L <= 6; ++L) {
      const auto p = diag_distribution(t, L);
      const auto ref = oracle::wick_bruteforce_distribution(t, L);
      for (std::size_t s = 0; s < ref.size(); ++s)
        CHECK(std::abs(p.probabilities()[s] - ref[s]) < 1e-10);
    }
  }
}

TEST_CASE("negative probabilities: clamp versus hard error") {
  test::WarningCapture capture;
  // L = 1: p(+) = (1 + g0)/2, p(-) = (1 - g0)/2
  const auto d = diag_distribution(handmade({0.0, 1.0 + 2e-12, 0.0}), 1);
  CHECK(d[1] == 0.0);
  CHECK(test::captured_warnings().size() == 1);
  try {
    (void)diag_distribution(handmade({0.0, 1.01, 0.0}), 1);
    FAIL("expected NegativeProbability");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NegativeProbability);
  }
}

TEST_CASE("block cap and table range") {
  const auto t = build_table(ModelParams(0.5, 0.5), 3);
  DistributionOptions opts;
  opts.max_block = 3;
  try {
    (void)diag_distribution(t, 4, opts);
    FAIL("expected BlockTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BlockTooLarge);
  }
  try {
    (void)diag_distribution(t, 5);
    FAIL("expected TableTooSmall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TableTooSmall);
  }
}

TEST_CASE("marginalize") {
  SUBCASE("uniform stays uniform") {
    const auto m = marginalize(DiagonalDistribution(3, std::vector<double>(8, 0.125)));
    CHECK(m.size() == 2);
    for (double p : m.probabilities()) CHECK(p == 0.25);
  }
  SUBCASE("point mass drops its last symbol") {
    std::vector<double> p(16, 0.0);
    p[0b1011] = 1.0;
    const auto m = marginalize(DiagonalDistribution(4, p));
    CHECK(m[0b011] == 1.0);
    CHECK(m.total() == 1.0);
  }
  SUBCASE("consistent with the infinite-chain block of one site less") {
    const auto t = build_table(ModelParams(0.5, 0.5), 5);
    const auto m = marginalize(diag_distribution(t, 6));
    const auto d = diag_distribution(t, 5);
    for (std::uint32_t s = 0; s < 32; ++s) CHECK(std::abs(m[s] - d[s]) < 1e-9);
  }
  CHECK_THROWS_AS(marginalize(DiagonalDistribution(1, {0.5, 0.5})), Error);
}

TEST_CASE("property: distribution invariants") {
  for (const auto& d : test::random_params(10, 77)) {
    const auto t = build_table(ModelParams(d.gamma, d.lambda), 8);
    for (int L = 2; L <= 9; ++L) {
      const auto p = diag_distribution(t, L);
      CHECK(std::abs(p.total() - 1.0) < 1e-9);
      CHECK(reflection_defect(p) < 1e-10);
      for (double v : p.probabilities()) CHECK(v >= 0.0);
      const auto prev = diag_distribution(t, L - 1);
      const auto m = marginalize(p);
      for (std::uint32_t s = 0; s < m.probabilities().size(); ++s)
        CHECK(std::abs(m[s] - prev[s]) < 1e-9);
    }
  }
}

TEST_CASE("reverse_string") {
  CHECK(reverse_string(0b0001, 4) == 0b1000);
  CHECK(reverse_string(0b0110, 4) == 0b0110);
  CHECK(reverse_string(0b011, 3) == 0b110);
}
