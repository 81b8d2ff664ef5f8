#include <doctest.h>

#include <cmath>
#include <numbers>

#include "diagent/error.hpp"
#include "diagent/model_kernel.hpp"
#include "diagent/oracle.hpp"
#include "test_support.hpp"

using namespace diagent;
using std::numbers::pi;

namespace {

// Fourier coefficients of sgn(cos phi - lambda) for |lambda| < 1.
double xx_kernel(double lambda, int l) {
  const double edge = std::acos(lambda);
  if (l == 0) return (2.0 * edge - pi) / pi;
  return 2.0 * std::sin(l * edge) / (pi * l);
}

}  // namespace

TEST_CASE("ModelParams validation") {
  CHECK_THROWS_AS(ModelParams(NAN, 0.0), Error);
  CHECK_THROWS_AS(ModelParams(0.0, INFINITY), Error);
  CHECK_THROWS_AS(ModelParams(0.0, 0.0, 0.0), Error);
  CHECK_THROWS_AS(ModelParams(0.0, 0.0, -1e-12), Error);
  CHECK_NOTHROW(ModelParams(-3.0, 12.0, 1e-8));
}

TEST_CASE("compute_g: Ising at zero field selects one Fourier mode") {
  const ModelParams p(1.0, 0.0);
  CHECK(compute_g(p, -1) == doctest::Approx(1.0).epsilon(1e-13));
  for (int l : {-5, -2, 0, 1, 2, 7}) CHECK(std::abs(compute_g(p, l)) < 1e-12);
}

TEST_CASE("compute_g: polarized limit") {
  const ModelParams p(0.3, 1000.0);
  for (int l = -4; l <= 4; ++l)
    CHECK(std::abs(compute_g(p, l) + (l == 0 ? 1.0 : 0.0)) < 1e-3);
}

TEST_CASE("compute_g: XX chain at zero field is a square wave") {
  const ModelParams p(0.0, 0.0);
  CHECK(std::abs(compute_g(p, 0)) < 1e-14);
  // frozen from oracle::dense_quadrature with 10^6 nodes
  CHECK(std::abs(compute_g(p, 1) - 0.63661977236758138) < 1e-12);
  CHECK(std::abs(compute_g(p, 1) - oracle::dense_quadrature(p, 1)) < 1e-10);
  CHECK(std::abs(compute_g(p, 1) - 2.0 / pi) < 1e-13);
}

TEST_CASE("compute_g: XX chain matches the closed form for |lambda| < 1") {
  for (double lambda : {0.1, 0.5, 0.93}) {
    const ModelParams p(0.0, lambda);
    for (int l = -6; l <= 6; ++l)
      CHECK(std::abs(compute_g(p, l) - xx_kernel(lambda, l)) < 1e-12);
  }
}

TEST_CASE("compute_g: critical Ising chain") {
  // integrand is -i e^{-i phi/2} on (0, 2pi): g_l = -2 / (pi (2l + 1))
  const ModelParams p(1.0, 1.0);
  for (int l = -8; l <= 8; ++l)
    CHECK(std::abs(compute_g(p, l) + 2.0 / (pi * (2 * l + 1))) < 1e-12);
}

TEST_CASE("compute_g: critical XX chain at lambda = 1") {
  const ModelParams p(0.0, 1.0);
  for (int l = -3; l <= 3; ++l)
    CHECK(std::abs(compute_g(p, l) + (l == 0 ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("build_table examples") {
  SUBCASE("Ising at zero field") {
    const auto t = build_table(ModelParams(1.0, 0.0), 3);
    CHECK(t.l_max() == 3);
    CHECK(t.values().size() == 7);
    for (int l = -3; l <= 3; ++l)
      CHECK(std::abs(t.at(l) - (l == -1 ? 1.0 : 0.0)) < 1e-12);
  }
  SUBCASE("XX chain") {
    const auto t = build_table(ModelParams(0.0, 0.0), 2);
    const double expected[] = {0.0, 2.0 / pi, 0.0, 2.0 / pi, 0.0};
    for (int l = -2; l <= 2; ++l)
      CHECK(std::abs(t.at(l) - expected[l + 2]) < 1e-12);
  }
  SUBCASE("generic point against the dense midpoint rule") {
    const ModelParams p(0.5, 0.5);
    const auto t = build_table(p, 1);
    for (int l = -1; l <= 1; ++l)
      CHECK(std::abs(t.at(l) - oracle::dense_quadrature(p, l)) < 1e-10);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(build_table(ModelParams(0.5, 0.5), 0), Error);
    const auto t = build_table(ModelParams(0.5, 0.5), 2);
    try {
      (void)t.at(3);
      FAIL("expected TableTooSmall");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::TableTooSmall);
      CHECK(e.index() == 3);
    }
  }
}

TEST_CASE("quadrature nonconvergence carries the offending l") {
  const ModelParams p(0.5, 0.5, 1e-300);
  try {
    (void)build_table(p, 2);
    FAIL("expected nonconvergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::QuadratureNonconvergence);
    CHECK(e.index() == -2);
  }
}

TEST_CASE("table invariants") {
  for (const auto& d : test::random_params(10, 7)) {
    const auto t = build_table(ModelParams(d.gamma, d.lambda), 8);
    for (double g : t.values()) {
      CHECK(std::isfinite(g));
      CHECK(std::abs(g) <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("property: raw integral is real") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> g(0.0, 1.0), lam(0.0, 1.5);
  std::uniform_int_distribution<int> ell(-12, 12);
  for (int i = 0; i < 100; ++i) {
    const ModelParams p(g(rng), lam(rng));
    const auto v = kernel_integral(p, ell(rng));
    CHECK(std::abs(v.imag()) < 10.0 * p.quad_tol());
  }
}

TEST_CASE("property: negating the integration variable leaves g_l unchanged") {
  for (const auto& d : test::random_params(20, 5)) {
    const ModelParams p(d.gamma, d.lambda);
    for (int l : {-3, 0, 2, 5}) {
      const double fwd = kernel_integral(p, l).real();
      const double rev = kernel_integral(p, l, true).real();
      CHECK(std::abs(fwd - rev) < 2.0 * p.quad_tol());
    }
  }
}

TEST_CASE("property: large-field limit") {
  const ModelParams p(0.6, 1000.0);
  double worst = 0.0;
  for (int l = -8; l <= 8; ++l)
    worst = std::max(worst, std::abs(compute_g(p, l) + (l == 0 ? 1.0 : 0.0)));
  CHECK(worst < 2e-3);
}

TEST_CASE("property: gamma = 0 tables are even in l") {
  for (double lambda : {0.0, 0.5, 1.2}) {
    const auto t = build_table(ModelParams(0.0, lambda), 10);
    for (int l = 1; l <= 10; ++l) CHECK(std::abs(t.at(l) - t.at(-l)) < 1e-12);
  }
}

TEST_CASE("g_l and g_-l differ away from gamma = 0") {
  const auto t = build_table(ModelParams(0.7, 0.4), 2);
  CHECK(std::abs(t.at(1) - t.at(-1)) > 1e-3);
}

TEST_CASE("build_majorana_matrix") {
  SUBCASE("Ising at zero field, L = 2") {
    const auto t = build_table(ModelParams(1.0, 0.0), 3);
    const auto m = build_majorana_matrix(t, 2).matrix();
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
    expected(1, 2) = -1.0;  // Pi_1 = [[0, 0], [-1, 0]]
    expected(2, 1) = 1.0;   // Pi_-1 = [[0, 1], [0, 0]]
    CHECK((m - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("L = 1 is the Pi_0 block") {
    const auto t = build_table(ModelParams(0.4, 0.9), 1);
    const auto m = build_majorana_matrix(t, 1).matrix();
    CHECK(m.rows() == 2);
    CHECK(m(0, 0) == 0.0);
    CHECK(m(1, 1) == 0.0);
    CHECK(m(0, 1) == t.at(0));
    CHECK(m(1, 0) == -t.at(0));
  }
  SUBCASE("antisymmetric with the block layout") {
    for (const auto& d : test::random_params(10, 3)) {
      const auto t = build_table(ModelParams(d.gamma, d.lambda), 5);
      const auto m = build_majorana_matrix(t, 6).matrix();
      CHECK((m + m.transpose()).cwiseAbs().maxCoeff() == 0.0);
      for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 6; ++c) {
          CHECK(m(2 * r, 2 * c) == 0.0);
          CHECK(m(2 * r + 1, 2 * c + 1) == 0.0);
          CHECK(m(2 * r, 2 * c + 1) == t.at(c - r));
          CHECK(m(2 * r + 1, 2 * c) == -t.at(r - c));
        }
      }
    }
  }
  SUBCASE("table too small") {
    const auto t = build_table(ModelParams(0.4, 0.9), 2);
    try {
      (void)build_majorana_matrix(t, 4);
      FAIL("expected TableTooSmall");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::TableTooSmall);
    }
  }
}
