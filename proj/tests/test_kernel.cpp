#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qmcdens/kernel.hpp"

using namespace qmcdens;

TEST_SUITE_BEGIN("kernel");

TEST_CASE("gaussian kernel values and moments") {
  GaussianKernel k;
  CHECK(k(0.0) == doctest::Approx(0.3989422804).epsilon(1e-9));
  CHECK(k.at_zero() == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-15));
  CHECK(k.mu2() == 1.0);
  CHECK(k.mu0_sq() == doctest::Approx(0.2820947918).epsilon(1e-9));

  // quadrature oracle for the moments
  double total = oracles::integrate([&](double x) { return k(x); }, -10, 10);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  double mu1 = oracles::integrate([&](double x) { return x * k(x); }, -10, 10);
  CHECK(std::fabs(mu1) < 1e-12);
  double mu2 = oracles::integrate([&](double x) { return x * x * k(x); }, -10, 10);
  CHECK(mu2 == doctest::Approx(1.0).epsilon(1e-9));
  double k2 = oracles::integrate([&](double x) { return k(x) * k(x); }, -10, 10);
  CHECK(k2 == doctest::Approx(k.mu0_sq()).epsilon(1e-10));
}

TEST_CASE("symmetry") {
  GaussianKernel k;
  for (double x : {0.3, 1.7, 4.2, 9.9}) CHECK(k(x) == k(-x));
}

TEST_CASE("derivatives match central finite differences, r = 1..6") {
  GaussianKernel k;
  const double step = 1e-5;
  for (int r = 1; r <= 6; ++r) {
    double max_rel = 0.0;
    for (double x = -5.0; x <= 5.0; x += 0.37) {
      double fd = (k.deriv(r - 1, x + step) - k.deriv(r - 1, x - step)) / (2 * step);
      double an = k.deriv(r, x);
      double denom = std::max(std::fabs(an), 1e-6);
      max_rel = std::max(max_rel, std::fabs(fd - an) / denom);
    }
    CHECK(max_rel < 1e-6);
  }
}

TEST_CASE("deriv_sq_mass matches quadrature, r = 1..4") {
  GaussianKernel k;
  for (int r = 1; r <= 4; ++r) {
    double q = oracles::integrate(
        [&](double x) {
          double d = k.deriv(r, x);
          return d * d;
        },
        -10, 10);
    CHECK(k.deriv_sq_mass(r) == doctest::Approx(q).epsilon(1e-8));
  }
}

TEST_CASE("roughness: constants and polynomials") {
  auto grid_values = [](auto f, double a, double b, int nodes) {
    std::vector<double> v(nodes);
    for (int i = 0; i < nodes; ++i)
      v[i] = f(a + (b - a) * static_cast<double>(i) / (nodes - 1));
    return v;
  };
  auto one = grid_values([](double) { return 1.0; }, 0, 1, 129);
  CHECK(roughness(one, 0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  auto lin = grid_values([](double x) { return x; }, 0, 1, 129);
  CHECK(roughness(lin, 0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  // standard normal density over [-2,2]; oracle at 10x resolution agrees
  GaussianKernel k;
  auto phi129 = grid_values([&](double x) { return k(x); }, -2, 2, 129);
  auto phi1290 = grid_values([&](double x) { return k(x); }, -2, 2, 1291);
  double exact = oracles::integrate([&](double x) { return k(x) * k(x); }, -2, 2);
  CHECK(exact == doctest::Approx(0.2807752271).epsilon(1e-9));
  CHECK(roughness(phi129, -2, 2) == doctest::Approx(exact).epsilon(1e-7));
  CHECK(roughness(phi1290, -2, 2) == doctest::Approx(exact).epsilon(1e-11));
}

TEST_CASE("roughness input validation") {
  std::vector<double> v(129, 1.0);
  CHECK_THROWS_AS(roughness(v, 2.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(roughness(v, 3.0, 2.0), std::invalid_argument);
  std::vector<double> even(128, 1.0);
  CHECK_THROWS_AS(roughness(even, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("pairwise_sum equals long double reference") {
  std::vector<double> v;
  double x = 0.1;
  for (int i = 0; i < 10000; ++i) {
    v.push_back(x);
    x = std::fmod(x * 1.000301 + 0.017, 1.0);
  }
  long double ref = 0.0L;
  for (double t : v) ref += t;
  CHECK(pairwise_sum(v) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-14));
}

TEST_SUITE_END();
