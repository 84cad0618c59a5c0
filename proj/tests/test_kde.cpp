#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "qmcdens/kde.hpp"

using namespace qmcdens;

namespace {

std::vector<double> normal_sample(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  for (auto& x : v) x = nd(gen);
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<double> grid(double a, double b, int nodes) {
  std::vector<double> v(nodes);
  for (int i = 0; i < nodes; ++i)
    v[i] = a + (b - a) * static_cast<double>(i) / (nodes - 1);
  return v;
}

}  // namespace

TEST_SUITE_BEGIN("kde");

TEST_CASE("single point definition") {
  GaussianKernel k;
  std::vector<double> sample{0.7};
  for (double h : {0.1, 1.0, 3.0}) {
    auto v = kde_evaluate(sample, h, k, std::vector<double>{0.7});
    CHECK(v[0] == doctest::Approx(k.at_zero() / h).epsilon(1e-15));
  }
}

TEST_CASE("two-point direct sum") {
  GaussianKernel k;
  std::vector<double> sample{-1.0, 1.0};
  auto v = kde_evaluate(sample, 1.0, k, std::vector<double>{0.0});
  CHECK(v[0] == doctest::Approx(0.24197072451914337).epsilon(1e-10));
}

TEST_CASE("brute-force equivalence at n <= 1e3") {
  GaussianKernel k;
  for (std::size_t n : {10u, 257u, 1000u}) {
    auto sample = normal_sample(n, 17);
    auto xs = grid(-3, 3, 101);
    for (double h : {0.05, 0.3, 1.5}) {
      auto fast = kde_evaluate(sample, h, k, xs);
      auto slow = oracles::brute_kde(sample, h, xs);
      for (std::size_t e = 0; e < xs.size(); ++e)
        CHECK(fast[e] == doctest::Approx(slow[e]).epsilon(1e-12));
    }
  }
}

TEST_CASE("normalization: quadrature of f_hat is 1") {
  GaussianKernel k;
  auto sample = normal_sample(4096, 3);
  const double h = 0.2;
  double lo = sample.front() - 10.0 * h, hi = sample.back() + 10.0 * h;
  auto xs = grid(lo, hi, 8193);
  auto v = kde_evaluate(sample, h, k, xs);
  // Simpson over the evaluation grid
  double dx = (hi - lo) / (8193 - 1);
  double sum = v.front() + v.back();
  for (int i = 1; i < 8192; ++i) sum += ((i % 2) ? 4.0 : 2.0) * v[i];
  CHECK(sum * dx / 3.0 == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("derivative estimator definition and finite differences") {
  GaussianKernel k;
  std::vector<double> sample{0.0};
  auto d0 = kde_derivative(sample, 0.5, 1, k, std::vector<double>{0.0});
  CHECK(d0[0] == 0.0);  // k'(0) = 0
  auto dx = kde_derivative(sample, 0.5, 1, k, std::vector<double>{0.3});
  CHECK(dx[0] == doctest::Approx(k.deriv(1, 0.6) / 0.25).epsilon(1e-12));

  auto big = normal_sample(2000, 9);
  auto xs = grid(-2, 2, 41);
  const double h = 0.25, step = 1e-4;

  // r=1 vs central difference of the KDE
  auto d1 = kde_derivative(big, h, 1, k, xs);
  for (std::size_t e = 0; e < xs.size(); ++e) {
    auto up = kde_evaluate(big, h, k, std::vector<double>{xs[e] + step});
    auto dn = kde_evaluate(big, h, k, std::vector<double>{xs[e] - step});
    double fd = (up[0] - dn[0]) / (2 * step);
    CHECK(d1[e] == doctest::Approx(fd).epsilon(1e-5));
  }

  // r=2 vs second central difference
  auto d2 = kde_derivative(big, h, 2, k, xs);
  for (std::size_t e = 0; e < xs.size(); ++e) {
    auto up = kde_evaluate(big, h, k, std::vector<double>{xs[e] + step});
    auto mid = kde_evaluate(big, h, k, std::vector<double>{xs[e]});
    auto dn = kde_evaluate(big, h, k, std::vector<double>{xs[e] - step});
    double fd = (up[0] - 2 * mid[0] + dn[0]) / (step * step);
    CHECK(d2[e] == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("r=1 at the mode of a large normal sample is near 0") {
  GaussianKernel k;
  auto sample = normal_sample(1 << 15, 21);
  const double h = 0.15;
  auto d = kde_derivative(sample, h, 1, k, std::vector<double>{0.0});
  // Var[f_hat'(0)] ~ mu0((k')^2) f(0) / (n h^3)
  double se = std::sqrt(k.deriv_sq_mass(1) * 0.4 /
                        (static_cast<double>(sample.size()) * h * h * h));
  CHECK(std::fabs(d[0]) < 3.0 * se + 1e-3);
}

TEST_CASE("linearity in the sample") {
  GaussianKernel k;
  auto s1 = normal_sample(500, 31);
  auto s2 = normal_sample(500, 32);
  std::vector<double> merged(s1);
  merged.insert(merged.end(), s2.begin(), s2.end());
  std::sort(merged.begin(), merged.end());
  auto xs = grid(-2, 2, 33);
  const double h = 0.3;
  auto f1 = kde_evaluate(s1, h, k, xs);
  auto f2 = kde_evaluate(s2, h, k, xs);
  auto fm = kde_evaluate(merged, h, k, xs);
  for (std::size_t e = 0; e < xs.size(); ++e)
    CHECK(fm[e] == doctest::Approx(0.5 * (f1[e] + f2[e])).epsilon(1e-15));
}

TEST_CASE("shift equivariance and scaling") {
  GaussianKernel k;
  auto sample = normal_sample(300, 5);
  auto xs = grid(-1.5, 1.5, 21);
  const double h = 0.4, shift = 2.75, scale = 3.0;
  auto base = kde_evaluate(sample, h, k, xs);

  std::vector<double> shifted(sample), xs_shift(xs);
  for (auto& v : shifted) v += shift;
  for (auto& v : xs_shift) v += shift;
  auto fs = kde_evaluate(shifted, h, k, xs_shift);
  for (std::size_t e = 0; e < xs.size(); ++e)
    CHECK(fs[e] == doctest::Approx(base[e]).epsilon(1e-12));

  std::vector<double> scaled(sample), xs_scale(xs);
  for (auto& v : scaled) v *= scale;
  for (auto& v : xs_scale) v *= scale;
  auto fc = kde_evaluate(scaled, scale * h, k, xs_scale);
  for (std::size_t e = 0; e < xs.size(); ++e)
    CHECK(fc[e] == doctest::Approx(base[e] / scale).epsilon(1e-12));
}

TEST_CASE("input validation") {
  GaussianKernel k;
  std::vector<double> sorted{0.0, 1.0};
  std::vector<double> unsorted{1.0, 0.0};
  std::vector<double> xs{0.5};
  CHECK_THROWS_AS(kde_evaluate(sorted, 0.0, k, xs), std::invalid_argument);
  CHECK_THROWS_AS(kde_evaluate(sorted, -1.0, k, xs), std::invalid_argument);
  CHECK_THROWS_AS(kde_evaluate(unsorted, 0.5, k, xs), std::invalid_argument);
  CHECK_THROWS_AS(kde_derivative(sorted, 0.5, 0, k, xs), std::invalid_argument);
}

TEST_SUITE_END();
