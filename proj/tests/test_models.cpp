#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qmcdens/errors.hpp"
#include "qmcdens/models.hpp"
#include "qmcdens/pointset.hpp"
#include "qmcdens/rng.hpp"

using namespace qmcdens;

TEST_SUITE_BEGIN("models");

TEST_CASE("inverse normal cdf: reference values") {
  CHECK(inv_normal_cdf(0.5) == 0.0);
  CHECK(inv_normal_cdf(0.975) == doctest::Approx(1.9599640).epsilon(1e-7));
  CHECK(inv_normal_cdf(0.0013499) == doctest::Approx(-3.0).epsilon(1e-4 / 3.0));
  CHECK(inv_normal_cdf(0.841344746068543) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("inverse normal cdf: round trip on a 1e5 grid") {
  double max_err = 0.0;
  for (int i = 1; i < 100000; ++i) {
    double u = static_cast<double>(i) / 100000.0;
    max_err = std::max(max_err, std::fabs(normal_cdf(inv_normal_cdf(u)) - u));
  }
  CHECK(max_err < 1e-9);
  // deep tails round-trip too
  for (double u : {1e-12, 1e-9, 1e-300, 1.0 - 1e-12}) {
    double z = inv_normal_cdf(u);
    CHECK(normal_cdf(z) == doctest::Approx(u).epsilon(1e-6));
  }
}

TEST_CASE("inverse normal cdf: domain errors and clamping") {
  CHECK_THROWS_AS(inv_normal_cdf(-0.1), std::domain_error);
  CHECK_THROWS_AS(inv_normal_cdf(1.5), std::domain_error);
  reset_inv_normal_clamp_count();
  CHECK(inv_normal_cdf(0.0) == doctest::Approx(-8.2));
  CHECK(inv_normal_cdf(1.0) == doctest::Approx(8.2));
  CHECK(inv_normal_clamp_count() == 2);
  reset_inv_normal_clamp_count();
}

TEST_CASE("sum of normals: pointwise values") {
  Model m1 = sum_of_normals(1);
  double u1[] = {0.5};
  CHECK(m1.eval(u1) == 0.0);

  Model m2 = sum_of_normals(2);
  double u2[] = {0.841345, 0.841345};
  CHECK(m2.eval(u2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));

  std::vector<double> bad{0.0, 0.0};
  CHECK_THROWS_AS(sum_of_normals(2, bad), std::invalid_argument);

  // dyadic weights variant
  std::vector<double> w{0.5, 0.25, 0.125};
  Model mw = sum_of_normals(3, w);
  CHECK(mw.s == 3);
  CHECK(mw.monotone);
}

TEST_CASE("sum of normals: exact density and empirical CDF (KS)") {
  Model m = sum_of_normals(3);
  CHECK(m.exact_Rf2 == doctest::Approx(0.19018).epsilon(1e-4));
  PointSet ps = sample_mc(3, 1 << 16, 2024);
  std::vector<double> u(ps.n);
  for (std::size_t i = 0; i < ps.n; ++i) u[i] = normal_cdf(m.eval(ps.row(i)));
  CHECK(oracles::ks_uniform(u) < oracles::ks_crit_001(ps.n));
}

TEST_CASE("exact_normal_Rf2 values") {
  CHECK(exact_normal_Rf2(2.0) == doctest::Approx(0.19018).epsilon(3e-5));
  CHECK(exact_normal_Rf2(2.0) / 4.0 == doctest::Approx(0.04754).epsilon(3e-4));
  CHECK(exact_normal_Rf2(20.0) == doctest::Approx(0.21157).epsilon(1e-4));
  // full-line value via quadrature oracle of (f'')^2
  double full = oracles::integrate(
      [](double x) {
        double f2 = (x * x - 1) * normal_pdf(x);
        return f2 * f2;
      },
      -12, 12);
  CHECK(exact_normal_Rf2(12.0) == doctest::Approx(full).epsilon(1e-10));
}

TEST_CASE("cantilever: nominal value and interval") {
  Model m = cantilever();
  CHECK(m.s == 3);
  double u[] = {0.5, 0.5, 0.5};
  CHECK(m.eval(u) == doctest::Approx(0.92766).epsilon(1.1e-4 / 0.92766));
  CHECK(m.a == doctest::Approx(0.407));
  CHECK(m.b == doctest::Approx(1.515));
  CHECK(!m.has_exact_density());
}

TEST_CASE("cantilever: interval covers about 99% of the mass") {
  Model m = cantilever();
  PointSet ps = sample_mc(3, 1 << 16, 77);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < ps.n; ++i) {
    double x = m.eval(ps.row(i));
    if (x >= m.a && x <= m.b) ++inside;
  }
  double frac = static_cast<double>(inside) / static_cast<double>(ps.n);
  CHECK(frac > 0.985);
  CHECK(frac < 0.995);
}

TEST_CASE("gbm factorizations reproduce the covariance") {
  for (auto path : {PathConstruction::PCA, PathConstruction::BrownianBridge,
                    PathConstruction::Sequential}) {
    GbmSpec spec;
    spec.path = path;
    const int s = spec.s;
    std::vector<double> A = gbm_factor(spec);
    std::vector<double> C = gbm_covariance(spec);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        double dot = 0.0;
        for (int k = 0; k < s; ++k) dot += A[i * s + k] * A[j * s + k];
        CHECK(dot == doctest::Approx(C[i * s + j]).epsilon(1e-10));
      }
  }
}

TEST_CASE("gbm pca eigenvalues descending") {
  GbmSpec spec;
  std::vector<double> C = gbm_covariance(spec);
  std::vector<double> lambda, V;
  jacobi_eigen(C, spec.s, lambda, V);
  for (int k = 1; k < spec.s; ++k) CHECK(lambda[k - 1] >= lambda[k]);
  CHECK(lambda.back() > 0.0);
}

TEST_CASE("lognormal sum: mean and covariance against closed forms") {
  GbmSpec spec;  // PCA
  Model m = lognormal_sum(spec);
  CHECK(m.s == 12);
  CHECK(m.a == 0.0);
  CHECK(m.b == doctest::Approx(27.13));

  // reconstruct the path from the factor to inspect Y itself
  std::vector<double> A = gbm_factor(spec);
  const int s = spec.s;
  PointSet ps = sample_mc(s, 1 << 16, 555);
  std::vector<double> y12(ps.n), expy(ps.n);
  std::vector<std::vector<double>> Y(static_cast<std::size_t>(s));
  for (auto& col : Y) col.resize(ps.n);
  for (std::size_t i = 0; i < ps.n; ++i) {
    double z[12];
    for (int j = 0; j < s; ++j) z[j] = inv_normal_cdf(ps(i, j));
    for (int r = 0; r < s; ++r) {
      double v = (spec.mu - 0.5 * spec.sigma * spec.sigma) * (r + 1.0) / s;
      for (int k = 0; k < s; ++k) v += A[r * s + k] * z[k];
      Y[r][i] = v;
    }
    y12[i] = Y[s - 1][i];
    expy[i] = std::exp(y12[i]);
  }

  // E[exp(Y_s)] = e^mu within 3 standard errors
  double mean_e = oracles::mean(expy);
  double se = std::sqrt(oracles::variance(expy) / static_cast<double>(ps.n));
  CHECK(std::fabs(mean_e - std::exp(spec.mu)) < 3.0 * se);

  // Cov(Y_i, Y_j) = sigma^2 min(t_i,t_j) within 3 standard errors, all pairs
  const double n = static_cast<double>(ps.n);
  for (int i = 0; i < s; ++i) {
    double mi = oracles::mean(Y[i]);
    double vi = oracles::variance(Y[i]);
    for (int j = i; j < s; ++j) {
      double mj = oracles::mean(Y[j]);
      double vj = oracles::variance(Y[j]);
      double cov = 0.0;
      for (std::size_t r = 0; r < ps.n; ++r)
        cov += (Y[i][r] - mi) * (Y[j][r] - mj);
      cov /= (n - 1.0);
      double want = spec.sigma * spec.sigma * (std::min(i, j) + 1.0) / s;
      // Var of the sample covariance of a bivariate normal
      double se_cov = std::sqrt((vi * vj + cov * cov) / (n - 1.0));
      CHECK(std::fabs(cov - want) < 3.0 * se_cov);
    }
  }
}

TEST_CASE("lognormal sum: negative payoffs are kept") {
  Model m = lognormal_sum();
  double u[12];
  for (auto& v : u) v = 0.01;
  CHECK(m.eval(u) < 0.0);  // deep out-of-the-money path still evaluates
}

TEST_CASE("model monotonicity: finite-difference sign oracle") {
  auto check = [](const Model& m, bool expect) {
    SplitMix64 rng(314159);
    const double eps = 1e-4;
    bool all_nondecreasing = true;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> u(static_cast<std::size_t>(m.s));
      for (auto& v : u) v = 0.05 + 0.9 * rng.next_double();
      for (int j = 0; j < m.s; ++j) {
        std::vector<double> up(u);
        up[j] += eps;
        if (m.eval(up) < m.eval(u) - 1e-12) all_nondecreasing = false;
      }
    }
    CHECK(all_nondecreasing == expect);
  };
  check(sum_of_normals(2), true);
  std::vector<double> w{1.0, -0.5, 0.25};
  check(sum_of_normals(3, w), true);  // direction-normalized
  check(cantilever(), true);          // E coordinate flipped
  GbmSpec seq;
  seq.path = PathConstruction::Sequential;
  check(lognormal_sum(seq), true);
  GbmSpec bb;
  bb.path = PathConstruction::BrownianBridge;
  check(lognormal_sum(bb), true);
}

TEST_SUITE_END();
