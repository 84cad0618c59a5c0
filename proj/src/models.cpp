#include "qmcdens/models.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "qmcdens/kernel.hpp"

namespace qmcdens {

namespace {

std::atomic<std::uint64_t> g_clamp_count{0};

constexpr double kClampZ = 8.2;

// Acklam's rational approximation to Phi^{-1}.
double inv_normal_approx(double u) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;
  if (u < plow) {
    double q = std::sqrt(-2.0 * std::log(u));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (u > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - u));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = u - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double inv_normal_cdf(double u) {
  if (u < 0.0 || u > 1.0 || std::isnan(u))
    throw std::domain_error("inv_normal_cdf: u must lie in (0,1)");
  if (u == 0.0 || u == 1.0) {
    g_clamp_count.fetch_add(1, std::memory_order_relaxed);
    return u == 0.0 ? -kClampZ : kClampZ;
  }
  double x = inv_normal_approx(u);
  // one Halley step against the full-precision CDF
  double e = normal_cdf(x) - u;
  double t = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  return x - t / (1.0 + 0.5 * x * t);
}

std::uint64_t inv_normal_clamp_count() {
  return g_clamp_count.load(std::memory_order_relaxed);
}

void reset_inv_normal_clamp_count() {
  g_clamp_count.store(0, std::memory_order_relaxed);
}

Model sum_of_normals(int s, std::span<const double> weights, double a, double b) {
  if (s < 1) throw std::invalid_argument("sum_of_normals: s must be >= 1");
  if (static_cast<int>(weights.size()) != s)
    throw std::invalid_argument("sum_of_normals: need one weight per coordinate");
  double ss = 0.0;
  for (double w : weights) ss += w * w;
  if (ss == 0.0)
    throw std::invalid_argument("sum_of_normals: weights must not all be zero");
  const double inv_sigma = 1.0 / std::sqrt(ss);
  // direction normalization: |a_j| with u_j -> 1-u_j leaves the law of X
  // unchanged and makes g nondecreasing in every coordinate
  std::vector<double> c(weights.begin(), weights.end());
  for (double& w : c) w = std::fabs(w) * inv_sigma;

  Model m;
  m.name = "normal-sum";
  m.s = s;
  m.a = a;
  m.b = b;
  m.monotone = true;
  m.g = [c](std::span<const double> u) {
    double x = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j)
      if (c[j] != 0.0) x += c[j] * inv_normal_cdf(u[j]);
    return x;
  };
  m.exact_density = [](double x) { return normal_pdf(x); };
  m.exact_Rf2 = simpson(
      [](double x) {
        double f2 = (x * x - 1.0) * normal_pdf(x);
        return f2 * f2;
      },
      a, b, 4097);
  return m;
}

Model sum_of_normals(int s, double a, double b) {
  std::vector<double> w(static_cast<std::size_t>(s), 1.0);
  return sum_of_normals(s, w, a, b);
}

double exact_normal_Rf2(double b) {
  if (!(b > 0.0)) throw std::invalid_argument("exact_normal_Rf2: b must be > 0");
  double tail = simpson([](double x) { return std::exp(-x * x); }, 0.0, b, 2049);
  return (-b * (2.0 * b * b - 1.0) * std::exp(-b * b) + 3.0 * tail) / (4.0 * M_PI);
}

Model cantilever(const CantileverParams& p) {
  Model m;
  m.name = "cantilever";
  m.s = 3;
  m.a = p.a;
  m.b = p.b;
  m.monotone = true;
  const double scale = 4.0 * p.L * p.L * p.L / (p.w * p.t);
  const double t4 = std::pow(p.t, 4), w4 = std::pow(p.w, 4);
  m.g = [p, scale, t4, w4](std::span<const double> u) {
    // D is decreasing in E; flip that coordinate to keep g nondecreasing
    double E = p.E_mean + p.E_sd * inv_normal_cdf(1.0 - u[0]);
    double X = p.X_mean + p.X_sd * inv_normal_cdf(u[1]);
    double Y = p.Y_mean + p.Y_sd * inv_normal_cdf(u[2]);
    double D = scale / E * std::sqrt(Y * Y / t4 + X * X / w4);
    return D / p.D0 - 1.0;
  };
  return m;
}

void jacobi_eigen(std::vector<double>& A, int n, std::vector<double>& eigenvalues,
                  std::vector<double>& V) {
  auto at = [&](std::vector<double>& M, int i, int j) -> double& {
    return M[static_cast<std::size_t>(i) * n + j];
  };
  V.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) at(V, i, i) = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(A, i, j) * at(A, i, j);
    if (off < 1e-26) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = at(A, p, q);
        if (apq == 0.0) continue;
        double theta = (at(A, q, q) - at(A, p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double cth = 1.0 / std::sqrt(t * t + 1.0);
        double sth = t * cth;
        for (int k = 0; k < n; ++k) {
          double akp = at(A, k, p), akq = at(A, k, q);
          at(A, k, p) = cth * akp - sth * akq;
          at(A, k, q) = sth * akp + cth * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = at(A, p, k), aqk = at(A, q, k);
          at(A, p, k) = cth * apk - sth * aqk;
          at(A, q, k) = sth * apk + cth * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = at(V, k, p), vkq = at(V, k, q);
          at(V, k, p) = cth * vkp - sth * vkq;
          at(V, k, q) = sth * vkp + cth * vkq;
        }
      }
    }
  }
  eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) eigenvalues[i] = at(A, i, i);

  // sort eigenvalues descending, permuting columns of V accordingly
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return eigenvalues[i] > eigenvalues[j]; });
  std::vector<double> ev(n), Vs(static_cast<std::size_t>(n) * n);
  for (int c = 0; c < n; ++c) {
    ev[c] = eigenvalues[order[c]];
    for (int r = 0; r < n; ++r) Vs[static_cast<std::size_t>(r) * n + c] = at(V, r, order[c]);
  }
  eigenvalues = std::move(ev);
  V = std::move(Vs);
}

std::vector<double> gbm_covariance(const GbmSpec& spec) {
  const int s = spec.s;
  std::vector<double> C(static_cast<std::size_t>(s) * s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      double tmin = static_cast<double>(std::min(i, j) + 1) / s;
      C[static_cast<std::size_t>(i) * s + j] = spec.sigma * spec.sigma * tmin;
    }
  return C;
}

std::vector<double> gbm_factor(const GbmSpec& spec) {
  const int s = spec.s;
  std::vector<double> A(static_cast<std::size_t>(s) * s, 0.0);
  switch (spec.path) {
    case PathConstruction::PCA: {
      std::vector<double> C = gbm_covariance(spec);
      std::vector<double> lambda, V;
      jacobi_eigen(C, s, lambda, V);
      for (int k = 0; k < s; ++k) {
        double sq = std::sqrt(std::max(lambda[k], 0.0));
        for (int i = 0; i < s; ++i)
          A[static_cast<std::size_t>(i) * s + k] = V[static_cast<std::size_t>(i) * s + k] * sq;
      }
      break;
    }
    case PathConstruction::Sequential: {
      // Cholesky of the min covariance: B(t_i) = sum_{k<=i} sqrt(dt) z_k
      const double sdt = spec.sigma * std::sqrt(1.0 / s);
      for (int i = 0; i < s; ++i)
        for (int k = 0; k <= i; ++k) A[static_cast<std::size_t>(i) * s + k] = sdt;
      break;
    }
    case PathConstruction::BrownianBridge: {
      // columns in bisection order: terminal point first, then midpoints
      std::vector<double> t(static_cast<std::size_t>(s) + 1);
      for (int i = 0; i <= s; ++i) t[i] = static_cast<double>(i) / s;
      // row 0 is the fixed origin B(0) = 0
      std::vector<double> coeff(static_cast<std::size_t>(s + 1) * s, 0.0);
      int next_z = 0;
      coeff[static_cast<std::size_t>(s) * s + next_z++] = std::sqrt(t[s]);
      std::deque<std::pair<int, int>> queue{{0, s}};
      while (!queue.empty()) {
        auto [l, r] = queue.front();
        queue.pop_front();
        if (r - l <= 1) continue;
        int mid = (l + r) / 2;
        double wl = (t[r] - t[mid]) / (t[r] - t[l]);
        double wr = (t[mid] - t[l]) / (t[r] - t[l]);
        double sd = std::sqrt((t[mid] - t[l]) * (t[r] - t[mid]) / (t[r] - t[l]));
        for (int k = 0; k < s; ++k)
          coeff[static_cast<std::size_t>(mid) * s + k] =
              wl * coeff[static_cast<std::size_t>(l) * s + k] +
              wr * coeff[static_cast<std::size_t>(r) * s + k];
        coeff[static_cast<std::size_t>(mid) * s + next_z++] += sd;
        queue.emplace_back(l, mid);
        queue.emplace_back(mid, r);
      }
      for (int i = 1; i <= s; ++i)
        for (int k = 0; k < s; ++k)
          A[static_cast<std::size_t>(i - 1) * s + k] =
              spec.sigma * coeff[static_cast<std::size_t>(i) * s + k];
      break;
    }
  }
  return A;
}

Model lognormal_sum(const GbmSpec& spec) {
  if (spec.s < 1) throw std::invalid_argument("lognormal_sum: s must be >= 1");
  if (!(spec.sigma > 0.0)) throw std::invalid_argument("lognormal_sum: sigma must be > 0");
  std::vector<double> w = spec.weights;
  if (w.empty()) w.assign(static_cast<std::size_t>(spec.s), spec.s0 / spec.s);
  if (static_cast<int>(w.size()) != spec.s)
    throw std::invalid_argument("lognormal_sum: need one weight per observation");
  for (double wi : w)
    if (!(wi > 0.0)) throw std::invalid_argument("lognormal_sum: weights must be positive");

  const int s = spec.s;
  std::vector<double> mean(static_cast<std::size_t>(s));
  for (int j = 0; j < s; ++j)
    mean[j] = (spec.mu - 0.5 * spec.sigma * spec.sigma) * (j + 1.0) / s;
  std::vector<double> A = gbm_factor(spec);

  Model m;
  m.name = "option";
  m.s = s;
  m.a = spec.a;
  m.b = spec.b;
  // PCA columns mix signs; the triangular constructions have nonnegative
  // coefficients and positive weights, hence monotone
  m.monotone = spec.path != PathConstruction::PCA;
  const double strike = spec.strike;
  m.g = [s, w, mean, A, strike](std::span<const double> u) {
    thread_local std::vector<double> z;
    z.resize(static_cast<std::size_t>(s));
    for (int j = 0; j < s; ++j) z[j] = inv_normal_cdf(u[j]);
    double x = 0.0;
    for (int i = 0; i < s; ++i) {
      double y = mean[i];
      const double* row = A.data() + static_cast<std::size_t>(i) * s;
      for (int k = 0; k < s; ++k) y += row[k] * z[k];
      x += w[i] * std::exp(y);
    }
    return x - strike;
  };
  return m;
}

}  // namespace qmcdens
