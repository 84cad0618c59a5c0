#include "qmcdens/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qmcdens/errors.hpp"
#include "qmcdens/kde.hpp"

namespace qmcdens {

double normal_reference_R(int r, double mu, double sigma, double a, double b) {
  if (r < 1 || r > 6)
    throw std::invalid_argument("normal_reference_R: r must be in 1..6");
  if (!(sigma > 0.0))
    throw std::invalid_argument("normal_reference_R: sigma must be > 0");
  // phi_{mu,sigma}^(r)(x) = (-1)^r He_r(z) phi(z) / sigma^(r+1), z=(x-mu)/sigma
  const double scale = std::pow(sigma, -(r + 1));
  return simpson(
      [&](double x) {
        double z = (x - mu) / sigma;
        double d = hermite_he(r, z) * kInvSqrt2Pi * std::exp(-0.5 * z * z) * scale;
        return d * d;
      },
      a, b, 4097);
}

double stage_bandwidth(int r, double R_next, std::size_t n,
                       const GaussianKernel& kernel) {
  if (!(R_next > 0.0))
    throw std::invalid_argument("stage_bandwidth: R_next must be > 0");
  if (n < 2) throw std::invalid_argument("stage_bandwidth: n must be >= 2");
  const double mu2 = kernel.mu2();
  double num = (2.0 * r + 1.0) * kernel.deriv_sq_mass(r);
  double den = mu2 * mu2 * R_next * static_cast<double>(n);
  return std::pow(num / den, 1.0 / (2.0 * r + 5.0));
}

double mc_optimal_h(double B, std::size_t n, const GaussianKernel& kernel) {
  if (!(B > 0.0)) throw std::invalid_argument("mc_optimal_h: B must be > 0");
  const double mu2 = kernel.mu2();
  double Rf2 = 4.0 * B / (mu2 * mu2);
  double Q = kernel.mu0_sq() / (mu2 * mu2 * Rf2);
  return std::pow(Q / static_cast<double>(n), 0.2);
}

PluginResult plugin_chain(std::span<const double> sample, double a, double b,
                          const GaussianKernel& kernel, int r0) {
  if (sample.size() < 100)
    throw std::invalid_argument("plugin_chain: need n >= 100");
  if (!(a < b)) throw std::invalid_argument("plugin_chain: need a < b");
  if (r0 < 2 || r0 % 2 != 0)
    throw std::invalid_argument("plugin_chain: r0 must be even and >= 2");

  const std::size_t n = sample.size();
  PluginResult res;
  double sum = 0.0;
  for (double x : sample) sum += x;
  res.mu_hat = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double x : sample) ss += (x - res.mu_hat) * (x - res.mu_hat);
  res.sigma_hat = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(res.sigma_hat > 0.0))
    throw degenerate_sample_error("plugin_chain: sample has zero variance");

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());

  constexpr int kNodes = 1025;
  std::vector<double> grid(kNodes);
  for (int i = 0; i < kNodes; ++i)
    grid[i] = a + (b - a) * static_cast<double>(i) / (kNodes - 1);

  if (r0 + 2 > 6)
    throw std::invalid_argument("plugin_chain: r0 > 4 not supported");
  // normal-reference start for R(f^(r0+2))
  double R_next = normal_reference_R(r0 + 2, res.mu_hat, res.sigma_hat, a, b);
  for (int r = r0; r >= 2; r -= 2) {
    double h = stage_bandwidth(r, R_next, n, kernel);
    std::vector<double> deriv = kde_derivative(sorted, h, r, kernel, grid);
    double R_r = roughness(deriv, a, b);
    if (!(R_r > 0.0))
      throw degenerate_sample_error("plugin_chain: nonpositive roughness estimate");
    res.chain.push_back({r, h, R_r});
    R_next = R_r;
  }
  res.Rf2_hat = res.chain.back().R_estimate;
  const double mu2 = kernel.mu2();
  res.B_hat = mu2 * mu2 * res.Rf2_hat / 4.0;
  res.h_star = mc_optimal_h(res.B_hat, n, kernel);
  return res;
}

}  // namespace qmcdens
