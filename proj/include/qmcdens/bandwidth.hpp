// Plug-in bandwidth selection: normal-reference start for a high-order
// roughness functional, derivative-KDE stages down to R(f''), and the
// resulting AMISE-optimal bandwidth.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qmcdens/kernel.hpp"

namespace qmcdens {

struct PluginStage {
  int r;              // derivative order estimated at this stage
  double h;           // bandwidth used for the derivative KDE
  double R_estimate;  // resulting estimate of R(f^(r))
};

struct PluginResult {
  double mu_hat = 0.0;
  double sigma_hat = 0.0;
  double Rf2_hat = 0.0;  // final estimate of R(f'')
  double B_hat = 0.0;    // (mu_2(k))^2 R(f'') / 4
  double h_star = 0.0;   // AMISE-optimal KDE bandwidth from B_hat
  std::vector<PluginStage> chain;
};

// int_a^b (phi_{mu,sigma}^(r)(x))^2 dx for the normal density, by quadrature
// of the Hermite-form derivative.  r in 1..6.
double normal_reference_R(int r, double mu, double sigma, double a, double b);

// Asymptotically optimal bandwidth for the r-th derivative KDE given
// R_next = R(f^(r+2)):
//   h = [ (2r+1) mu_0((k^(r))^2) / ((mu_2(k))^2 R_next n) ]^(1/(2r+5))
double stage_bandwidth(int r, double R_next, std::size_t n,
                       const GaussianKernel& kernel);

// AMISE-optimal KDE bandwidth h = (Q/n)^(1/5) with
// Q = mu_0(k^2) / ((mu_2(k))^2 R(f'')) and R(f'') = 4B/(mu_2(k))^2.
double mc_optimal_h(double B, std::size_t n, const GaussianKernel& kernel);

// Full plug-in recursion with a normal-reference start at order r0+2 and
// derivative-KDE stages r0, r0-2, ..., 2.  The sample need not be sorted;
// requires n >= 100 and a nondegenerate sample.
PluginResult plugin_chain(std::span<const double> sample, double a, double b,
                          const GaussianKernel& kernel, int r0 = 2);

}  // namespace qmcdens
