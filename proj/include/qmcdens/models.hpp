// Test models as maps g : [0,1)^s -> R, the standard-normal inverse CDF, and
// the multinormal path constructions behind the lognormal-sum model.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qmcdens {

// Phi^{-1}(u) by rational approximation plus one Halley refinement;
// |error| < 1e-9 over (0,1).  u in {0,1} is clamped to -8.2/+8.2 and counted
// (see inv_normal_clamp_count); u outside [0,1] throws std::domain_error.
double inv_normal_cdf(double u);
std::uint64_t inv_normal_clamp_count();
void reset_inv_normal_clamp_count();

double normal_cdf(double z);
double normal_pdf(double z);

struct Model {
  std::string name;
  int s = 1;
  std::function<double(std::span<const double>)> g;
  double a = 0.0, b = 1.0;  // estimation interval
  std::function<double(double)> exact_density;  // empty when unknown
  double exact_Rf2 = -1.0;                      // < 0 when unknown
  bool monotone = false;  // coordinatewise nondecreasing (after normalization)

  bool has_exact_density() const { return static_cast<bool>(exact_density); }
  double eval(std::span<const double> u) const { return g(u); }
};

// X = sum_j a_j Phi^{-1}(u_j) / sigma with sigma^2 = sum a_j^2; the density
// of X is standard normal for every s.  Negative weights are direction-
// normalized (u_j -> 1 - u_j), so g is nondecreasing in every coordinate.
Model sum_of_normals(int s, std::span<const double> weights,
                     double a = -2.0, double b = 2.0);
Model sum_of_normals(int s, double a = -2.0, double b = 2.0);  // equal weights

// Exact R(f'') of the standard normal over [-b, b]:
// [ -b(2b^2-1)e^{-b^2} + 3 int_0^b e^{-x^2} dx ] / (4 pi).
double exact_normal_Rf2(double b);

struct CantileverParams {
  double L = 100.0, w = 4.0, t = 2.0;
  double D0 = 2.2535;
  double E_mean = 2.9e7, E_sd = 1.45e6;
  double X_mean = 500.0, X_sd = 100.0;
  double Y_mean = 1000.0, Y_sd = 100.0;
  double a = 0.407, b = 1.515;
};

// Relative displacement D/D0 - 1 of a cantilever beam under random loads and
// Young's modulus (s = 3).  Strictly decreasing in E, increasing in X and Y;
// the E coordinate is flipped so g is nondecreasing.
Model cantilever(const CantileverParams& p = {});

enum class PathConstruction { PCA, BrownianBridge, Sequential };

struct GbmSpec {
  int s = 12;
  double s0 = 100.0;
  double strike = 101.0;
  double sigma = 0.12136;
  double mu = 0.1;
  std::vector<double> weights;  // empty = s0/s for all j
  PathConstruction path = PathConstruction::PCA;
  double a = 0.0, b = 27.13;
};

// X~ = sum_j w_j exp(Y_j) - K where Y is the discretely observed log-price
// path of a geometric Brownian motion, generated from a factorization
// C = A A^T of the Brownian covariance chosen by spec.path.  Realizations
// below 0 are kept; they feed the KDE near the boundary.
Model lognormal_sum(const GbmSpec& spec = {});

// The factor A used by lognormal_sum (row i, factor k at [i*s + k]).
std::vector<double> gbm_factor(const GbmSpec& spec);
// C_{ij} = sigma^2 min(t_i, t_j), t_j = j/s.
std::vector<double> gbm_covariance(const GbmSpec& spec);

// Symmetric eigendecomposition helper (cyclic Jacobi), eigenvalues
// descending; columns of V are the eigenvectors.
void jacobi_eigen(std::vector<double>& A, int n, std::vector<double>& eigenvalues,
                  std::vector<double>& V);

}  // namespace qmcdens
