// Gaussian smoothing kernel with analytic derivatives and moments, plus the
// quadrature helpers used for roughness functionals R(psi) = int psi^2.
#pragma once

#include <cmath>
#include <functional>
#include <span>

namespace qmcdens {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;

// Standard normal density as the smoothing kernel.  Evaluation is truncated
// at |x| > cutoff() where k(x) < 8e-23; this is what makes windowed KDE
// sweeps over sorted samples possible.
class GaussianKernel {
public:
  static constexpr double cutoff() { return 10.0; }

  double operator()(double x) const {
    if (std::fabs(x) > cutoff()) return 0.0;
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
  }

  // r-th derivative, k^(r)(x) = (-1)^r He_r(x) k(x) with He_r the
  // probabilists' Hermite polynomial.
  double deriv(int r, double x) const;

  double at_zero() const { return kInvSqrt2Pi; }

  // mu_2(k) = int x^2 k(x) dx
  double mu2() const { return 1.0; }

  // mu_0(k^2) = int k(x)^2 dx = 1/(2 sqrt(pi))
  double mu0_sq() const { return 0.28209479177387814; }

  // mu_0((k^(r))^2) = (2r)! / (2^(2r+1) r! sqrt(pi))
  double deriv_sq_mass(int r) const;
};

// He_r(x), probabilists' Hermite polynomial by recurrence.
double hermite_he(int r, double x);

// Composite Simpson quadrature of f over [a, b] with an odd node count.
double simpson(const std::function<double(double)>& f, double a, double b,
               int nodes);

// R(psi) = int_a^b psi(x)^2 dx from psi sampled on a uniform grid over [a, b].
// The grid must have an odd number of nodes (129 or more for the stated
// O(grid^4) accuracy).
double roughness(std::span<const double> values, double a, double b);

// Deterministic summation used everywhere a float reduction feeds reported
// numbers: recursive pairwise with a fixed sequential base block, so the
// result does not depend on how callers partition work.
double pairwise_sum(const double* p, std::size_t n);
inline double pairwise_sum(std::span<const double> v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace qmcdens
