// Closed-form asymptotic IV/MISE formulas and bounds as evaluable
// diagnostics.
#pragma once

#include <cstddef>

#include "qmcdens/kernel.hpp"

namespace qmcdens {

// Leading MC asymptotic IV term p0 mu_0(k^2)/(n h); when R(f) >= 0 is
// supplied the corrected form subtracts R(f)/n.
double mc_aiv(std::size_t n, double h, double p0, const GaussianKernel& kernel,
              double Rf = -1.0);

// Stratification IV bound (b-a) s k(0)^2 h^{-2} n^{-(s+1)/s}.
// Requires n to be a perfect s-th power.
double strat_iv_bound(std::size_t n, double h, int s, double a, double b,
                      const GaussianKernel& kernel);

struct StratMiseBound {
  double kappa;  // optimal-h constant, h = kappa n^{-(s+1)/(6s)}
  double h_opt;  // at the supplied n
  double K;      // bound constant, MISE bound = K n^{-nu}
  double nu;     // (2/3)(s+1)/s
};

// Minimizing the stratification IV bound plus the AISB:
// kappa^6 = (b-a) s k(0)^2 / ((mu_2(k))^2 R(f'')/2),
// K = (b-a) s k(0)^2 kappa^{-2} + (mu_2(k))^2 R(f'') kappa^4 / 4.
StratMiseBound strat_mise_bound(std::size_t n, int s, double a, double b,
                                double Rf2, const GaussianKernel& kernel);

// Nested-uniform-scramble IV bound 2^t 3^s mu_0(k^2)/(n h) for a randomized
// (t,m,s)-net in base 2.  The net quality parameter t is user-supplied.
double nus_iv_bound(std::size_t n, double h, int t, int s,
                    const GaussianKernel& kernel);

struct KhRates {
  double beta;           // IV ~ n^{-beta+eps}
  double delta;          // IV ~ h^{-delta} (= 2s)
  double mise_exponent;  // MISE = O(n^{-4/(2+s)+eps})
  double h_exponent;     // optimal h = Theta(n^{-1/(2+s)})
};

// Rates implied by the Koksma-Hlawka variation bound.
KhRates kh_rates(int s);

}  // namespace qmcdens
