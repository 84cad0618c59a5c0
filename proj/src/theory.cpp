#include "qmcdens/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace qmcdens {

double mc_aiv(std::size_t n, double h, double p0, const GaussianKernel& kernel,
              double Rf) {
  if (n < 1) throw std::invalid_argument("mc_aiv: n must be >= 1");
  if (!(h > 0.0)) throw std::invalid_argument("mc_aiv: h must be > 0");
  if (!(p0 > 0.0 && p0 <= 1.0))
    throw std::invalid_argument("mc_aiv: p0 must lie in (0,1]");
  double v = p0 * kernel.mu0_sq() / (static_cast<double>(n) * h);
  if (Rf >= 0.0) v -= Rf / static_cast<double>(n);
  return v;
}

double strat_iv_bound(std::size_t n, double h, int s, double a, double b,
                      const GaussianKernel& kernel) {
  if (s < 1) throw std::invalid_argument("strat_iv_bound: s must be >= 1");
  if (!(h > 0.0)) throw std::invalid_argument("strat_iv_bound: h must be > 0");
  if (!(a < b)) throw std::invalid_argument("strat_iv_bound: need a < b");
  const auto q = static_cast<std::size_t>(
      std::llround(std::pow(static_cast<double>(n), 1.0 / s)));
  std::size_t check = 1;
  for (int j = 0; j < s; ++j) check *= q;
  if (check != n)
    throw std::invalid_argument("strat_iv_bound: n must be a perfect s-th power");
  const double k0 = kernel.at_zero();
  return (b - a) * s * k0 * k0 / (h * h) *
         std::pow(static_cast<double>(n), -(s + 1.0) / s);
}

StratMiseBound strat_mise_bound(std::size_t n, int s, double a, double b,
                                double Rf2, const GaussianKernel& kernel) {
  if (s < 1) throw std::invalid_argument("strat_mise_bound: s must be >= 1");
  if (!(Rf2 > 0.0)) throw std::invalid_argument("strat_mise_bound: Rf2 must be > 0");
  if (!(a < b)) throw std::invalid_argument("strat_mise_bound: need a < b");
  const double k0 = kernel.at_zero();
  const double mu2 = kernel.mu2();
  const double iv_const = (b - a) * s * k0 * k0;
  StratMiseBound r;
  r.kappa = std::pow(iv_const / (mu2 * mu2 * Rf2 / 2.0), 1.0 / 6.0);
  r.nu = (2.0 / 3.0) * (s + 1.0) / s;
  r.K = iv_const * std::pow(r.kappa, -2.0) +
        mu2 * mu2 * Rf2 * std::pow(r.kappa, 4.0) / 4.0;
  r.h_opt = r.kappa * std::pow(static_cast<double>(n), -(s + 1.0) / (6.0 * s));
  return r;
}

double nus_iv_bound(std::size_t n, double h, int t, int s,
                    const GaussianKernel& kernel) {
  if (t < 0) throw std::invalid_argument("nus_iv_bound: t must be >= 0");
  if (s < 1) throw std::invalid_argument("nus_iv_bound: s must be >= 1");
  if (!(h > 0.0)) throw std::invalid_argument("nus_iv_bound: h must be > 0");
  return std::ldexp(1.0, t) * std::pow(3.0, s) * kernel.mu0_sq() /
         (static_cast<double>(n) * h);
}

KhRates kh_rates(int s) {
  if (s < 1) throw std::invalid_argument("kh_rates: s must be >= 1");
  return {2.0, 2.0 * s, 4.0 / (2.0 + s), 1.0 / (2.0 + s)};
}

}  // namespace qmcdens
