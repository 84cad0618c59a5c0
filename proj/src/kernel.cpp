#include "qmcdens/kernel.hpp"

#include <stdexcept>

namespace qmcdens {

double hermite_he(int r, double x) {
  if (r < 0) throw std::invalid_argument("hermite_he: r must be >= 0");
  double hm = 1.0;  // He_0
  if (r == 0) return hm;
  double h = x;  // He_1
  for (int k = 1; k < r; ++k) {
    double next = x * h - static_cast<double>(k) * hm;
    hm = h;
    h = next;
  }
  return h;
}

double GaussianKernel::deriv(int r, double x) const {
  if (r < 0) throw std::invalid_argument("GaussianKernel::deriv: r must be >= 0");
  if (std::fabs(x) > cutoff()) return 0.0;
  double sign = (r % 2 == 0) ? 1.0 : -1.0;
  return sign * hermite_he(r, x) * kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double GaussianKernel::deriv_sq_mass(int r) const {
  if (r < 0) throw std::invalid_argument("deriv_sq_mass: r must be >= 0");
  // (2r)! / (2^(2r+1) r! sqrt(pi))
  double v = 1.0;
  for (int k = r + 1; k <= 2 * r; ++k) v *= static_cast<double>(k);  // (2r)!/r!
  return v * std::pow(2.0, -(2 * r + 1)) / std::sqrt(M_PI);
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int nodes) {
  if (!(a < b)) throw std::invalid_argument("simpson: need a < b");
  if (nodes < 3 || nodes % 2 == 0)
    throw std::invalid_argument("simpson: node count must be odd and >= 3");
  const double dx = (b - a) / (nodes - 1);
  double sum = f(a) + f(b);
  for (int i = 1; i < nodes - 1; ++i) {
    double w = (i % 2 == 1) ? 4.0 : 2.0;
    sum += w * f(a + i * dx);
  }
  return sum * dx / 3.0;
}

double roughness(std::span<const double> values, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("roughness: need a < b");
  const std::size_t n = values.size();
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("roughness: grid must have an odd node count >= 3");
  const double dx = (b - a) / static_cast<double>(n - 1);
  double sum = values[0] * values[0] + values[n - 1] * values[n - 1];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double w = (i % 2 == 1) ? 4.0 : 2.0;
    sum += w * values[i] * values[i];
  }
  return sum * dx / 3.0;
}

double pairwise_sum(const double* p, std::size_t n) {
  if (n <= 64) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(p, half) + pairwise_sum(p + half, n - half);
}

}  // namespace qmcdens
