#include "qmcdens/kde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmcdens {

namespace {

void check_inputs(std::span<const double> sample, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("kde: bandwidth must be > 0");
  if (sample.empty()) throw std::invalid_argument("kde: empty sample");
  if (!std::is_sorted(sample.begin(), sample.end()))
    throw std::invalid_argument("kde: sample must be sorted ascending");
}

}  // namespace

std::vector<double> kde_evaluate(std::span<const double> sample, double h,
                                 const GaussianKernel& kernel,
                                 std::span<const double> xs) {
  check_inputs(sample, h);
  const double window = kernel.cutoff() * h;
  const double norm = kInvSqrt2Pi / (static_cast<double>(sample.size()) * h);
  std::vector<double> out(xs.size());
  std::vector<double> buf;
  for (std::size_t e = 0; e < xs.size(); ++e) {
    const double x = xs[e];
    auto lo = std::lower_bound(sample.begin(), sample.end(), x - window);
    auto hi = std::upper_bound(lo, sample.end(), x + window);
    const std::size_t w = static_cast<std::size_t>(hi - lo);
    buf.resize(w);
    for (std::size_t i = 0; i < w; ++i) {
      const double z = (x - lo[i]) / h;
      buf[i] = -0.5 * z * z;
    }
    detail::vexp(buf.data(), w);
    out[e] = norm * pairwise_sum(buf.data(), w);
  }
  return out;
}

std::vector<double> kde_derivative(std::span<const double> sample, double h,
                                   int r, const GaussianKernel& kernel,
                                   std::span<const double> xs) {
  check_inputs(sample, h);
  if (r < 1) throw std::invalid_argument("kde_derivative: r must be >= 1");
  const double window = kernel.cutoff() * h;
  const double sign = (r % 2 == 0) ? 1.0 : -1.0;
  const double norm =
      sign * kInvSqrt2Pi /
      (static_cast<double>(sample.size()) * std::pow(h, r + 1));
  std::vector<double> out(xs.size());
  std::vector<double> buf, zs;
  for (std::size_t e = 0; e < xs.size(); ++e) {
    const double x = xs[e];
    auto lo = std::lower_bound(sample.begin(), sample.end(), x - window);
    auto hi = std::upper_bound(lo, sample.end(), x + window);
    const std::size_t w = static_cast<std::size_t>(hi - lo);
    buf.resize(w);
    zs.resize(w);
    for (std::size_t i = 0; i < w; ++i) {
      const double z = (x - lo[i]) / h;
      zs[i] = z;
      buf[i] = -0.5 * z * z;
    }
    detail::vexp(buf.data(), w);
    for (std::size_t i = 0; i < w; ++i) buf[i] *= hermite_he(r, zs[i]);
    out[e] = norm * pairwise_sum(buf.data(), w);
  }
  return out;
}

}  // namespace qmcdens
