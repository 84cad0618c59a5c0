// Kernel density estimator and derivative estimators, fast-evaluated on
// sorted samples through the kernel's truncation window.
#pragma once

#include <span>
#include <vector>

#include "qmcdens/kernel.hpp"

namespace qmcdens {

// f_hat(x) = (1/(n h)) sum_i k((x - X_i)/h), summed over |x - X_i| <= 10h.
// The sample must be sorted ascending.  Output values are independent of how
// callers partition the evaluation points (each point's window is summed
// pairwise in index order).
std::vector<double> kde_evaluate(std::span<const double> sample, double h,
                                 const GaussianKernel& kernel,
                                 std::span<const double> xs);

// r-th derivative estimator, (1/(n h^(r+1))) sum_i k^(r)((x - X_i)/h).
std::vector<double> kde_derivative(std::span<const double> sample, double h,
                                   int r, const GaussianKernel& kernel,
                                   std::span<const double> xs);

namespace detail {
// exp applied elementwise in place; lives in its own translation unit so the
// vectorized build flags stay contained.
void vexp(double* p, std::size_t n);
}  // namespace detail

}  // namespace qmcdens
