#include <cmath>
#include <cstddef>

namespace qmcdens::detail {

void vexp(double* p, std::size_t n) {
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) p[i] = std::exp(p[i]);
}

}  // namespace qmcdens::detail
