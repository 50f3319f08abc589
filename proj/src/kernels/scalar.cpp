#include <cmath>

#include "mids/kernels/kernels.hpp"

namespace mids::kernels {
namespace {

void multiply_gather_scalar(double* target, const double* factor, const std::uint32_t* index,
                            std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) target[i] *= factor[index[i]];
}

void divide_guarded_scalar(double* out, const double* num, const double* den, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = den[i] == 0.0 ? 0.0 : num[i] / den[i];
}

void scale_scalar(double* x, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

// Four interleaved accumulators, combined as (a0 + a1) + (a2 + a3), then the
// tail in order. The AVX2 variant reproduces this order exactly.
double sum_scalar(const double* x, std::size_t n) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += x[i];
    a1 += x[i + 1];
    a2 += x[i + 2];
    a3 += x[i + 3];
  }
  double total = (a0 + a1) + (a2 + a3);
  for (; i < n; ++i) total += x[i];
  return total;
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::Scalar,  multiply_gather_scalar, divide_guarded_scalar,
                                 scale_scalar, sum_scalar,             max_abs_diff_scalar};
  return table;
}

void scatter_add(std::span<double> out, std::span<const double> src,
                 std::span<const std::uint32_t> index) {
  for (std::size_t i = 0; i < src.size(); ++i) out[index[i]] += src[i];
}

}  // namespace mids::kernels
