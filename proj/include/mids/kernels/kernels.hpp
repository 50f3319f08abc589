#pragma once

// Dense potential-table kernels with a scalar reference implementation and
// SIMD variants picked at runtime. Every variant is bit-identical to the
// scalar reference: elementwise kernels round identically, and reductions
// accumulate in four interleaved lanes in both implementations.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace mids::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  // target[i] *= factor[index[i]]
  void (*multiply_gather)(double* target, const double* factor, const std::uint32_t* index,
                          std::size_t n);
  // out[i] = den[i] == 0 ? 0 : num[i] / den[i]
  void (*divide_guarded)(double* out, const double* num, const double* den, std::size_t n);
  // x[i] *= s
  void (*scale)(double* x, double s, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(MIDS_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

bool isa_supported(Isa isa);
// Chosen once from CPU features; MIDS_KERNELS=scalar|avx2 overrides.
Isa active_isa();
const KernelTable& active();
const KernelTable& table_for(Isa isa);
// Test hook; throws InvalidArgument if the ISA is unavailable.
void set_active_isa(Isa isa);

inline void multiply_gather(std::span<double> target, std::span<const double> factor,
                            std::span<const std::uint32_t> index) {
  active().multiply_gather(target.data(), factor.data(), index.data(), target.size());
}

inline void divide_guarded(std::span<double> out, std::span<const double> num,
                           std::span<const double> den) {
  active().divide_guarded(out.data(), num.data(), den.data(), out.size());
}

inline void scale(std::span<double> x, double s) { active().scale(x.data(), s, x.size()); }

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  return active().max_abs_diff(a.data(), b.data(), a.size());
}

// out[index[i]] += src[i]. Scatter has no profitable SIMD form at these sizes.
void scatter_add(std::span<double> out, std::span<const double> src,
                 std::span<const std::uint32_t> index);

}  // namespace mids::kernels
