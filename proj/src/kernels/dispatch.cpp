#include <atomic>
#include <cstdlib>
#include <string>

#include "mids/common/error.hpp"
#include "mids/kernels/kernels.hpp"

namespace mids::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(MIDS_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error(ErrorCode::InvalidArgument,
                "kernel ISA " + std::string(to_string(isa)) + " not available on this CPU/build");
  }
#if defined(MIDS_HAVE_AVX2)
  if (isa == Isa::Avx2) return avx2_table();
#endif
  return scalar_table();
}

namespace {

Isa detect() {
  if (const char* env = std::getenv("MIDS_KERNELS")) {
    const std::string_view v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && isa_supported(Isa::Avx2)) return Isa::Avx2;
  }
  return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{&table_for(detect())};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

Isa active_isa() { return active().isa; }

void set_active_isa(Isa isa) { current().store(&table_for(isa), std::memory_order_relaxed); }

}  // namespace mids::kernels
