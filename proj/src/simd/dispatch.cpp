#include <atomic>
#include <cstdlib>
#include <string>

#include "nhf/simd/kernels.hpp"

namespace nhf::simd {
namespace {

bool cpu_has_avx2() {
#if defined(NHF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("NHF_SIMD")) {
    const std::string want{env};
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && isa_supported(Isa::Avx2)) return Isa::Avx2;
  }
  return detect_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "?";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: return cpu_has_avx2();
  }
  return false;
}

Isa detect_isa() { return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error(ErrorKind::InvalidArgument,
                "simd: variant " + std::string(to_string(isa)) + " not supported here");
  }
  active().store(isa, std::memory_order_relaxed);
}

void moebius_apply(const Mat2& u, const MoebiusBatch& batch) {
#if defined(NHF_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::moebius_apply(u, batch);
#endif
  scalar::moebius_apply(u, batch);
}

void hill_rk4(const HillBatch& batch) {
#if defined(NHF_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::hill_rk4(batch);
#endif
  scalar::hill_rk4(batch);
}

}  // namespace nhf::simd
