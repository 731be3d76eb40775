// Built with -mavx2 only (no -mfma): the variant must reproduce the scalar
// reference bit for bit.

#include <immintrin.h>

#include "kernel_impl.hpp"

namespace nhf::simd::avx2 {
namespace {

struct F64x4 {
  static constexpr std::size_t width = 4;
  __m256d v;

  static F64x4 load(const double* p) { return {_mm256_loadu_pd(p)}; }
  static F64x4 broadcast(double x) { return {_mm256_set1_pd(x)}; }
  void store(double* p) const { _mm256_storeu_pd(p, v); }

  friend F64x4 operator+(F64x4 a, F64x4 b) { return {_mm256_add_pd(a.v, b.v)}; }
  friend F64x4 operator-(F64x4 a, F64x4 b) { return {_mm256_sub_pd(a.v, b.v)}; }
  friend F64x4 operator*(F64x4 a, F64x4 b) { return {_mm256_mul_pd(a.v, b.v)}; }
  friend F64x4 operator-(F64x4 a) { return {_mm256_xor_pd(a.v, _mm256_set1_pd(-0.0))}; }
};

std::size_t packed_end(std::size_t n) { return n - n % F64x4::width; }

}  // namespace

void moebius_apply(const Mat2& u, const MoebiusBatch& batch) {
  const std::size_t n = batch.p.size();
  const std::size_t split = packed_end(n);
  detail::moebius_range<F64x4>(u, batch, 0, split);
  detail::moebius_range<detail::Scalar1>(u, batch, split, n);
}

void hill_rk4(const HillBatch& batch) {
  const std::size_t split = packed_end(batch.lanes);
  detail::hill_rk4_range<F64x4>(batch, 0, split);
  detail::hill_rk4_range<detail::Scalar1>(batch, split, batch.lanes);
}

}  // namespace nhf::simd::avx2
