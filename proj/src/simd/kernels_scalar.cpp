#include "kernel_impl.hpp"

namespace nhf::simd::scalar {

void moebius_apply(const Mat2& u, const MoebiusBatch& batch) {
  detail::moebius_range<detail::Scalar1>(u, batch, 0, batch.p.size());
}

void hill_rk4(const HillBatch& batch) {
  detail::hill_rk4_range<detail::Scalar1>(batch, 0, batch.lanes);
}

}  // namespace nhf::simd::scalar
