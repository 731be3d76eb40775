#pragma once

// Data-parallel inner loops with a scalar reference and vectorised variants.
// The active variant is chosen once at runtime from the CPU features; the
// NHF_SIMD environment variable ("scalar" or "avx2") overrides the choice.

#include <cstddef>
#include <span>
#include <string_view>

#include "nhf/types.hpp"

namespace nhf::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// Best variant supported by this CPU and build.
Isa detect_isa();

/// Variant used by the dispatching entry points below.
Isa active_isa();

/// Overrides the dispatch choice; throws InvalidArgument if unsupported.
void set_active_isa(Isa isa);

bool isa_supported(Isa isa);

/// Split-complex array view.
struct ComplexSpan {
  std::span<double> re;
  std::span<double> im;
  std::size_t size() const { return re.size(); }
};

struct ConstComplexSpan {
  std::span<const double> re;
  std::span<const double> im;
  std::size_t size() const { return re.size(); }
};

/// Homogeneous Moebius image of finite points p:
///   den = u00 + u01 p,   num = u10 + u11 p.
struct MoebiusBatch {
  ConstComplexSpan p;
  ComplexSpan den;
  ComplexSpan num;
};

/// Lane-batched fixed-step RK4 integration of y'' = -p(t) y for the two
/// canonical initial conditions (y, y')(0) = (1, 0) and (0, 1).
///
/// Lanes share the step grid; coefficients are sampled per lane at the
/// half-step nodes. Node-major layout: coefficient at node k for lane l is
/// p[k * lanes + l], with node 2j the start of step j, 2j+1 its midpoint and
/// 2j+2 its end. The output holds (y, y') of both solutions after the last
/// step: out_*[q * lanes + l] with q = 0..3 for y_a, y'_a, y_b, y'_b.
struct HillBatch {
  std::size_t lanes = 0;
  std::span<const double> step;  ///< per-step size, shared by all lanes
  std::span<const double> p_re;  ///< (2 * steps + 1) * lanes
  std::span<const double> p_im;
  std::span<double> out_re;      ///< 4 * lanes
  std::span<double> out_im;
};

namespace scalar {
void moebius_apply(const Mat2& u, const MoebiusBatch& batch);
void hill_rk4(const HillBatch& batch);
}  // namespace scalar

#if defined(NHF_HAVE_AVX2)
namespace avx2 {
void moebius_apply(const Mat2& u, const MoebiusBatch& batch);
void hill_rk4(const HillBatch& batch);
}  // namespace avx2
#endif

// Dispatching entry points.
void moebius_apply(const Mat2& u, const MoebiusBatch& batch);
void hill_rk4(const HillBatch& batch);

}  // namespace nhf::simd
