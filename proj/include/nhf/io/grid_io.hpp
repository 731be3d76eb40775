#pragma once

#include <iosfwd>

#include "nhf/sweep.hpp"

namespace nhf::io {

// Compact little-endian grid layout:
//   "NHFG" | u32 version | u32 n_delta | u32 n_rho
//   f64 delta_min | f64 delta_max | f64 rho_min | f64 rho_max
//   n_rho * n_delta class bytes (row-major, rho rows)
//   n_rho * n_delta (re, im) f64 pairs
inline constexpr std::uint32_t kGridFormatVersion = 1;

void write_grid_binary(std::ostream& os, const ClassGrid& g);

/// Throws InvalidArgument on a bad magic, version or truncated payload.
ClassGrid read_grid_binary(std::istream& is);

}  // namespace nhf::io
