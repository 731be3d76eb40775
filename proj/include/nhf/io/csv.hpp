#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nhf/floquet.hpp"
#include "nhf/static_dynamics.hpp"
#include "nhf/sweep.hpp"

namespace nhf::io {

/// Shortest representation that parses back to the same double.
std::string format_double(double x);

/// Accepts anything format_double emits, including "inf", "-inf" and "nan".
double parse_double(std::string_view s);

/// Splits one CSV line on commas (no quoting; none of our fields need it).
std::vector<std::string_view> split_csv(std::string_view line);

// Portrait: sample_id, step, t, re_p, im_p, sphere_x, sphere_y, sphere_z.
// A polarisation at infinity is written with re_p = im_p = inf.
void write_portrait_csv(std::ostream& os, const Portrait& p);
Portrait read_portrait_csv(std::istream& is);

// Trajectory: component, step, t, re, im (component 1 or 2).
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);
Trajectory read_trajectory_csv(std::istream& is);

// Grid: delta, rho, class, re_sigma, im_sigma, rows ordered by rho then delta.
void write_grid_csv(std::ostream& os, const ClassGrid& g);
/// Axes are recovered from the coordinates; other spec fields keep defaults.
ClassGrid read_grid_csv(std::istream& is);

// Boundaries: class_a, class_b, delta, rho, refined.
void write_boundaries_csv(std::ostream& os, const std::vector<BoundarySet>& sets);

}  // namespace nhf::io
