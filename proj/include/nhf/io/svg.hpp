#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "nhf/floquet.hpp"
#include "nhf/static_dynamics.hpp"
#include "nhf/sweep.hpp"

namespace nhf::io {

struct Rgb {
  unsigned char r = 0, g = 0, b = 0;
};

/// Viridis colour map sampled at x in [0, 1] (clamped), linear between 9
/// anchor colours.
Rgb viridis(double x);

std::string to_hex(Rgb c);

/// Heat-map colour of a cell class.
Rgb class_colour(CellClass c);

/// Sphere trajectories in an oblique orthographic view (far side faded) with
/// star markers at the eigenstates.
std::string portrait_svg(const Portrait& p, std::string_view title);

/// Both state components in their complex planes, coloured by time.
std::string trajectory_svg(const Trajectory& tr, std::string_view title);

/// Class heat map over (delta, rho) with boundary points and an inset of the
/// modulation curve at the centre of the grid.
std::string stability_svg(const ClassGrid& g, const std::vector<BoundarySet>& boundaries,
                          std::string_view title);

}  // namespace nhf::io
