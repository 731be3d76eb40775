#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "nhf/modulation.hpp"

namespace nhf {

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Initial and maximal step as fractions of the period.
  double initial_step = 1e-3;
  double max_step = 0.1;
  std::size_t max_steps = 2'000'000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// (y, y') for the two solutions of y'' = -p(t) y started from (1, 0) and
/// (0, 1) at t = 0.
struct HillSolution {
  double t = 0.0;
  std::array<Complex, 2> y{Complex{1.0}, Complex{0.0}};
  std::array<Complex, 2> dy{Complex{0.0}, Complex{1.0}};
};

/// Adaptive Runge-Kutta-Fehlberg 7(8) integration of the Hill equation of a
/// curve, propagating the 8th-order solution. Segment boundaries and every
/// requested time are hit exactly. `times` must be non-negative and sorted.
std::vector<HillSolution> integrate_hill(const ModulationCurve& curve, std::span<const double> times,
                                         const IntegratorOptions& opts = {},
                                         IntegratorStats* stats = nullptr);

HillSolution integrate_hill(const ModulationCurve& curve, double t, const IntegratorOptions& opts = {},
                            IntegratorStats* stats = nullptr);

/// Uniform-per-segment step grid over one period: every segment gets
/// round(steps_per_period * duration / T) >= 1 equal steps.
struct FixedStepGrid {
  std::vector<double> step;        ///< size n
  std::vector<std::size_t> segment;  ///< owning segment of each step
  std::vector<double> local_start;   ///< segment-local start time of each step
};

FixedStepGrid make_fixed_grid(const ModulationCurve& curve, std::size_t steps_per_period);

/// Classical RK4 on a fixed grid, one lane per curve. All curves must share
/// segment durations. Runs through the SIMD-dispatched kernel; returns the
/// solution after one period for each curve.
std::vector<HillSolution> fixed_step_period(std::span<const ModulationCurve> curves,
                                            std::size_t steps_per_period);

}  // namespace nhf
