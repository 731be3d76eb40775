#include "nhf/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nhf/simd/kernels.hpp"

namespace nhf {
namespace {

// Fehlberg 7(8) tableau.
constexpr int kStages = 13;

constexpr double kC[kStages] = {0.0,     2.0 / 27, 1.0 / 9, 1.0 / 6, 5.0 / 12, 1.0 / 2, 5.0 / 6,
                                1.0 / 6, 2.0 / 3,  1.0 / 3, 1.0,     0.0,      1.0};

constexpr double kA[kStages][kStages - 1] = {
    {},
    {2.0 / 27},
    {1.0 / 36, 1.0 / 12},
    {1.0 / 24, 0, 1.0 / 8},
    {5.0 / 12, 0, -25.0 / 16, 25.0 / 16},
    {1.0 / 20, 0, 0, 1.0 / 4, 1.0 / 5},
    {-25.0 / 108, 0, 0, 125.0 / 108, -65.0 / 27, 125.0 / 54},
    {31.0 / 300, 0, 0, 0, 61.0 / 225, -2.0 / 9, 13.0 / 900},
    {2.0, 0, 0, -53.0 / 6, 704.0 / 45, -107.0 / 9, 67.0 / 90, 3.0},
    {-91.0 / 108, 0, 0, 23.0 / 108, -976.0 / 135, 311.0 / 54, -19.0 / 60, 17.0 / 6, -1.0 / 12},
    {2383.0 / 4100, 0, 0, -341.0 / 164, 4496.0 / 1025, -301.0 / 82, 2133.0 / 4100, 45.0 / 82,
     45.0 / 164, 18.0 / 41},
    {3.0 / 205, 0, 0, 0, 0, -6.0 / 41, -3.0 / 205, -3.0 / 41, 3.0 / 41, 6.0 / 41, 0},
    {-1777.0 / 4100, 0, 0, -341.0 / 164, 4496.0 / 1025, -289.0 / 82, 2193.0 / 4100, 51.0 / 82,
     33.0 / 164, 12.0 / 41, 0, 1.0},
};

constexpr double kB8[kStages] = {0, 0, 0, 0, 0, 34.0 / 105, 9.0 / 35, 9.0 / 35, 9.0 / 280, 9.0 / 280,
                                 0, 41.0 / 840, 41.0 / 840};

constexpr double kErr = 41.0 / 840;  // times (k0 + k10 - k11 - k12)

// (y_a, y'_a, y_b, y'_b)
using Y = std::array<Complex, 4>;

inline Y rhs(Complex p, const Y& y) { return {y[1], -p * y[0], y[3], -p * y[2]}; }

struct SegmentStepper {
  const Segment& seg;
  Complex b;
  const IntegratorOptions& opts;
  IntegratorStats* stats;

  Complex coeff(double s) const { return b * seg.eval(s); }

  // One trial step from local time s with size h. Returns the scaled error.
  double trial(double s, double h, const Y& y, Y& out) const {
    std::array<Y, kStages> k;
    for (int i = 0; i < kStages; ++i) {
      Y yi = y;
      for (int j = 0; j < i; ++j) {
        const double a = kA[i][j];
        if (a == 0.0) continue;
        for (int q = 0; q < 4; ++q) yi[q] += (h * a) * k[j][q];
      }
      k[i] = rhs(coeff(s + kC[i] * h), yi);
    }
    out = y;
    for (int i = 0; i < kStages; ++i) {
      if (kB8[i] == 0.0) continue;
      for (int q = 0; q < 4; ++q) out[q] += (h * kB8[i]) * k[i][q];
    }
    // Error per solution, measured against that solution's (y, y') norm.
    double err = 0.0;
    for (int sol = 0; sol < 2; ++sol) {
      double e2 = 0.0;
      double n_old = 0.0;
      double n_new = 0.0;
      for (int q = 2 * sol; q < 2 * sol + 2; ++q) {
        const Complex e = (h * kErr) * (k[0][q] + k[10][q] - k[11][q] - k[12][q]);
        e2 += std::norm(e);
        n_old += std::norm(y[q]);
        n_new += std::norm(out[q]);
      }
      const double scale = opts.abs_tol + opts.rel_tol * std::sqrt(std::max(n_old, n_new));
      err = std::max(err, std::sqrt(e2) / scale);
    }
    return err;
  }

  // Advances y from local s0 to s1 (both inside the segment). h is the
  // proposed step and is updated for the next call.
  void advance(double s0, double s1, Y& y, double& h, double h_max, std::size_t& steps) const {
    double s = s0;
    Y next;
    while (s < s1) {
      const double remaining = s1 - s;
      const bool last = h >= remaining;
      const double h_try = last ? remaining : h;
      const double err = trial(s, h_try, y, next);
      if (!std::isfinite(err)) {
        throw Error(ErrorKind::IntegratorFailure, "integrate_hill: non-finite solution");
      }
      const double factor =
          err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -1.0 / 8.0), 0.2, 5.0);
      if (err <= 1.0) {
        s = last ? s1 : s + h_try;
        y = next;
        if (stats) ++stats->accepted;
        if (++steps > opts.max_steps) {
          throw Error(ErrorKind::IntegratorFailure, "integrate_hill: step budget exhausted");
        }
        // A truncated final step says nothing about the next step size.
        if (!last) h = std::min(h_try * factor, h_max);
      } else {
        if (stats) ++stats->rejected;
        h = h_try * factor;
      }
      if (h < 1e-14 * std::max(1.0, std::abs(s)) + 1e-300) {
        throw Error(ErrorKind::IntegratorFailure, "integrate_hill: step size underflow");
      }
    }
  }
};

}  // namespace

std::vector<HillSolution> integrate_hill(const ModulationCurve& curve, std::span<const double> times,
                                         const IntegratorOptions& opts, IntegratorStats* stats) {
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "integrate_hill: tolerances must be positive");
  }
  std::vector<HillSolution> out;
  out.reserve(times.size());
  if (times.empty()) return out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i]) || (i > 0 && times[i] < times[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "integrate_hill: times must be finite, >= 0 and sorted");
    }
  }

  const double period = curve.period();
  const auto segs = curve.segments();
  const auto& starts = curve.breakpoints();
  const double h_max = opts.max_step * period;
  double h = std::min(opts.initial_step * period, h_max);
  std::size_t steps = 0;

  Y y{Complex{1.0}, Complex{0.0}, Complex{0.0}, Complex{1.0}};
  auto emit = [&](double t) {
    HillSolution s;
    s.t = t;
    s.y = {y[0], y[2]};
    s.dy = {y[1], y[3]};
    out.push_back(s);
  };

  std::size_t next = 0;
  while (next < times.size() && times[next] == 0.0) emit(times[next++]);

  for (std::size_t cycle = 0; next < times.size(); ++cycle) {
    const double cycle_start = static_cast<double>(cycle) * period;
    for (std::size_t i = 0; i < segs.size() && next < times.size(); ++i) {
      const double seg_start = cycle_start + starts[i];
      const double seg_len = segs[i].duration;
      const SegmentStepper stepper{segs[i], curve.b(), opts, stats};
      double s = 0.0;
      // Requested times inside this segment (the last segment of a cycle
      // owns its end point).
      while (next < times.size() && times[next] - seg_start <= seg_len) {
        const double target = std::max(s, times[next] - seg_start);
        stepper.advance(s, target, y, h, h_max, steps);
        s = target;
        emit(times[next++]);
      }
      if (next < times.size()) stepper.advance(s, seg_len, y, h, h_max, steps);
    }
  }
  return out;
}

HillSolution integrate_hill(const ModulationCurve& curve, double t, const IntegratorOptions& opts,
                            IntegratorStats* stats) {
  const double ts[1] = {t};
  return integrate_hill(curve, std::span<const double>(ts), opts, stats).front();
}

FixedStepGrid make_fixed_grid(const ModulationCurve& curve, std::size_t steps_per_period) {
  if (steps_per_period < 1) {
    throw Error(ErrorKind::InvalidArgument, "make_fixed_grid: need at least one step");
  }
  FixedStepGrid g;
  const auto segs = curve.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const double frac = segs[i].duration / curve.period();
    const auto n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(frac * static_cast<double>(steps_per_period))));
    const double h = segs[i].duration / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      g.step.push_back(h);
      g.segment.push_back(i);
      g.local_start.push_back(static_cast<double>(j) * h);
    }
  }
  return g;
}

std::vector<HillSolution> fixed_step_period(std::span<const ModulationCurve> curves,
                                            std::size_t steps_per_period) {
  if (curves.empty()) return {};
  const ModulationCurve& ref = curves.front();
  for (const ModulationCurve& c : curves) {
    if (c.segments().size() != ref.segments().size()) {
      throw Error(ErrorKind::InvalidArgument, "fixed_step_period: lanes need a common segment layout");
    }
    for (std::size_t i = 0; i < c.segments().size(); ++i) {
      if (c.segments()[i].duration != ref.segments()[i].duration) {
        throw Error(ErrorKind::InvalidArgument, "fixed_step_period: lanes need equal durations");
      }
    }
  }
  const FixedStepGrid grid = make_fixed_grid(ref, steps_per_period);
  const std::size_t lanes = curves.size();
  const std::size_t steps = grid.step.size();
  const std::size_t nodes = 2 * steps + 1;

  std::vector<double> p_re(nodes * lanes), p_im(nodes * lanes);
  for (std::size_t l = 0; l < lanes; ++l) {
    const ModulationCurve& c = curves[l];
    auto put = [&](std::size_t node, Complex p) {
      p_re[node * lanes + l] = p.real();
      p_im[node * lanes + l] = p.imag();
    };
    for (std::size_t j = 0; j < steps; ++j) {
      const Segment& seg = c.segments()[grid.segment[j]];
      const double s0 = grid.local_start[j];
      const double hj = grid.step[j];
      if (j == 0 || grid.segment[j] != grid.segment[j - 1]) put(2 * j, c.b() * seg.eval(s0));
      put(2 * j + 1, c.b() * seg.eval(s0 + 0.5 * hj));
      const bool seg_last = j + 1 == steps || grid.segment[j + 1] != grid.segment[j];
      put(2 * j + 2, c.b() * seg.eval(seg_last ? seg.duration : s0 + hj));
    }
  }

  std::vector<double> out_re(4 * lanes), out_im(4 * lanes);
  simd::hill_rk4({lanes, grid.step, p_re, p_im, out_re, out_im});

  std::vector<HillSolution> result(lanes);
  for (std::size_t l = 0; l < lanes; ++l) {
    auto at = [&](std::size_t q) { return Complex{out_re[q * lanes + l], out_im[q * lanes + l]}; };
    result[l].t = ref.period();
    result[l].y = {at(0), at(2)};
    result[l].dy = {at(1), at(3)};
  }
  return result;
}

}  // namespace nhf
