#pragma once

#include <span>
#include <string>
#include <vector>

#include "nhf/types.hpp"

namespace nhf {

enum class SegmentKind { Constant, Linear, Quadratic, CircularArc, EllipticArc };

std::string_view to_string(SegmentKind k);

/// One piece of a modulation curve, defined for local time s in [0, duration].
///
/// Polynomial kinds evaluate c0 + c1 u + c2 u^2, arcs evaluate
/// center + rho cos(omega u + phase) + i alpha rho sin(omega u + phase), with
/// u = s * rate. The rate is 1 unless the curve was time-scaled.
struct Segment {
  SegmentKind kind = SegmentKind::Constant;
  double duration = 1.0;
  double rate = 1.0;
  Complex c0{}, c1{}, c2{};
  Complex center{};
  double rho = 0.0, alpha = 1.0, omega = 0.0, phase = 0.0;

  static Segment constant(Complex value, double duration);
  static Segment linear(Complex start, Complex slope, double duration);
  static Segment quadratic(Complex c0, Complex c1, Complex c2, double duration);
  static Segment circular_arc(Complex center, double rho, double omega, double phase,
                              double duration);
  static Segment elliptic_arc(Complex center, double rho, double alpha, double omega,
                              double phase, double duration);

  Complex eval(double s) const;
  Complex start() const { return eval(0.0); }
  Complex end() const { return eval(duration); }
};

/// Periodic piecewise trajectory mu(t) with fixed coupling b and detuning eta.
class ModulationCurve {
 public:
  ModulationCurve(std::vector<Segment> segments, Complex b = 1.0, Complex eta = 0.0,
                  std::string family = "custom");

  Complex mu_at(double t) const;

  /// Hill coefficient b mu(t); eta is constant so its derivative drops out.
  Complex hill_coefficient(double t) const { return b_ * mu_at(t); }

  double period() const { return period_; }
  Complex b() const { return b_; }
  Complex eta() const { return eta_; }
  const std::string& family() const { return family_; }
  std::span<const Segment> segments() const { return segments_; }

  /// Segment start times followed by the period.
  const std::vector<double>& breakpoints() const { return starts_; }

  /// |mu(end of last segment) - mu(start of first segment)|.
  double closure_gap() const;
  bool is_closed(double tol = 1e-9) const { return closure_gap() <= tol; }

  /// Multiplies every duration by factor (> 0), tracing the same shape.
  ModulationCurve time_scaled(double factor) const;

  /// Same shape, different coupling/detuning.
  ModulationCurve with_coupling(Complex b, Complex eta = 0.0) const;

 private:
  std::vector<Segment> segments_;
  std::vector<double> starts_;
  Complex b_;
  Complex eta_;
  std::string family_;
  double period_ = 0.0;
};

/// mu(t) = delta + rho e^{i omega t}, one turn per period 2 pi / |omega|.
ModulationCurve circular(Complex delta, double rho, double omega, Complex b = 1.0,
                         Complex eta = 0.0);

/// Two parabolic arcs on [0, 1] and [1, 2] shifted by delta.
ModulationCurve quadratic_pair(Complex delta, Complex b = 1.0, Complex eta = 0.0);

/// Rectangle of width rho and aspect ratio alpha centred on delta, four unit
/// segments (period 4).
ModulationCurve rectangular(Complex delta, double rho, double alpha, Complex b = 1.0,
                            Complex eta = 0.0);

/// mu(t) = delta + rho cos(omega t) + i alpha rho sin(omega t).
ModulationCurve elliptical(Complex delta, double rho, double alpha, double omega,
                           Complex b = 1.0, Complex eta = 0.0);

/// Winding number of the sampled curve around a point.
int winding_number(const ModulationCurve& curve, Complex point = 0.0, std::size_t samples = 4096);

}  // namespace nhf
