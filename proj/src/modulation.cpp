#include "nhf/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nhf {

std::string_view to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::Constant: return "constant";
    case SegmentKind::Linear: return "linear";
    case SegmentKind::Quadratic: return "quadratic";
    case SegmentKind::CircularArc: return "circular_arc";
    case SegmentKind::EllipticArc: return "elliptic_arc";
  }
  return "?";
}

namespace {

void check_duration(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw Error(ErrorKind::InvalidArgument, "Segment: duration must be positive and finite");
  }
}

void check_finite(Complex z, const char* what) {
  if (!is_finite(z)) throw Error(ErrorKind::InvalidArgument, std::string("Segment: non-finite ") + what);
}

void check_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, std::string("Segment: non-finite ") + what);
}

}  // namespace

Segment Segment::constant(Complex value, double duration) {
  check_duration(duration);
  check_finite(value, "value");
  Segment s;
  s.kind = SegmentKind::Constant;
  s.duration = duration;
  s.c0 = value;
  return s;
}

Segment Segment::linear(Complex start, Complex slope, double duration) {
  check_duration(duration);
  check_finite(start, "start");
  check_finite(slope, "slope");
  Segment s;
  s.kind = SegmentKind::Linear;
  s.duration = duration;
  s.c0 = start;
  s.c1 = slope;
  return s;
}

Segment Segment::quadratic(Complex c0, Complex c1, Complex c2, double duration) {
  check_duration(duration);
  check_finite(c0, "c0");
  check_finite(c1, "c1");
  check_finite(c2, "c2");
  Segment s;
  s.kind = SegmentKind::Quadratic;
  s.duration = duration;
  s.c0 = c0;
  s.c1 = c1;
  s.c2 = c2;
  return s;
}

Segment Segment::circular_arc(Complex center, double rho, double omega, double phase,
                              double duration) {
  Segment s = elliptic_arc(center, rho, 1.0, omega, phase, duration);
  s.kind = SegmentKind::CircularArc;
  return s;
}

Segment Segment::elliptic_arc(Complex center, double rho, double alpha, double omega,
                              double phase, double duration) {
  check_duration(duration);
  check_finite(center, "center");
  check_finite(rho, "rho");
  check_finite(alpha, "alpha");
  check_finite(omega, "omega");
  check_finite(phase, "phase");
  Segment s;
  s.kind = SegmentKind::EllipticArc;
  s.duration = duration;
  s.center = center;
  s.rho = rho;
  s.alpha = alpha;
  s.omega = omega;
  s.phase = phase;
  return s;
}

Complex Segment::eval(double s) const {
  const double u = s * rate;
  switch (kind) {
    case SegmentKind::Constant:
      return c0;
    case SegmentKind::Linear:
      return c0 + c1 * u;
    case SegmentKind::Quadratic:
      return c0 + (c1 + c2 * u) * u;
    case SegmentKind::CircularArc:
    case SegmentKind::EllipticArc: {
      const double theta = omega * u + phase;
      return center + Complex{rho * std::cos(theta), alpha * rho * std::sin(theta)};
    }
  }
  return {};
}

ModulationCurve::ModulationCurve(std::vector<Segment> segments, Complex b, Complex eta,
                                 std::string family)
    : segments_(std::move(segments)), b_(b), eta_(eta), family_(std::move(family)) {
  if (segments_.empty()) throw Error(ErrorKind::InvalidArgument, "ModulationCurve: no segments");
  if (!is_finite(b) || std::abs(b) == 0.0) {
    throw Error(ErrorKind::DiagonalInput, "ModulationCurve: coupling b must be finite and nonzero");
  }
  if (!is_finite(eta)) throw Error(ErrorKind::InvalidArgument, "ModulationCurve: eta not finite");
  starts_.reserve(segments_.size() + 1);
  double t = 0.0;
  for (const Segment& s : segments_) {
    check_duration(s.duration);
    starts_.push_back(t);
    t += s.duration;
  }
  starts_.push_back(t);
  period_ = t;
}

Complex ModulationCurve::mu_at(double t) const {
  double local = t - period_ * std::floor(t / period_);
  if (local >= period_) local = 0.0;
  // Last start <= local.
  auto it = std::upper_bound(starts_.begin(), starts_.end() - 1, local);
  const std::size_t idx = static_cast<std::size_t>(std::distance(starts_.begin(), it)) - 1;
  return segments_[idx].eval(local - starts_[idx]);
}

double ModulationCurve::closure_gap() const {
  return std::abs(segments_.back().end() - segments_.front().start());
}

ModulationCurve ModulationCurve::time_scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorKind::InvalidArgument, "time_scaled: factor must be positive");
  }
  std::vector<Segment> out = segments_;
  for (Segment& s : out) {
    s.duration *= factor;
    s.rate /= factor;
  }
  return ModulationCurve(std::move(out), b_, eta_, family_);
}

ModulationCurve ModulationCurve::with_coupling(Complex b, Complex eta) const {
  return ModulationCurve(segments_, b, eta, family_);
}

ModulationCurve circular(Complex delta, double rho, double omega, Complex b, Complex eta) {
  if (!(rho >= 0.0)) throw Error(ErrorKind::InvalidArgument, "circular: rho must be >= 0");
  if (omega == 0.0 || !std::isfinite(omega)) {
    throw Error(ErrorKind::InvalidArgument, "circular: omega must be finite and nonzero");
  }
  const double period = 2.0 * std::numbers::pi / std::abs(omega);
  return ModulationCurve({Segment::circular_arc(delta, rho, omega, 0.0, period)}, b, eta,
                         "circular");
}

ModulationCurve quadratic_pair(Complex delta, Complex b, Complex eta) {
  // First arc: delta - (1+i)/2 + (1+4i) t - 4i t^2 on t in [0, 1].
  // Second arc: delta - (1+i)/2 + (1+3i)(2-t) - 3i(2-t)^2 on t in [1, 2],
  // expanded in s = t - 1.
  const Complex base = delta - Complex{0.5, 0.5};
  std::vector<Segment> segs{
      Segment::quadratic(base, Complex{1.0, 4.0}, Complex{0.0, -4.0}, 1.0),
      Segment::quadratic(base + Complex{1.0, 0.0}, Complex{-1.0, 3.0}, Complex{0.0, -3.0}, 1.0),
  };
  return ModulationCurve(std::move(segs), b, eta, "quadratic");
}

ModulationCurve rectangular(Complex delta, double rho, double alpha, Complex b, Complex eta) {
  if (!(rho > 0.0)) throw Error(ErrorKind::InvalidArgument, "rectangular: rho must be > 0");
  if (!(alpha >= 0.0)) throw Error(ErrorKind::InvalidArgument, "rectangular: alpha must be >= 0");
  const double half_w = 0.5 * rho;
  const double half_h = 0.5 * alpha * rho;
  std::vector<Segment> segs{
      Segment::linear(delta + Complex{-half_w, half_h}, Complex{rho, 0.0}, 1.0),
      Segment::linear(delta + Complex{half_w, half_h}, Complex{0.0, -alpha * rho}, 1.0),
      Segment::linear(delta + Complex{half_w, -half_h}, Complex{-rho, 0.0}, 1.0),
      Segment::linear(delta + Complex{-half_w, -half_h}, Complex{0.0, alpha * rho}, 1.0),
  };
  return ModulationCurve(std::move(segs), b, eta, "rectangular");
}

ModulationCurve elliptical(Complex delta, double rho, double alpha, double omega, Complex b,
                           Complex eta) {
  if (!(rho >= 0.0)) throw Error(ErrorKind::InvalidArgument, "elliptical: rho must be >= 0");
  if (!(alpha >= 0.0)) throw Error(ErrorKind::InvalidArgument, "elliptical: alpha must be >= 0");
  if (omega == 0.0 || !std::isfinite(omega)) {
    throw Error(ErrorKind::InvalidArgument, "elliptical: omega must be finite and nonzero");
  }
  const double period = 2.0 * std::numbers::pi / std::abs(omega);
  return ModulationCurve({Segment::elliptic_arc(delta, rho, alpha, omega, 0.0, period)}, b, eta,
                         "elliptical");
}

int winding_number(const ModulationCurve& curve, Complex point, std::size_t samples) {
  if (samples < 3) samples = 3;
  const double period = curve.period();
  double total = 0.0;
  Complex prev = curve.mu_at(0.0) - point;
  for (std::size_t k = 1; k <= samples; ++k) {
    const Complex cur = curve.mu_at(period * static_cast<double>(k) / static_cast<double>(samples)) - point;
    if (prev == Complex{} || cur == Complex{}) {
      throw Error(ErrorKind::InvalidArgument, "winding_number: curve passes through the point");
    }
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace nhf
