#include "nhf/floquet.hpp"

#include <cmath>
#include <numbers>

namespace nhf {

Mat2 state_space_matrix(const HillSolution& sol, Complex b, Complex eta) {
  auto lower = [&](int k) { return (kI * sol.dy[k] - eta * sol.y[k]) / b; };
  return {sol.y[0], sol.y[1], lower(0), lower(1)};
}

FundamentalMatrix fundamental_matrix(const ModulationCurve& curve, double t,
                                     const IntegratorOptions& opts) {
  const HillSolution sol = integrate_hill(curve, t, opts);
  return {state_space_matrix(sol, curve.b(), curve.eta()), t};
}

namespace {

Mat2 initial_inverse(const ModulationCurve& curve) {
  return state_space_matrix(HillSolution{}, curve.b(), curve.eta()).inverse();
}

}  // namespace

Propagator evolution_operator(const ModulationCurve& curve, double t, const IntegratorOptions& opts) {
  return {fundamental_matrix(curve, t, opts).psi * initial_inverse(curve), t};
}

std::vector<Propagator> evolution_operators(const ModulationCurve& curve, std::span<const double> times,
                                            const IntegratorOptions& opts) {
  const Mat2 inv0 = initial_inverse(curve);
  std::vector<Propagator> out;
  out.reserve(times.size());
  for (const HillSolution& sol : integrate_hill(curve, times, opts)) {
    out.push_back({state_space_matrix(sol, curve.b(), curve.eta()) * inv0, sol.t});
  }
  return out;
}

Monodromy monodromy(const ModulationCurve& curve, const IntegratorOptions& opts) {
  return {evolution_operator(curve, curve.period(), opts).u, curve.period()};
}

std::vector<Monodromy> monodromy_fixed_step(std::span<const ModulationCurve> curves,
                                            std::size_t steps_per_period) {
  const std::vector<HillSolution> sols = fixed_step_period(curves, steps_per_period);
  std::vector<Monodromy> out;
  out.reserve(sols.size());
  for (std::size_t i = 0; i < sols.size(); ++i) {
    const ModulationCurve& c = curves[i];
    out.push_back({state_space_matrix(sols[i], c.b(), c.eta()) * initial_inverse(c), c.period()});
  }
  return out;
}

Monodromy monodromy_fixed_step(const ModulationCurve& curve, std::size_t steps_per_period) {
  return monodromy_fixed_step(std::span<const ModulationCurve>(&curve, 1), steps_per_period).front();
}

FloquetSpectrum floquet_spectrum(const Monodromy& m) {
  if (!(std::abs(m.m.det()) > 1e-300)) {
    throw Error(ErrorKind::SingularMatrix, "floquet_spectrum: singular monodromy");
  }
  FloquetSpectrum out;
  out.multipliers = eigenvalues(m.m);
  for (int k = 0; k < 2; ++k) {
    out.exponents[k] = std::log(out.multipliers[k]) / m.period;
    out.lambda[k] = kI * out.exponents[k];
  }
  out.lambda_modulus = 2.0 * std::numbers::pi / m.period;
  return out;
}

MoebiusClass classify_monodromy(const Monodromy& m, double tol) { return classify_transform(m.m, tol); }

bool is_floquet_ep(const Monodromy& m, double tol) {
  return classify_monodromy(m, tol) == MoebiusClass::Parabolic;
}

std::vector<State2> stroboscopic_eigenstates(const Monodromy& m, double tol) {
  const MoebiusClass cls = classify_monodromy(m, tol);
  if (cls == MoebiusClass::Identity) return {State2{1.0, 0.0}, State2{0.0, 1.0}};
  const Mat2& a = m.m;
  auto vector_for = [&](Complex lambda) {
    // Pick the better-conditioned row of (a - lambda I) v = 0.
    const Complex r00 = a.m00 - lambda;
    const Complex r11 = a.m11 - lambda;
    if (std::abs(a.m01) + std::abs(r00) >= std::abs(a.m10) + std::abs(r11)) {
      return State2{a.m01, -r00};
    }
    return State2{-r11, a.m10};
  };
  const auto mult = eigenvalues(a);
  if (cls == MoebiusClass::Parabolic) return {vector_for(0.5 * (mult[0] + mult[1]))};
  return {vector_for(mult[0]), vector_for(mult[1])};
}

Trajectory trajectory(const ModulationCurve& curve, const State2& s0, std::size_t n_periods,
                      std::size_t samples_per_period, const IntegratorOptions& opts) {
  if (n_periods < 1 || samples_per_period < 1) {
    throw Error(ErrorKind::InvalidArgument, "trajectory: need n_periods >= 1 and samples >= 1");
  }
  if (s0.x0 == Complex{} && s0.x1 == Complex{}) {
    throw Error(ErrorKind::InvalidArgument, "trajectory: zero initial state");
  }
  const double period = curve.period();
  std::vector<double> grid(samples_per_period + 1);
  for (std::size_t j = 0; j <= samples_per_period; ++j) {
    grid[j] = period * static_cast<double>(j) / static_cast<double>(samples_per_period);
  }
  const std::vector<Propagator> ops = evolution_operators(curve, grid, opts);
  const Mat2& mono = ops.back().u;

  Trajectory out;
  const std::size_t total = n_periods * samples_per_period + 1;
  out.t.reserve(total);
  out.states.reserve(total);
  // U(t + nT) = U(t) M^n.
  State2 strobe = s0;
  for (std::size_t n = 0; n < n_periods; ++n) {
    for (std::size_t j = 0; j < samples_per_period; ++j) {
      out.t.push_back(static_cast<double>(n) * period + grid[j]);
      out.states.push_back(ops[j].u * strobe);
    }
    strobe = mono * strobe;
  }
  out.t.push_back(static_cast<double>(n_periods) * period);
  out.states.push_back(strobe);
  return out;
}

}  // namespace nhf
