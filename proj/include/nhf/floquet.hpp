#pragma once

#include <array>
#include <span>
#include <vector>

#include "nhf/integrator.hpp"
#include "nhf/static_dynamics.hpp"

namespace nhf {

/// Columns are the two Hill solutions mapped to state space:
/// psi2 = (i psi1' - eta psi1) / b.
struct FundamentalMatrix {
  Mat2 psi = Mat2::identity();
  double t = 0.0;
};

struct Monodromy {
  Mat2 m = Mat2::identity();
  double period = 1.0;
};

/// Floquet data of a monodromy. Multipliers are e^{nu T}; lambda = i nu is
/// only defined modulo lambda_modulus = 2 pi / T.
struct FloquetSpectrum {
  std::array<Complex, 2> multipliers{};
  std::array<Complex, 2> exponents{};
  std::array<Complex, 2> lambda{};
  double lambda_modulus = 0.0;
};

Mat2 state_space_matrix(const HillSolution& sol, Complex b, Complex eta);

FundamentalMatrix fundamental_matrix(const ModulationCurve& curve, double t,
                                     const IntegratorOptions& opts = {});

/// U(t) = Psi(t) Psi(0)^{-1}.
Propagator evolution_operator(const ModulationCurve& curve, double t,
                              const IntegratorOptions& opts = {});

/// Evolution operators at several sorted times from a single integration.
std::vector<Propagator> evolution_operators(const ModulationCurve& curve,
                                            std::span<const double> times,
                                            const IntegratorOptions& opts = {});

Monodromy monodromy(const ModulationCurve& curve, const IntegratorOptions& opts = {});

/// Monodromies from the fixed-step RK4 route, one per curve (lanes share
/// segment durations).
std::vector<Monodromy> monodromy_fixed_step(std::span<const ModulationCurve> curves,
                                            std::size_t steps_per_period = 10'000);
Monodromy monodromy_fixed_step(const ModulationCurve& curve, std::size_t steps_per_period = 10'000);

FloquetSpectrum floquet_spectrum(const Monodromy& m);

MoebiusClass classify_monodromy(const Monodromy& m, double tol = kMonodromyTol);

/// Degenerate multipliers with a defective monodromy.
bool is_floquet_ep(const Monodromy& m, double tol = kMonodromyTol);

/// Eigenvectors of the monodromy (stroboscopic eigenstates). A defective
/// monodromy has one; a multiple of the identity returns the standard basis.
std::vector<State2> stroboscopic_eigenstates(const Monodromy& m, double tol = kMonodromyTol);

struct Trajectory {
  std::vector<double> t;
  std::vector<State2> states;
};

/// States at t = k T / samples_per_period, k = 0 .. n_periods * samples_per_period.
Trajectory trajectory(const ModulationCurve& curve, const State2& s0, std::size_t n_periods,
                      std::size_t samples_per_period, const IntegratorOptions& opts = {});

}  // namespace nhf
