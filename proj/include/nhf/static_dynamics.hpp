#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nhf/core_model.hpp"

namespace nhf {

/// Two-component state (psi1, psi2); never both zero.
using State2 = Vec2;

/// Point of the extended complex plane, p = psi2 / psi1.
class Polarisation {
 public:
  Polarisation() = default;
  static Polarisation finite(Complex p);
  static Polarisation infinity();

  /// p = x1 / x0, infinite when x0 == 0. Throws InvalidArgument on (0, 0).
  static Polarisation from_homogeneous(Complex x0, Complex x1);
  static Polarisation of(const State2& s) { return from_homogeneous(s.x0, s.x1); }

  bool is_infinite() const { return infinite_; }
  /// Finite value; meaningless when is_infinite().
  Complex value() const { return value_; }

  /// Point on the unit (Riemann/Poincare) sphere; p = 0 is the north pole,
  /// infinity the south pole.
  std::array<double, 3> sphere() const;

  /// Representative state (1, p), or (0, 1) at infinity.
  State2 state() const;

 private:
  Complex value_{};
  bool infinite_ = false;
};

/// Chordal distance on the unit sphere, in [0, 2].
double chordal_distance(const Polarisation& a, const Polarisation& b);

struct Propagator {
  Mat2 u = Mat2::identity();
  double t = 0.0;
};

/// Closed-form e^{-iHt}. Near the EP (|sqrt(b mu) t| < 1e-4) cos and sinc
/// switch to their Taylor series so mu = 0 is handled without branching.
Propagator propagator(const Hamiltonian2& h, double t);

State2 evolve(const Hamiltonian2& h, const State2& s, double t);

/// Moebius action of a propagator on a polarisation.
Polarisation apply_moebius(const Mat2& u, const Polarisation& p);

Polarisation polarisation_flow(const Hamiltonian2& h, double t, const Polarisation& p0);

/// sigma = Tr^2 of the unit-determinant normalisation of u.
Complex trace_square(const Mat2& u);

MoebiusClass classify_transform(const Mat2& u, double tol = kDefaultTol);
inline MoebiusClass classify_transform(const Propagator& p, double tol = kDefaultTol) {
  return classify_transform(p.u, tol);
}

/// Long-time limit of every non-repulsive polarisation.
Polarisation limit_polarisation(const Hamiltonian2& h, double tol = kDefaultTol);

/// Polarisations of the eigenvectors (one at the EP).
std::vector<Polarisation> eigen_polarisations(const Hamiltonian2& h, double tol = kDefaultTol);

struct Portrait {
  std::size_t n_samples = 0;
  std::vector<double> times;
  /// Sample-major: points[sample * times.size() + step].
  std::vector<Polarisation> points;
  std::vector<Polarisation> markers;

  const Polarisation& at(std::size_t sample, std::size_t step) const {
    return points[sample * times.size() + step];
  }
};

/// Uniform random polarisations on the sphere, reproducible from the seed.
std::vector<Polarisation> sample_sphere(std::size_t n, std::uint64_t seed);

Portrait poincare_portrait(const Hamiltonian2& h, std::size_t n_samples, double t_max,
                           std::size_t n_steps, std::uint64_t seed);

/// Same as above with caller-chosen initial polarisations.
Portrait poincare_portrait(const Hamiltonian2& h, const std::vector<Polarisation>& initial,
                           double t_max, std::size_t n_steps);

}  // namespace nhf
