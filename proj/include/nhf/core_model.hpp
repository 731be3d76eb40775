#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "nhf/types.hpp"

namespace nhf {

enum class MoebiusClass { Elliptic, Hyperbolic, Loxodromic, Parabolic, Identity };

std::string_view to_string(MoebiusClass c);
std::optional<MoebiusClass> moebius_class_from_string(std::string_view name);

/// Non-diagonal two-level Hamiltonian
///
///     H = [[tau + eta,        b      ],
///          [mu - eta^2 / b,   tau - eta]]
///
/// tau is the mean diagonal, eta the half detuning, b the upper coupling and
/// mu the deformation away from the exceptional point (mu = 0 is the EP).
struct Hamiltonian2 {
  Complex tau{};
  Complex eta{};
  Complex b{1.0, 0.0};
  Complex mu{};

  /// Validates b != 0 and finiteness of all parameters.
  static Hamiltonian2 make(Complex tau, Complex eta, Complex b, Complex mu);

  Mat2 matrix() const;

  /// N = H - tau I.
  Mat2 traceless() const;

  /// b * mu, which fixes the splitting of the spectrum.
  Complex splitting_sq() const { return b * mu; }

  friend bool operator==(const Hamiltonian2&, const Hamiltonian2&) = default;
};

enum class Dominant { Plus, Minus };

struct Spectrum2 {
  Complex lambda_plus{};
  Complex lambda_minus{};
  /// Root with larger imaginary part; absent when the imaginary parts tie.
  std::optional<Dominant> dominant;
};

Hamiltonian2 hamiltonian_from_matrix(Complex a, Complex b, Complex c, Complex d);
inline Hamiltonian2 hamiltonian_from_matrix(const Mat2& m) {
  return hamiltonian_from_matrix(m.m00, m.m01, m.m10, m.m11);
}

Spectrum2 eigenvalues(const Hamiltonian2& h, double tol = kDefaultTol);

/// One eigenvector at the EP, two otherwise.
std::vector<Vec2> eigenvectors(const Hamiltonian2& h, double tol = kDefaultTol);

bool is_exceptional(const Hamiltonian2& h, double tol = kDefaultTol);

Mat2 nilpotent_part(const Hamiltonian2& h, double tol = kDefaultTol);

struct JordanForm {
  Mat2 s;  ///< similarity transform, columns (b, -eta) and (0, 1)
  Mat2 j;  ///< [[tau, 1], [0, tau]]
};

JordanForm jordan_transform(const Hamiltonian2& h, double tol = kDefaultTol);

MoebiusClass classify_hamiltonian(const Hamiltonian2& h, double tol = kDefaultTol);

/// Returns s when mu = s * conj(b) for a real s, within relative tolerance.
std::optional<double> pseudo_hermitian_parameter(const Hamiltonian2& h, double tol = kDefaultTol);

}  // namespace nhf
