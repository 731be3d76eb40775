#include "nhf/core_model.hpp"

#include <cmath>

namespace nhf {

std::string_view to_string(MoebiusClass c) {
  switch (c) {
    case MoebiusClass::Elliptic: return "Elliptic";
    case MoebiusClass::Hyperbolic: return "Hyperbolic";
    case MoebiusClass::Loxodromic: return "Loxodromic";
    case MoebiusClass::Parabolic: return "Parabolic";
    case MoebiusClass::Identity: return "Identity";
  }
  return "?";
}

std::optional<MoebiusClass> moebius_class_from_string(std::string_view name) {
  for (auto c : {MoebiusClass::Elliptic, MoebiusClass::Hyperbolic, MoebiusClass::Loxodromic,
                 MoebiusClass::Parabolic, MoebiusClass::Identity}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

Hamiltonian2 Hamiltonian2::make(Complex tau, Complex eta, Complex b, Complex mu) {
  if (!is_finite(tau) || !is_finite(eta) || !is_finite(b) || !is_finite(mu)) {
    throw Error(ErrorKind::InvalidArgument, "Hamiltonian2: non-finite parameter");
  }
  if (std::abs(b) == 0.0) {
    throw Error(ErrorKind::DiagonalInput, "Hamiltonian2: coupling b must be nonzero");
  }
  return {tau, eta, b, mu};
}

Mat2 Hamiltonian2::matrix() const {
  return {tau + eta, b, mu - eta * eta / b, tau - eta};
}

Mat2 Hamiltonian2::traceless() const {
  return {eta, b, mu - eta * eta / b, -eta};
}

Hamiltonian2 hamiltonian_from_matrix(Complex a, Complex b, Complex c, Complex d) {
  if (std::abs(b) == 0.0) {
    throw Error(ErrorKind::DiagonalInput,
                "hamiltonian_from_matrix: upper coupling is zero (decoupled subsystems)");
  }
  const Complex tau = 0.5 * (a + d);
  const Complex eta = 0.5 * (a - d);
  return Hamiltonian2::make(tau, eta, b, c + eta * eta / b);
}

Spectrum2 eigenvalues(const Hamiltonian2& h, double tol) {
  const Complex root = std::sqrt(h.splitting_sq());
  Spectrum2 out{h.tau + root, h.tau - root, std::nullopt};
  if (std::abs(root.imag()) > tol * std::max(1.0, std::abs(root))) {
    out.dominant = root.imag() > 0.0 ? Dominant::Plus : Dominant::Minus;
  }
  return out;
}

std::vector<Vec2> eigenvectors(const Hamiltonian2& h, double tol) {
  if (is_exceptional(h, tol)) return {Vec2{h.b, -h.eta}};
  const Complex root = std::sqrt(h.splitting_sq());
  return {Vec2{h.b, -h.eta + root}, Vec2{h.b, -h.eta - root}};
}

bool is_exceptional(const Hamiltonian2& h, double tol) { return std::abs(h.mu) <= tol; }

Mat2 nilpotent_part(const Hamiltonian2& h, double tol) {
  if (!is_exceptional(h, tol)) {
    throw Error(ErrorKind::NotExceptional, "nilpotent_part: mu is not zero");
  }
  return {h.eta, h.b, -h.eta * h.eta / h.b, -h.eta};
}

JordanForm jordan_transform(const Hamiltonian2& h, double tol) {
  if (!is_exceptional(h, tol)) {
    throw Error(ErrorKind::NotExceptional, "jordan_transform: mu is not zero");
  }
  return {Mat2{h.b, 0.0, -h.eta, 1.0}, Mat2{h.tau, 1.0, 0.0, h.tau}};
}

MoebiusClass classify_hamiltonian(const Hamiltonian2& h, double tol) {
  const Complex s = h.splitting_sq();
  const double mag = std::abs(s);
  if (mag <= tol) return MoebiusClass::Parabolic;
  if (std::abs(s.imag()) <= tol * mag) {
    return s.real() > 0.0 ? MoebiusClass::Elliptic : MoebiusClass::Hyperbolic;
  }
  return MoebiusClass::Loxodromic;
}

std::optional<double> pseudo_hermitian_parameter(const Hamiltonian2& h, double tol) {
  const Complex s = h.mu * h.b / std::norm(h.b);  // mu / conj(b)
  const double mag = std::abs(s);
  if (mag <= tol) return 0.0;
  if (std::abs(s.imag()) <= tol * mag) return s.real();
  return std::nullopt;
}

}  // namespace nhf
