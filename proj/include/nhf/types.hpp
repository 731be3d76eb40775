#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace nhf {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Default relative tolerance for the static classification predicates.
inline constexpr double kDefaultTol = 1e-9;

/// Default tolerance for classifying numerically integrated monodromies.
inline constexpr double kMonodromyTol = 1e-7;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorKind {
  DiagonalInput,
  NotExceptional,
  SingularMatrix,
  NoDominantState,
  IntegratorFailure,
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// ---------------------------------------------------------------------------
// 2-vectors and 2x2 matrices over C
// ---------------------------------------------------------------------------

struct Vec2 {
  Complex x0{};
  Complex x1{};

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Row-major complex 2x2 matrix [[m00, m01], [m10, m11]].
struct Mat2 {
  Complex m00{};
  Complex m01{};
  Complex m10{};
  Complex m11{};

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 zero() { return {}; }

  Complex trace() const { return m00 + m11; }
  Complex det() const { return m00 * m11 - m01 * m10; }

  Mat2 inverse() const {
    const Complex d = det();
    if (d == Complex{}) {
      throw Error(ErrorKind::SingularMatrix, "Mat2::inverse: singular matrix");
    }
    return {m11 / d, -m01 / d, -m10 / d, m00 / d};
  }

  /// Largest entry modulus.
  double max_abs() const {
    return std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11)});
  }

  /// Frobenius norm.
  double norm() const {
    return std::sqrt(std::norm(m00) + std::norm(m01) + std::norm(m10) + std::norm(m11));
  }

  friend bool operator==(const Mat2&, const Mat2&) = default;
};

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
}

inline Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
}

inline Mat2 operator*(Complex s, const Mat2& a) {
  return {s * a.m00, s * a.m01, s * a.m10, s * a.m11};
}

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
          a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

inline Vec2 operator*(const Mat2& a, const Vec2& v) {
  return {a.m00 * v.x0 + a.m01 * v.x1, a.m10 * v.x0 + a.m11 * v.x1};
}

inline double norm(const Vec2& v) { return std::sqrt(std::norm(v.x0) + std::norm(v.x1)); }

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline bool is_finite(const Mat2& m) {
  return is_finite(m.m00) && is_finite(m.m01) && is_finite(m.m10) && is_finite(m.m11);
}

/// Eigenvalues of a general 2x2 matrix from its trace and determinant.
/// The first root takes the principal square root of the discriminant.
inline std::array<Complex, 2> eigenvalues(const Mat2& m) {
  const Complex half_tr = 0.5 * m.trace();
  const Complex disc = std::sqrt(half_tr * half_tr - m.det());
  // Avoid cancellation in the smaller root.
  const Complex big = (std::real(std::conj(half_tr) * disc) >= 0.0) ? half_tr + disc : half_tr - disc;
  if (big == Complex{}) return {Complex{}, Complex{}};
  const Complex small = m.det() / big;
  if (big == half_tr + disc) return {big, small};
  return {small, big};
}

}  // namespace nhf
