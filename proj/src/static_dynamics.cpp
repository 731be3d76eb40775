#include "nhf/static_dynamics.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "nhf/simd/kernels.hpp"

namespace nhf {

// ---------------------------------------------------------------------------
// Polarisation
// ---------------------------------------------------------------------------

Polarisation Polarisation::finite(Complex p) {
  Polarisation out;
  out.value_ = p;
  return out;
}

Polarisation Polarisation::infinity() {
  Polarisation out;
  out.infinite_ = true;
  return out;
}

Polarisation Polarisation::from_homogeneous(Complex x0, Complex x1) {
  if (x0 == Complex{}) {
    if (x1 == Complex{}) {
      throw Error(ErrorKind::InvalidArgument, "Polarisation: zero state has no polarisation");
    }
    return infinity();
  }
  return finite(x1 / x0);
}

std::array<double, 3> Polarisation::sphere() const {
  if (infinite_) return {0.0, 0.0, -1.0};
  const double r2 = std::norm(value_);
  const double inv = 1.0 / (1.0 + r2);
  return {2.0 * value_.real() * inv, 2.0 * value_.imag() * inv, (1.0 - r2) * inv};
}

State2 Polarisation::state() const {
  if (infinite_) return {0.0, 1.0};
  return {1.0, value_};
}

double chordal_distance(const Polarisation& a, const Polarisation& b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(b.value()));
  if (b.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(a.value()));
  const Complex p = a.value();
  const Complex q = b.value();
  return 2.0 * std::abs(p - q) / std::sqrt((1.0 + std::norm(p)) * (1.0 + std::norm(q)));
}

// ---------------------------------------------------------------------------
// Propagator
// ---------------------------------------------------------------------------

namespace {

constexpr double kSeriesRadius = 1e-4;

struct CosSinc {
  Complex cos;
  Complex sinc;
};

CosSinc cos_sinc(Complex z) {
  if (std::abs(z) < kSeriesRadius) {
    const Complex z2 = z * z;
    const Complex z4 = z2 * z2;
    return {1.0 - z2 / 2.0 + z4 / 24.0, 1.0 - z2 / 6.0 + z4 / 120.0};
  }
  return {std::cos(z), std::sin(z) / z};
}

}  // namespace

Propagator propagator(const Hamiltonian2& h, double t) {
  const Complex z = std::sqrt(h.splitting_sq()) * t;
  const auto [c, sc] = cos_sinc(z);
  const Complex phase = std::exp(-kI * h.tau * t);
  const Mat2 n = h.traceless();
  const Complex k = -kI * t * sc;
  const Mat2 u{c + k * n.m00, k * n.m01, k * n.m10, c + k * n.m11};
  return {phase * u, t};
}

State2 evolve(const Hamiltonian2& h, const State2& s, double t) {
  if (s.x0 == Complex{} && s.x1 == Complex{}) {
    throw Error(ErrorKind::InvalidArgument, "evolve: zero state");
  }
  return propagator(h, t).u * s;
}

Polarisation apply_moebius(const Mat2& u, const Polarisation& p) {
  const State2 img = u * p.state();
  return Polarisation::from_homogeneous(img.x0, img.x1);
}

Polarisation polarisation_flow(const Hamiltonian2& h, double t, const Polarisation& p0) {
  return apply_moebius(propagator(h, t).u, p0);
}

Complex trace_square(const Mat2& u) {
  const Complex tr = u.trace();
  return tr * tr / u.det();
}

MoebiusClass classify_transform(const Mat2& u, double tol) {
  const Complex det = u.det();
  if (!(std::abs(det) > 1e-300) || !is_finite(det)) {
    throw Error(ErrorKind::SingularMatrix, "classify_transform: determinant vanishes");
  }
  const Mat2 unit = (1.0 / std::sqrt(det)) * u;
  if ((unit - Mat2::identity()).max_abs() <= tol || (unit + Mat2::identity()).max_abs() <= tol) {
    return MoebiusClass::Identity;
  }
  const Complex tr = unit.trace();
  const Complex sigma = tr * tr;
  if (std::abs(sigma - 4.0) <= tol) return MoebiusClass::Parabolic;
  const double scale = std::max(1.0, std::abs(sigma));
  if (std::abs(sigma.imag()) <= tol * scale) {
    if (sigma.real() > 4.0) return MoebiusClass::Hyperbolic;
    if (sigma.real() >= -tol * scale) return MoebiusClass::Elliptic;
  }
  return MoebiusClass::Loxodromic;
}

Polarisation limit_polarisation(const Hamiltonian2& h, double tol) {
  if (is_exceptional(h, tol)) return Polarisation::finite(-h.eta / h.b);
  const Spectrum2 spec = eigenvalues(h, tol);
  if (!spec.dominant) {
    throw Error(ErrorKind::NoDominantState,
                "limit_polarisation: real splitting, no eigenvector dominates");
  }
  const Complex root = std::sqrt(h.splitting_sq());
  const Complex dominant_root = *spec.dominant == Dominant::Plus ? root : -root;
  return Polarisation::finite((-h.eta + dominant_root) / h.b);
}

std::vector<Polarisation> eigen_polarisations(const Hamiltonian2& h, double tol) {
  std::vector<Polarisation> out;
  for (const Vec2& v : eigenvectors(h, tol)) out.push_back(Polarisation::of(v));
  return out;
}

// ---------------------------------------------------------------------------
// Portraits
// ---------------------------------------------------------------------------

std::vector<Polarisation> sample_sphere(std::size_t n, std::uint64_t seed) {
  // mt19937_64 is fully specified by the standard; the 53-bit mantissa
  // construction avoids implementation-defined distribution algorithms.
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Polarisation> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 2.0 * uniform() - 1.0;
    const double phi = 2.0 * std::numbers::pi * uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    if (z <= -1.0) {
      out.push_back(Polarisation::infinity());
      continue;
    }
    // Inverse of the projection from the south pole.
    out.push_back(Polarisation::finite(Complex{r * std::cos(phi), r * std::sin(phi)} / (1.0 + z)));
  }
  return out;
}

Portrait poincare_portrait(const Hamiltonian2& h, std::size_t n_samples, double t_max,
                           std::size_t n_steps, std::uint64_t seed) {
  if (n_samples < 1) throw Error(ErrorKind::InvalidArgument, "portrait: n_samples must be >= 1");
  return poincare_portrait(h, sample_sphere(n_samples, seed), t_max, n_steps);
}

Portrait poincare_portrait(const Hamiltonian2& h, const std::vector<Polarisation>& initial,
                           double t_max, std::size_t n_steps) {
  if (initial.empty()) throw Error(ErrorKind::InvalidArgument, "portrait: no initial points");
  if (n_steps < 2) throw Error(ErrorKind::InvalidArgument, "portrait: n_steps must be >= 2");
  if (!std::isfinite(t_max)) throw Error(ErrorKind::InvalidArgument, "portrait: t_max not finite");

  const std::size_t n = initial.size();
  Portrait out;
  out.n_samples = n;
  out.times.resize(n_steps);
  for (std::size_t k = 0; k < n_steps; ++k) {
    out.times[k] = t_max * static_cast<double>(k) / static_cast<double>(n_steps - 1);
  }
  out.points.resize(n * n_steps);
  out.markers = eigen_polarisations(h);

  // Finite starting points go through the batched kernel; points at
  // infinity take the scalar path.
  std::vector<std::size_t> finite_idx;
  std::vector<double> p_re, p_im;
  for (std::size_t i = 0; i < n; ++i) {
    if (initial[i].is_infinite()) continue;
    finite_idx.push_back(i);
    p_re.push_back(initial[i].value().real());
    p_im.push_back(initial[i].value().imag());
  }
  const std::size_t m = finite_idx.size();
  std::vector<double> den_re(m), den_im(m), num_re(m), num_im(m);
  const simd::MoebiusBatch batch{{p_re, p_im}, {den_re, den_im}, {num_re, num_im}};

  for (std::size_t k = 0; k < n_steps; ++k) {
    const Mat2 u = propagator(h, out.times[k]).u;
    simd::moebius_apply(u, batch);
    for (std::size_t j = 0; j < m; ++j) {
      out.points[finite_idx[j] * n_steps + k] = Polarisation::from_homogeneous(
          Complex{den_re[j], den_im[j]}, Complex{num_re[j], num_im[j]});
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (initial[i].is_infinite()) out.points[i * n_steps + k] = apply_moebius(u, initial[i]);
    }
  }
  return out;
}

}  // namespace nhf
