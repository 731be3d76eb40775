// Acceptance criteria 1-10. Each criterion prints one PASS/FAIL line; pass
// criterion numbers on the command line to run a subset.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nhf/floquet.hpp"
#include "nhf/io/csv.hpp"
#include "nhf/io/grid_io.hpp"
#include "nhf/sweep.hpp"
#include "support/random.hpp"

using namespace nhf;
using std::numbers::pi;

namespace {

// Tolerances and budgets.
constexpr double kEpPropagatorTol = 1e-10;
constexpr double kEpPropagatorSeconds = 1.0;
constexpr double kLimitChordalTol = 1e-6;
constexpr double kLimitSeconds = 5.0;
constexpr double kCircularLambdaTol = 1e-6;
constexpr double kCircularSeconds = 10.0;
constexpr double kRectangularEpTol = 1e-3;
constexpr double kRectangularEpDelta = 2.394756696;
constexpr double kOracleTol = 1e-6;
constexpr std::size_t kOracleSteps = 10'000;
constexpr double kOracleSeconds = 30.0;
constexpr double kSweepSeconds = 300.0;
constexpr double kFloquetRelationTol = 1e-7;
constexpr double kDetTol = 1e-8;
constexpr double kWronskianTol = 1e-8;
constexpr double kMoebiusStateTol = 1e-9;
constexpr double kRealTraceTol = 1e-8;

using EMat = Eigen::Matrix2cd;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

EMat to_eigen(const Mat2& m) {
  EMat e;
  e << m.m00, m.m01, m.m10, m.m11;
  return e;
}

double rel(const EMat& a, const EMat& b) { return (a - b).norm() / b.norm(); }

double chordal(Complex p, Complex q) {
  return 2.0 * std::abs(p - q) / std::sqrt((1.0 + std::norm(p)) * (1.0 + std::norm(q)));
}

double chordal(const Polarisation& a, const Polarisation& b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(b.value()));
  if (b.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(a.value()));
  return chordal(a.value(), b.value());
}

Complex random_phase(testing_rng::Source& rng, double magnitude) {
  return std::polar(magnitude, rng.uniform(-pi, pi));
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// 1 -------------------------------------------------------------------------

void criterion_1(Outcome& o) {
  testing_rng::Source rng(101);
  Stopwatch clock;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    // tau real: its phase factor is a scalar, and an imaginary part of up to
    // 100 at t = 10 overflows a double.
    const double tau = rng.log_uniform(1e-2, 1e2) * (rng.uniform(0, 1) < 0.5 ? -1.0 : 1.0);
    const Complex eta = random_phase(rng, rng.log_uniform(1e-2, 1e2));
    const Complex b = random_phase(rng, rng.log_uniform(1e-2, 1e2));
    const Hamiltonian2 h = Hamiltonian2::make(tau, eta, b, 0.0);
    EMat n;
    n << eta, b, -eta * eta / b, -eta;
    for (double t : {0.1, 1.0, 10.0}) {
      const EMat ref = std::exp(Complex(0.0, -tau * t)) * (EMat::Identity() - Complex(0.0, t) * n);
      worst = std::max(worst, rel(to_eigen(propagator(h, t).u), ref));
    }
  }
  const double secs = clock.seconds();
  o.require(worst <= kEpPropagatorTol, "max relative error " + fmt(worst));
  o.require(secs < kEpPropagatorSeconds, "runtime " + fmt(secs) + " s");
  o.detail << (o.pass ? "" : "; ") << "150 propagators, max rel err " << fmt(worst) << ", " << fmt(secs) << " s";
}

// 2 -------------------------------------------------------------------------

void criterion_2(Outcome& o) {
  testing_rng::Source rng(202);
  Stopwatch clock;
  double worst = 0.0;
  int cases = 0;
  while (cases < 20) {
    const Complex tau = random_phase(rng, rng.log_uniform(1e-1, 1e1));
    const Complex eta = random_phase(rng, rng.log_uniform(1e-1, 1e1));
    const Complex b = random_phase(rng, rng.log_uniform(1e-1, 1e1));
    const Complex mu = random_phase(rng, rng.log_uniform(1e-1, 1e1));
    Complex root = std::sqrt(b * mu);
    if (std::abs(root.imag()) < 1e-2 * std::abs(root)) continue;  // too close to the real bmu axis
    const Hamiltonian2 h = Hamiltonian2::make(tau, eta, b, mu);
    if (classify_hamiltonian(h) != MoebiusClass::Loxodromic) {
      o.require(false, "sampled Hamiltonian not loxodromic");
      return;
    }
    if (root.imag() < 0.0) root = -root;
    const Complex target = (-eta + root) / b;
    const Complex repulsive = (-eta - root) / b;
    const double t = 50.0 / std::abs(root.imag());
    for (int s = 0; s < 20; ++s) {
      Complex p0;
      do {
        p0 = rng.complex_box(3.0);
      } while (chordal(p0, repulsive) < 1e-3);
      const Polarisation p = polarisation_flow(h, t, Polarisation::finite(p0));
      worst = std::max(worst, chordal(p, Polarisation::finite(target)));
    }
    ++cases;
  }
  const double secs = clock.seconds();
  o.require(worst < kLimitChordalTol, "max chordal distance " + fmt(worst));
  o.require(secs < kLimitSeconds, "runtime " + fmt(secs) + " s");
  o.detail << (o.pass ? "" : "; ") << "400 flows, max chordal distance " << fmt(worst) << ", " << fmt(secs) << " s";
}

// 3 -------------------------------------------------------------------------

void criterion_3(Outcome& o) {
  testing_rng::Source rng(303);
  std::map<MoebiusClass, int> counts;
  int wrong = 0, parabolic = 0;
  auto check = [&](Complex b, Complex mu, MoebiusClass expected) {
    const Hamiltonian2 h = Hamiltonian2::make(rng.complex_box(2.0), rng.complex_box(2.0), b, mu);
    const MoebiusClass got = classify_hamiltonian(h);
    wrong += got != expected;
    parabolic += got == MoebiusClass::Parabolic;
    ++counts[expected];
  };
  for (int k = 0; k < 300; ++k) check(1.0, rng.log_uniform(1e-6, 1e6), MoebiusClass::Elliptic);
  for (int k = 0; k < 300; ++k) check(1.0, -rng.log_uniform(1e-6, 1e6), MoebiusClass::Hyperbolic);
  for (int k = 0; k < 299; ++k) {
    double phase = rng.uniform(-pi, pi);
    if (std::abs(std::sin(phase)) < 1e-6) phase += 0.5;
    check(1.0, std::polar(rng.log_uniform(1e-6, 1e6), phase), MoebiusClass::Loxodromic);
  }
  // Complex b with bmu on the real axis exercises the product rather than mu alone.
  for (int k = 0; k < 50; ++k) {
    const double r = rng.log_uniform(1e-2, 1e2);
    check(Complex(0.0, r), Complex(0.0, -rng.log_uniform(1e-2, 1e2)), MoebiusClass::Elliptic);
    check(Complex(0.0, r), Complex(0.0, rng.log_uniform(1e-2, 1e2)), MoebiusClass::Hyperbolic);
  }
  check(random_phase(rng, 3.0), 0.0, MoebiusClass::Parabolic);
  int total = 0;
  for (const auto& [c, n] : counts) total += n;
  o.require(total == 1000, "sample size " + std::to_string(total));
  o.require(wrong == 0, std::to_string(wrong) + " misclassified");
  o.require(parabolic == 1, std::to_string(parabolic) + " parabolic results (expected only bmu = 0)");
  o.detail << (o.pass ? "" : "; ") << total << " samples, " << wrong << " misclassified";
}

// 4 -------------------------------------------------------------------------

void criterion_4(Outcome& o) {
  Stopwatch clock;
  double worst = 0.0, spread = 0.0;
  for (double delta : {0.09, 0.25, 0.49}) {
    const double root = std::sqrt(delta);
    std::vector<std::array<Complex, 2>> per_rho;
    for (double rho : {0.3, 1.0, 2.0}) {
      const FloquetSpectrum s = floquet_spectrum(monodromy(circular(delta, rho, 2.0 * pi)));
      std::array<Complex, 2> l = s.lambda;
      if (l[0].real() < l[1].real()) std::swap(l[0], l[1]);
      worst = std::max({worst, std::abs(l[0] - root), std::abs(l[1] + root)});
      per_rho.push_back(l);
    }
    for (const auto& l : per_rho) {
      spread = std::max({spread, std::abs(l[0] - per_rho[0][0]), std::abs(l[1] - per_rho[0][1])});
    }
  }
  const double secs = clock.seconds();
  o.require(worst < kCircularLambdaTol, "max |lambda - sqrt(Delta)| " + fmt(worst));
  o.require(spread < kCircularLambdaTol, "rho spread " + fmt(spread));
  o.require(secs < kCircularSeconds, "runtime " + fmt(secs) + " s");
  o.detail << (o.pass ? "" : "; ") << "max |lambda -+ sqrt(Delta)| " << fmt(worst) << ", rho spread " << fmt(spread)
           << ", " << fmt(secs) << " s";
}

// 5 -------------------------------------------------------------------------

void criterion_5(Outcome& o) {
  int hits = 0;
  for (double rho : {0.5, 1.0, 2.0}) {
    for (double omega : {2.0 * pi, 4.0 * pi}) {
      const bool ep = is_floquet_ep(monodromy(circular(0.0, rho, omega)));
      o.require(ep, "circular(0, " + fmt(rho) + ", " + fmt(omega) + ") is not a Floquet EP");
      hits += ep;
    }
  }
  const bool off = is_floquet_ep(monodromy(circular(0.1, 1.0, 2.0 * pi)));
  o.require(!off, "circular(0.1, 1) reported as a Floquet EP");
  o.detail << (o.pass ? "" : "; ") << hits << "/6 centred curves parabolic, off-centre curve "
           << (off ? "parabolic" : "not parabolic");
}

// 6 -------------------------------------------------------------------------

// sigma on the real Delta axis of the rectangular family (real by the
// conjugation symmetry of the curve).
double rect_sigma_minus_4(double delta, double rho, double alpha) {
  return trace_square(monodromy(rectangular(delta, rho, alpha)).m).real() - 4.0;
}

void criterion_6(Outcome& o) {
  // Quadratic pair at Delta = 0.
  const ModulationCurve q = quadratic_pair(0.0);
  const Monodromy mq = monodromy(q);
  const bool q_ep = is_floquet_ep(mq);
  const int q_wind = winding_number(q, 0.0);
  const Complex q_sigma = trace_square(mq.m);
  o.require(q_ep, "quadratic_pair(0) is " + std::string(to_string(classify_monodromy(mq))) + " with sigma = " +
                      fmt(q_sigma.real()) + (q_sigma.imag() < 0 ? "" : "+") + fmt(q_sigma.imag()) + "i");
  o.require(q_wind == 0, "quadratic_pair(0) winding number " + std::to_string(q_wind));

  // Nearest quadratic Floquet EP by Newton iteration on sigma(Delta) = 4.
  Complex d = 0.0;
  for (int it = 0; it < 40; ++it) {
    const Complex f = trace_square(monodromy(quadratic_pair(d)).m) - 4.0;
    const Complex h(1e-6, 0.0);
    const Complex df = (trace_square(monodromy(quadratic_pair(d + h)).m) - trace_square(monodromy(quadratic_pair(d - h)).m)) / (2.0 * h);
    const Complex step = f / df;
    d -= step;
    if (std::abs(step) < 1e-13) break;
  }
  const bool d_ep = is_floquet_ep(monodromy(quadratic_pair(d)));

  // Rectangular family: coarse (rho, alpha) grid, bisection in Delta.
  const double lo = 2.2, hi = 2.6;
  struct Hit {
    double rho, alpha, delta;
  };
  std::vector<Hit> hits;
  for (int i = 1; i <= 25; ++i) {
    const double rho = 0.1 * i;
    for (int j = 0; j <= 20; ++j) {
      const double alpha = 0.05 * j;
      const int n = 16;
      double prev_x = lo, prev_f = rect_sigma_minus_4(lo, rho, alpha);
      for (int k = 1; k <= n; ++k) {
        const double x = lo + (hi - lo) * k / n;
        const double f = rect_sigma_minus_4(x, rho, alpha);
        if ((prev_f < 0) != (f < 0)) {
          double a = prev_x, b = x, fa = prev_f;
          while (b - a > 1e-12) {
            const double m = 0.5 * (a + b);
            const double fm = rect_sigma_minus_4(m, rho, alpha);
            if ((fa < 0) == (fm < 0)) {
              a = m;
              fa = fm;
            } else {
              b = m;
            }
          }
          hits.push_back({rho, alpha, 0.5 * (a + b)});
        }
        prev_x = x;
        prev_f = f;
      }
    }
  }
  const auto best = std::min_element(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return std::abs(a.delta - kRectangularEpDelta) < std::abs(b.delta - kRectangularEpDelta);
  });
  if (best == hits.end()) {
    o.require(false, "rectangular scan found no sigma = 4 crossing");
  } else {
    const ModulationCurve r = rectangular(best->delta, best->rho, best->alpha);
    const Monodromy mr = monodromy(r);
    const double diff = best->delta - kRectangularEpDelta;
    o.require(std::abs(diff) < kRectangularEpTol, "nearest rectangular EP off by " + fmt(diff));
    o.require(is_floquet_ep(mr), "rectangular root not parabolic");
    o.require(winding_number(r, 0.0) == 0, "rectangular EP curve encircles 0");
    o.detail << (o.pass ? "" : "; ") << "rectangular scan: " << hits.size() << " crossings, nearest at rho="
             << fmt(best->rho) << " alpha=" << fmt(best->alpha) << " Delta=" << io::format_double(best->delta)
             << " (diff " << fmt(diff) << ", parabolic, winding 0)";
  }
  o.detail << "; quadratic: nearest Floquet EP at Delta=" << fmt(d.real()) << (d.imag() < 0 ? "" : "+") << fmt(d.imag())
           << "i (" << (d_ep ? "parabolic" : "not parabolic") << ", winding " << winding_number(quadratic_pair(d), 0.0)
           << ")";
}

// 7 -------------------------------------------------------------------------

void criterion_7(Outcome& o) {
  Stopwatch clock;
  const std::vector<std::pair<std::string, ModulationCurve>> presets{
      {"circular(1,1)", circular(1.0, 1.0, 2.0 * pi)},
      {"circular(0.5+0.3i,1)", circular(Complex(0.5, 0.3), 1.0, 2.0 * pi)},
      {"circular(0,1)", circular(0.0, 1.0, 2.0 * pi)},
      {"quadratic(0)", quadratic_pair(0.0)},
      {"quadratic(1.2+0.3i)", quadratic_pair(Complex(1.2, 0.3))},
      {"rectangular(0.153,1,1)", rectangular(0.153, 1.0, 1.0)},
      {"rectangular(0.27+0.32i,1,1)", rectangular(Complex(0.27, 0.32), 1.0, 1.0)},
      {"rectangular(2.3948,2.3,0.15)", rectangular(kRectangularEpDelta, 2.3, 0.15)},
      {"elliptical(1,1,0.5)", elliptical(1.0, 1.0, 0.5, pi / 2.0)},
      {"elliptical(2.5,1.5,0)", elliptical(2.5, 1.5, 0.0, pi / 2.0)},
      {"elliptical(0.6,2,1)", elliptical(0.6, 2.0, 1.0, pi / 2.0)},
  };
  double worst = 0.0;
  std::string worst_name;
  for (const auto& [name, curve] : presets) {
    const EMat a = to_eigen(monodromy(curve).m);
    const EMat f = to_eigen(monodromy_fixed_step(curve, kOracleSteps).m);
    const double r = rel(f, a);
    if (r > worst) {
      worst = r;
      worst_name = name;
    }
  }
  const double secs = clock.seconds();
  o.require(worst < kOracleTol, "max relative difference " + fmt(worst) + " (" + worst_name + ")");
  o.require(secs < kOracleSeconds, "runtime " + fmt(secs) + " s");
  o.detail << (o.pass ? "" : "; ") << presets.size() << " presets, max rel diff " << fmt(worst) << " ("
           << worst_name << "), " << fmt(secs) << " s";
}

// 8 -------------------------------------------------------------------------

SweepSpec desk_spec(Family f, double alpha) {
  SweepSpec s;
  s.family = f;
  s.alpha = alpha;
  s.delta = {-1.0, 6.0, 200};
  s.rho = {0.0, 4.0, 150};
  return s;
}

void criterion_8(Outcome& o) {
  Stopwatch clock;
  const SweepOptions opts{8};
  const ClassGrid g0 = run_sweep(desk_spec(Family::Elliptical, 0.0), opts);
  const ClassGrid g8 = run_sweep(desk_spec(Family::Elliptical, 0.8), opts);
  const ClassGrid gc = run_sweep(desk_spec(Family::Circular, 1.0), opts);
  const double secs = clock.seconds();

  // (a) tongues. Tongue n opens like rho^n from its tip on the axis at the
  // parametric resonance Delta_n = (n omega / 2)^2 / b, so the lowest
  // resolvable cell of tongue 3 sits well above rho = 0 at this resolution.
  // A component touches the axis when its lowest cell lies above a resonance
  // (within two Delta spacings); fragments of one thin tongue count once.
  int count = 0;
  const auto labels = label_components(
      g0, [](CellClass c) { return !is_stable(c) && c != CellClass::Unresolved; }, &count);
  const double half_omega = g0.spec.omega / 2.0;
  std::map<int, double> tongues;  // resonance index -> lowest rho of its tip
  std::size_t near_axis = 0;
  for (int comp = 0; comp < count; ++comp) {
    std::size_t low_row = g0.rows();
    double low_delta = 0.0;
    for (std::size_t i = 0; i < g0.rows() && low_row == g0.rows(); ++i) {
      for (std::size_t j = 0; j < g0.cols(); ++j) {
        if (labels[g0.index(i, j)] == comp) {
          low_row = i;
          low_delta = g0.spec.delta.at(j);
          break;
        }
      }
    }
    if (!(low_delta > 0.0)) continue;
    const int n = static_cast<int>(std::lround(std::sqrt(low_delta) / half_omega));
    const double resonance = std::pow(n * half_omega, 2);
    if (n < 1 || std::abs(low_delta - resonance) > 2.0 * g0.spec.delta.spacing()) continue;
    const double rho = g0.spec.rho.at(low_row);
    if (!tongues.count(n) || rho < tongues[n]) tongues[n] = rho;
    near_axis += low_row <= g0.rows() / 10;
  }
  o.require(tongues.size() >= 3, std::to_string(tongues.size()) + " tongues touch rho -> 0 at Delta > 0");

  // (b) circular columns.
  std::size_t mixed = 0;
  for (std::size_t j = 0; j < gc.cols(); ++j) {
    std::set<CellClass> seen;
    for (std::size_t i = 0; i < gc.rows(); ++i) seen.insert(gc.at(i, j));
    mixed += seen.size() != 1;
  }
  o.require(mixed == 0, std::to_string(mixed) + " circular columns change class");

  // (c) stable area.
  const std::size_t s0 = stable_cells(g0), s8 = stable_cells(g8);
  o.require(s8 >= s0, "stable cells alpha=0.8 " + std::to_string(s8) + " < alpha=0 " + std::to_string(s0));
  const std::size_t unresolved = g0.unresolved() + g8.unresolved() + gc.unresolved();
  o.require(unresolved == 0, std::to_string(unresolved) + " unresolved cells");
  o.require(secs < kSweepSeconds, "runtime " + fmt(secs) + " s");

  o.detail << (o.pass ? "" : "; ") << tongues.size() << " tongues (";
  for (const auto& [n, rho] : tongues) {
    o.detail << "n=" << n << " at Delta " << fmt(std::pow(n * half_omega, 2)) << " from rho " << fmt(rho) << ", ";
  }
  o.detail << near_axis << " within the lowest tenth of rho), " << mixed << " mixed circular columns, stable cells " << s0 << " (alpha 0) vs " << s8
           << " (alpha 0.8), 3 sweeps of 200x150 in " << fmt(secs) << " s";
}

// 9 -------------------------------------------------------------------------

std::string serialise(const ClassGrid& g) {
  std::ostringstream os;
  io::write_grid_csv(os, g);
  io::write_grid_binary(os, g);
  io::write_boundaries_csv(os, extract_boundaries(g, true));
  return os.str();
}

void criterion_9(Outcome& o) {
  std::size_t compared = 0;
  for (const SweepSpec& spec : {desk_spec(Family::Elliptical, 0.5), desk_spec(Family::Rectangular, 0.8)}) {
    const std::string ref = serialise(run_sweep(spec, {1}));
    for (std::size_t w : {4, 8}) {
      const std::string other = serialise(run_sweep(spec, {w}));
      o.require(other == ref, std::string(to_string(spec.family)) + " output differs with " + std::to_string(w) +
                                  " workers");
      ++compared;
    }
  }
  o.detail << (o.pass ? "" : "; ") << compared << " sweeps byte-identical to the single-worker output";
}

// 10 ------------------------------------------------------------------------

std::vector<std::pair<std::string, ModulationCurve>> property_curves() {
  return {
      {"circular", circular(Complex(0.4, 0.2), 0.8, 2.0 * pi)},
      {"quadratic", quadratic_pair(Complex(0.3, -0.1))},
      {"rectangular", rectangular(Complex(0.9, 0.1), 1.3, 0.6)},
      {"elliptical", elliptical(1.7, 1.1, 0.3, pi / 2.0)},
      {"detuned elliptical", elliptical(0.7, 0.5, 0.4, pi / 2.0, Complex(1.2, 0.3), Complex(0.2, -0.4))},
  };
}

void criterion_10(Outcome& o) {
  int checks = 0;
  double relation = 0.0, det_err = 0.0, wronskian = 0.0, moebius = 0.0;
  for (const auto& [name, curve] : property_curves()) {
    const double T = curve.period();
    const EMat m = to_eigen(monodromy(curve).m);
    for (double frac : {0.13, 0.5, 0.77}) {
      const std::vector<double> times{frac * T, (1.0 + frac) * T};
      const auto us = evolution_operators(curve, times);
      const double r = rel(to_eigen(us[1].u), to_eigen(us[0].u) * m);
      relation = std::max(relation, r);
      o.require(r < kFloquetRelationTol, name + ": Floquet relation " + fmt(r));
      for (const auto& u : us) {
        det_err = std::max(det_err, std::abs(u.u.det() - 1.0));
      }
      ++checks;
    }
    std::vector<double> grid;
    for (int k = 1; k <= 40; ++k) grid.push_back(T * k / 13.0);
    for (const HillSolution& s : integrate_hill(curve, grid)) {
      wronskian = std::max(wronskian, std::abs(s.y[0] * s.dy[1] - s.y[1] * s.dy[0] - 1.0));
      ++checks;
    }
  }
  o.require(det_err < kDetTol, "det U deviation " + fmt(det_err));
  o.require(wronskian < kWronskianTol, "Wronskian deviation " + fmt(wronskian));

  testing_rng::Source rng(1010);
  for (int k = 0; k < 100; ++k) {
    const Hamiltonian2 h = Hamiltonian2::make(rng.complex_box(1.0), rng.complex_box(1.0),
                                              random_phase(rng, rng.log_uniform(0.1, 10.0)), rng.complex_box(2.0));
    const State2 s{rng.complex_box(1.0), rng.complex_box(1.0)};
    const double t = rng.uniform(0.0, 3.0);
    const double d = chordal(Polarisation::of(evolve(h, s, t)), polarisation_flow(h, t, Polarisation::of(s)));
    moebius = std::max(moebius, d);
    ++checks;
  }
  o.require(moebius < kMoebiusStateTol, "Moebius/state chordal distance " + fmt(moebius));

  int loxodromic = 0;
  double trace_imag = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double delta = rng.uniform(-1.0, 6.0), rho = rng.uniform(0.0, 4.0);
    const Monodromy mm = monodromy(elliptical(delta, rho, 0.0, pi / 2.0));
    trace_imag = std::max(trace_imag, std::abs(mm.m.trace().imag()) / std::max(1.0, std::abs(mm.m.trace())));
    loxodromic += classify_monodromy(mm) == MoebiusClass::Loxodromic;
    ++checks;
  }
  o.require(trace_imag < kRealTraceTol, "Im tr M " + fmt(trace_imag));
  o.require(loxodromic == 0, std::to_string(loxodromic) + " loxodromic real-coefficient monodromies");

  o.detail << (o.pass ? "" : "; ") << checks << " checks: Floquet relation " << fmt(relation) << ", |det U - 1| "
           << fmt(det_err) << ", Wronskian " << fmt(wronskian) << ", Moebius/state " << fmt(moebius)
           << ", real-coefficient Im tr " << fmt(trace_imag) << " with " << loxodromic << " loxodromic";
}

const std::map<int, std::pair<const char*, std::function<void(Outcome&)>>> kCriteria{
    {1, {"static EP propagator", criterion_1}},
    {2, {"long-time polarisation", criterion_2}},
    {3, {"Moebius class table", criterion_3}},
    {4, {"circular Floquet eigenvalues", criterion_4}},
    {5, {"Floquet EP by centring", criterion_5}},
    {6, {"Floquet EP without encircling", criterion_6}},
    {7, {"adaptive vs fixed-step oracle", criterion_7}},
    {8, {"stability diagrams", criterion_8}},
    {9, {"sweep determinism", criterion_9}},
    {10, {"property suites", criterion_10}},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int k = 1; k < argc; ++k) {
    const int n = std::atoi(argv[k]);
    if (!kCriteria.count(n)) {
      std::fprintf(stderr, "unknown criterion '%s' (expected 1-10)\n", argv[k]);
      return 2;
    }
    selected.push_back(n);
  }
  if (selected.empty()) {
    for (const auto& [n, c] : kCriteria) selected.push_back(n);
  }
  int failures = 0;
  for (int n : selected) {
    const auto& [title, fn] = kCriteria.at(n);
    Outcome o;
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %2d %s  %s: %s\n", n, o.pass ? "PASS" : "FAIL", title, o.detail.str().c_str());
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
