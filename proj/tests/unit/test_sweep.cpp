#include <catch_amalgamated.hpp>

#include <set>

#include "nhf/sweep.hpp"
#include "support/oracle.hpp"

using namespace nhf;

namespace {

SweepSpec small_spec(Family f, double alpha, std::size_t nd = 24, std::size_t nr = 12) {
  SweepSpec s;
  s.family = f;
  s.alpha = alpha;
  s.delta = {-0.5, 3.0, nd};
  s.rho = {0.0, 1.5, nr};
  return s;
}

}  // namespace

TEST_CASE("spec validation", "[sweep]") {
  SweepSpec s;
  CHECK_NOTHROW(s.validate());
  s.delta.count = 1;
  CHECK_THROWS_AS(s.validate(), Error);
  s = SweepSpec{};
  s.rho = {1.0, 0.5, 10};
  CHECK_THROWS_AS(s.validate(), Error);
  s = SweepSpec{};
  s.b = 0.0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = SweepSpec{};
  s.delta.max = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("axis sampling", "[sweep]") {
  const Axis a{-1.0, 6.0, 8};
  CHECK(a.at(0) == -1.0);
  CHECK(a.at(7) == 6.0);
  CHECK(a.spacing() == 1.0);
  CHECK(a.at(3) == 2.0);
}

TEST_CASE("cells reproduce the single-curve classification", "[sweep]") {
  const SweepSpec spec = small_spec(Family::Rectangular, 0.6, 6, 4);
  const ClassGrid g = run_sweep(spec, {1});
  REQUIRE(g.classes.size() == 24);
  REQUIRE(g.sigma.size() == 24);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const double d = spec.delta.at(j), r = spec.rho.at(i);
      const Monodromy m = monodromy(spec.curve(d, r));
      CHECK(g.at(i, j) == to_cell(classify_monodromy(m, spec.tol)));
      // Independent sigma from the first-order oracle.
      const oracle::M2 ref = r > 0.0 ? oracle::schrodinger_propagator(oracle::rectangle(d, r, 0.6), 1.0, 0.0, 4.0, 4, 2000)
                                     : oracle::expm_propagator(oracle::hamiltonian(0.0, 0.0, 1.0, d), 4.0);
      CHECK(std::abs(g.sigma[g.index(i, j)] - oracle::sigma(ref)) < 1e-7 * std::max(1.0, std::abs(oracle::sigma(ref))));
    }
  }
}

TEST_CASE("rectangular alpha = 0 matches the static case at rho = 0", "[sweep]") {
  const ClassGrid g = run_sweep(small_spec(Family::Rectangular, 0.0, 36, 6), {2});
  for (std::size_t j = 0; j < g.cols(); ++j) {
    const double d = g.spec.delta.at(j);
    const CellClass c = g.at(0, j);
    if (d < -1e-9) {
      CHECK(c == CellClass::Hyperbolic);
    } else if (d > 1e-9) {
      CHECK(is_stable(c));
    }
  }
}

TEST_CASE("circular columns are constant in rho", "[sweep][property]") {
  SweepSpec spec = small_spec(Family::Circular, 1.0, 30, 10);
  spec.rho.min = 0.05;
  const ClassGrid g = run_sweep(spec, {2});
  for (std::size_t j = 0; j < g.cols(); ++j) {
    std::set<CellClass> seen;
    for (std::size_t i = 0; i < g.rows(); ++i) {
      if (g.at(i, j) != CellClass::Unresolved) seen.insert(g.at(i, j));
    }
    CHECK(seen.size() == 1);
  }
  // Boundaries are vertical: every boundary point sits halfway between two delta columns.
  for (const auto& set : extract_boundaries(g)) {
    for (const auto& p : set.points) {
      const double u = (p.delta - spec.delta.min) / spec.delta.spacing();
      CHECK(std::abs(u - std::floor(u) - 0.5) < 1e-9);
    }
  }
}

TEST_CASE("real cosine sweep has no loxodromic cells", "[sweep][property]") {
  const ClassGrid g = run_sweep(small_spec(Family::Elliptical, 0.0, 30, 12), {3});
  for (std::size_t k = 0; k < g.classes.size(); ++k) {
    CHECK(g.classes[k] != CellClass::Loxodromic);
    CHECK(std::abs(g.sigma[k].imag()) < 1e-7 * std::max(1.0, std::abs(g.sigma[k])));
  }
}

TEST_CASE("results do not depend on the worker count", "[sweep][property]") {
  const SweepSpec spec = small_spec(Family::Elliptical, 0.5, 20, 9);
  const ClassGrid a = run_sweep(spec, {1});
  for (std::size_t w : {2, 3, 8, 32}) {
    const ClassGrid b = run_sweep(spec, {w});
    REQUIRE(a.classes == b.classes);
    for (std::size_t k = 0; k < a.sigma.size(); ++k) {
      REQUIRE(std::bit_cast<std::uint64_t>(a.sigma[k].real()) == std::bit_cast<std::uint64_t>(b.sigma[k].real()));
      REQUIRE(std::bit_cast<std::uint64_t>(a.sigma[k].imag()) == std::bit_cast<std::uint64_t>(b.sigma[k].imag()));
    }
  }
}

TEST_CASE("fixed-step engine agrees with the adaptive engine", "[sweep]") {
  SweepSpec spec = small_spec(Family::Elliptical, 0.3, 21, 6);
  const ClassGrid a = run_sweep(spec, {1});
  spec.engine = SweepEngine::FixedStep;
  spec.fixed_steps = 4000;
  const ClassGrid f = run_sweep(spec, {1});
  std::size_t disagree = 0;
  for (std::size_t k = 0; k < a.classes.size(); ++k) {
    CHECK(std::abs(a.sigma[k] - f.sigma[k]) < 1e-6 * std::max(1.0, std::abs(a.sigma[k])));
    disagree += a.classes[k] != f.classes[k];
  }
  // Only cells sitting on sigma = 4 to within the tolerance may flip.
  CHECK(disagree <= 1);
}

TEST_CASE("boundary extraction", "[sweep]") {
  SECTION("uniform grid has no boundaries") {
    ClassGrid g;
    g.spec = small_spec(Family::Elliptical, 0.0, 5, 4);
    g.classes.assign(20, CellClass::Elliptic);
    g.sigma.assign(20, Complex(1.0, 0.0));
    CHECK(extract_boundaries(g).empty());
  }
  SECTION("edges between classes yield midpoints") {
    ClassGrid g;
    g.spec = small_spec(Family::Elliptical, 0.0, 4, 3);
    g.spec.delta = {0.0, 3.0, 4};
    g.spec.rho = {0.0, 2.0, 3};
    g.classes = {CellClass::Elliptic, CellClass::Elliptic, CellClass::Hyperbolic, CellClass::Hyperbolic,
                 CellClass::Elliptic, CellClass::Elliptic, CellClass::Hyperbolic, CellClass::Unresolved,
                 CellClass::Elliptic, CellClass::Loxodromic, CellClass::Hyperbolic, CellClass::Hyperbolic};
    g.sigma.assign(12, Complex(1.0, 0.0));
    const auto sets = extract_boundaries(g);
    std::size_t eh = 0, el = 0, hl = 0;
    for (const auto& s : sets) {
      CHECK(static_cast<int>(s.a) < static_cast<int>(s.b));
      if (s.a == CellClass::Elliptic && s.b == CellClass::Hyperbolic) eh = s.points.size();
      if (s.a == CellClass::Elliptic && s.b == CellClass::Loxodromic) el = s.points.size();
      if (s.a == CellClass::Hyperbolic && s.b == CellClass::Loxodromic) hl = s.points.size();
    }
    CHECK(eh == 2);
    CHECK(el == 2);
    CHECK(hl == 1);
  }
  SECTION("refinement lands on sigma = 4") {
    SweepSpec spec = small_spec(Family::Elliptical, 0.0, 12, 4);
    spec.delta = {0.3, 1.0, 12};
    spec.rho = {0.2, 0.6, 4};
    const ClassGrid g = run_sweep(spec, {1});
    const auto sets = extract_boundaries(g, true, 1e-6);
    std::size_t refined = 0;
    for (const auto& s : sets) {
      for (const auto& p : s.points) {
        if (!p.refined) continue;
        ++refined;
        const Monodromy m = monodromy(spec.curve(p.delta, p.rho));
        // d sigma / d delta is O(10) here, so 1e-6 in delta is ~1e-5 in sigma.
        CHECK(std::abs(trace_square(m.m).real() - 4.0) < 1e-4);
      }
    }
    CHECK(refined > 0);
  }
}

TEST_CASE("connected components", "[sweep]") {
  ClassGrid g;
  g.spec = small_spec(Family::Elliptical, 0.0, 5, 3);
  g.spec.delta.count = 5;
  g.spec.rho.count = 3;
  using C = CellClass;
  g.classes = {C::Hyperbolic, C::Elliptic, C::Hyperbolic, C::Elliptic, C::Hyperbolic,
               C::Hyperbolic, C::Elliptic, C::Hyperbolic, C::Elliptic, C::Elliptic,
               C::Elliptic,   C::Elliptic, C::Elliptic,   C::Elliptic, C::Hyperbolic};
  g.sigma.assign(15, Complex{});
  int count = 0;
  const auto labels = label_components(g, [](C c) { return c == C::Hyperbolic; }, &count);
  CHECK(count == 4);
  CHECK(labels[0] == labels[5]);
  CHECK(labels[2] == labels[7]);
  CHECK(labels[1] == -1);
  CHECK(stable_cells(g) == 9);
}

TEST_CASE("quadratic family cell at rho = 1 is the canonical pair", "[sweep]") {
  SweepSpec spec;
  spec.family = Family::QuadraticPair;
  const ModulationCurve c = spec.curve(0.4, 1.0);
  const ModulationCurve q = quadratic_pair(0.4);
  for (int k = 0; k < 20; ++k) CHECK(std::abs(c.mu_at(0.1 * k) - q.mu_at(0.1 * k)) < 1e-15);
}

TEST_CASE("doubling the resolution keeps interior classes", "[sweep][property]") {
  SweepSpec coarse = small_spec(Family::Rectangular, 0.475, 31, 16);
  SweepSpec fine = coarse;
  fine.delta.count = 2 * coarse.delta.count - 1;
  fine.rho.count = 2 * coarse.rho.count - 1;
  const ClassGrid gc = run_sweep(coarse, {2});
  const ClassGrid gf = run_sweep(fine, {2});
  std::size_t interior = 0;
  for (std::size_t i = 1; i + 1 < gc.rows(); ++i) {
    for (std::size_t j = 1; j + 1 < gc.cols(); ++j) {
      bool uniform = true;
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) uniform = uniform && gc.at(i + di, j + dj) == gc.at(i, j);
      }
      if (!uniform) continue;
      ++interior;
      // Coarse node (i, j) is fine node (2i, 2j).
      CHECK(gf.at(2 * i, 2 * j) == gc.at(i, j));
    }
  }
  CHECK(interior > 100);
}

TEST_CASE("flattening the ellipse shrinks the stable region", "[sweep][property]") {
  std::size_t prev = 0;
  for (double alpha : {0.8, 0.9, 1.0}) {
    const std::size_t s = stable_cells(run_sweep(small_spec(Family::Elliptical, alpha, 60, 30), {2}));
    CHECK(s >= prev);
    prev = s;
  }
}

TEST_CASE("cosine chart tongues start at the parametric resonances", "[sweep]") {
  SweepSpec spec = small_spec(Family::Elliptical, 0.0, 121, 31);
  spec.delta = {0.0, 3.0, 121};
  spec.rho = {0.0, 1.5, 31};
  const ClassGrid g = run_sweep(spec, {2});
  spec.engine = SweepEngine::FixedStep;
  const ClassGrid oracle_grid = run_sweep(spec, {2});
  std::size_t disagree = 0;
  for (std::size_t k = 0; k < g.classes.size(); ++k) disagree += g.classes[k] != oracle_grid.classes[k];
  CHECK(disagree <= 2);

  // The lowest boundary points around each resonance (n pi / 4)^2 straddle it.
  const auto sets = extract_boundaries(g);
  for (int n : {1, 2}) {
    const double resonance = std::pow(n * std::numbers::pi / 4.0, 2);
    double low = 1e9;
    for (const auto& set : sets) {
      for (const auto& p : set.points) {
        if (std::abs(p.delta - resonance) < 0.4) low = std::min(low, p.rho);
      }
    }
    CHECK(low < 0.5);
    double lo = 1e9, hi = -1e9;
    for (const auto& set : sets) {
      for (const auto& p : set.points) {
        if (std::abs(p.delta - resonance) < 0.4 && p.rho <= low + 1e-12) {
          lo = std::min(lo, p.delta);
          hi = std::max(hi, p.delta);
        }
      }
    }
    CHECK(lo < resonance + spec.delta.spacing());
    CHECK(hi > resonance - spec.delta.spacing());
    CHECK(std::abs(0.5 * (lo + hi) - resonance) < 0.05);
  }
}

TEST_CASE("cells that fail to integrate are unresolved", "[sweep]") {
  SweepSpec spec = small_spec(Family::Elliptical, 0.0, 6, 4);
  spec.rho.min = 0.5;
  spec.integrator.max_steps = 2;
  const ClassGrid g = run_sweep(spec, {2});
  CHECK(g.unresolved() == g.classes.size());
  CHECK(extract_boundaries(g).empty());
  CHECK(stable_cells(g) == 0);
}
