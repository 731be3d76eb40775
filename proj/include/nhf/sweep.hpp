#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "nhf/floquet.hpp"

namespace nhf {

enum class Family { Rectangular, Elliptical, Circular, QuadraticPair };

std::string_view to_string(Family f);
std::optional<Family> family_from_string(std::string_view name);

struct Axis {
  double min = 0.0;
  double max = 1.0;
  std::size_t count = 2;

  double at(std::size_t i) const {
    if (i + 1 == count) return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  double spacing() const { return (max - min) / static_cast<double>(count - 1); }
};

enum class SweepEngine { Adaptive, FixedStep };

struct SweepSpec {
  Family family = Family::Elliptical;
  double alpha = 0.0;
  Axis delta{-1.0, 6.0, 400};
  Axis rho{0.0, 4.0, 300};
  /// Constant imaginary part added to every Delta (0: real Strutt axis).
  double delta_imag = 0.0;
  Complex b = 1.0;
  /// Angular frequency of the circular/elliptical families. The default gives
  /// period 4, the period of the rectangular and twice the quadratic family.
  double omega = std::numbers::pi / 2.0;
  IntegratorOptions integrator{};
  double tol = kMonodromyTol;
  SweepEngine engine = SweepEngine::Adaptive;
  std::size_t fixed_steps = 10'000;

  /// Throws InvalidArgument.
  void validate() const;

  /// Modulation curve of one cell. rho = 0 gives the constant curve with the
  /// family's segment layout; for the quadratic family rho scales the shape
  /// about delta (rho = 1 is the canonical pair).
  ModulationCurve curve(double delta, double rho) const;
};

/// Per-cell label; byte values are the serialised encoding.
enum class CellClass : std::uint8_t {
  Elliptic = 0,
  Hyperbolic = 1,
  Loxodromic = 2,
  Parabolic = 3,
  Identity = 4,
  Unresolved = 255,
};

CellClass to_cell(MoebiusClass c);
std::string_view to_string(CellClass c);
std::optional<CellClass> cell_class_from_string(std::string_view name);

/// Classes and sigma = Tr^2 (unit-determinant monodromy) on the grid.
/// Row-major with rho as the row index: cell (i_rho, i_delta) lives at
/// i_rho * delta.count + i_delta.
struct ClassGrid {
  SweepSpec spec;
  std::vector<CellClass> classes;
  std::vector<Complex> sigma;

  std::size_t cols() const { return spec.delta.count; }
  std::size_t rows() const { return spec.rho.count; }
  std::size_t index(std::size_t i_rho, std::size_t i_delta) const { return i_rho * cols() + i_delta; }
  CellClass at(std::size_t i_rho, std::size_t i_delta) const { return classes[index(i_rho, i_delta)]; }
  std::size_t unresolved() const;
};

struct SweepOptions {
  /// 0 selects std::thread::hardware_concurrency().
  std::size_t workers = 0;
};

ClassGrid run_sweep(const SweepSpec& spec, const SweepOptions& opts = {});

struct BoundaryPoint {
  double delta = 0.0;
  double rho = 0.0;
  bool refined = false;
};

/// Boundary points between two classes (a <= b in byte order).
struct BoundarySet {
  CellClass a;
  CellClass b;
  std::vector<BoundaryPoint> points;
};

/// Points on every edge between differently classified cells (unresolved
/// cells are skipped). With refine, edges between real-sigma cells on either
/// side of sigma = 4 are bisected on Re(sigma) - 4 down to refine_tol.
std::vector<BoundarySet> extract_boundaries(const ClassGrid& grid, bool refine = false,
                                            double refine_tol = 1e-6);

/// 4-connected components of the cells matching a predicate; returns one
/// label per cell, -1 outside the predicate. *count receives the number of
/// components.
std::vector<int> label_components(const ClassGrid& grid, const std::function<bool(CellClass)>& pred,
                                  int* count = nullptr);

/// Number of stable (elliptic or identity) cells.
std::size_t stable_cells(const ClassGrid& grid);

inline bool is_stable(CellClass c) { return c == CellClass::Elliptic || c == CellClass::Identity; }

}  // namespace nhf
