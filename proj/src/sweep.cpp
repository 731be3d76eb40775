#include "nhf/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

namespace nhf {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Rectangular: return "rectangular";
    case Family::Elliptical: return "elliptical";
    case Family::Circular: return "circular";
    case Family::QuadraticPair: return "quadratic";
  }
  return "?";
}

std::optional<Family> family_from_string(std::string_view name) {
  for (auto f : {Family::Rectangular, Family::Elliptical, Family::Circular, Family::QuadraticPair}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

CellClass to_cell(MoebiusClass c) {
  switch (c) {
    case MoebiusClass::Elliptic: return CellClass::Elliptic;
    case MoebiusClass::Hyperbolic: return CellClass::Hyperbolic;
    case MoebiusClass::Loxodromic: return CellClass::Loxodromic;
    case MoebiusClass::Parabolic: return CellClass::Parabolic;
    case MoebiusClass::Identity: return CellClass::Identity;
  }
  return CellClass::Unresolved;
}

std::string_view to_string(CellClass c) {
  switch (c) {
    case CellClass::Elliptic: return "Elliptic";
    case CellClass::Hyperbolic: return "Hyperbolic";
    case CellClass::Loxodromic: return "Loxodromic";
    case CellClass::Parabolic: return "Parabolic";
    case CellClass::Identity: return "Identity";
    case CellClass::Unresolved: return "Unresolved";
  }
  return "?";
}

std::optional<CellClass> cell_class_from_string(std::string_view name) {
  for (auto c : {CellClass::Elliptic, CellClass::Hyperbolic, CellClass::Loxodromic,
                 CellClass::Parabolic, CellClass::Identity, CellClass::Unresolved}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

namespace {

void check_axis(const Axis& a, const char* name) {
  if (a.count < 2 || !std::isfinite(a.min) || !std::isfinite(a.max) || !(a.min < a.max)) {
    throw Error(ErrorKind::InvalidArgument,
                std::string("SweepSpec: ") + name + " axis needs count >= 2 and finite min < max");
  }
}

}  // namespace

void SweepSpec::validate() const {
  check_axis(delta, "delta");
  check_axis(rho, "rho");
  if (rho.min < 0.0) throw Error(ErrorKind::InvalidArgument, "SweepSpec: rho must be >= 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::InvalidArgument, "SweepSpec: alpha must be finite and >= 0");
  }
  if (!std::isfinite(delta_imag)) throw Error(ErrorKind::InvalidArgument, "SweepSpec: delta_imag");
  if (!is_finite(b) || std::abs(b) == 0.0) {
    throw Error(ErrorKind::DiagonalInput, "SweepSpec: coupling b must be finite and nonzero");
  }
  if (omega == 0.0 || !std::isfinite(omega)) {
    throw Error(ErrorKind::InvalidArgument, "SweepSpec: omega must be finite and nonzero");
  }
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "SweepSpec: tol must be positive");
  if (engine == SweepEngine::FixedStep && fixed_steps < 4) {
    throw Error(ErrorKind::InvalidArgument, "SweepSpec: fixed_steps must be >= 4");
  }
}

ModulationCurve SweepSpec::curve(double d_re, double r) const {
  const Complex d{d_re, delta_imag};
  switch (family) {
    case Family::Rectangular: {
      if (r > 0.0) return rectangular(d, r, alpha, b);
      std::vector<Segment> segs(4, Segment::linear(d, 0.0, 1.0));
      return ModulationCurve(std::move(segs), b, 0.0, "rectangular");
    }
    case Family::Elliptical:
      return elliptical(d, r, alpha, omega, b);
    case Family::Circular:
      return circular(d, r, omega, b);
    case Family::QuadraticPair: {
      const ModulationCurve shape = quadratic_pair(0.0);
      std::vector<Segment> segs;
      for (const Segment& s : shape.segments()) {
        segs.push_back(Segment::quadratic(d + r * s.c0, r * s.c1, r * s.c2, s.duration));
      }
      return ModulationCurve(std::move(segs), b, 0.0, "quadratic");
    }
  }
  throw Error(ErrorKind::InvalidArgument, "SweepSpec: unknown family");
}

std::size_t ClassGrid::unresolved() const {
  return static_cast<std::size_t>(std::count(classes.begin(), classes.end(), CellClass::Unresolved));
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CellResult {
  CellClass cls = CellClass::Unresolved;
  Complex sigma{kNaN, kNaN};
};

CellResult classify_cell(const Monodromy& m, double tol) {
  if (!is_finite(m.m)) return {};
  try {
    return {to_cell(classify_monodromy(m, tol)), trace_square(m.m)};
  } catch (const Error&) {
    return {};
  }
}

CellResult adaptive_cell(const SweepSpec& spec, double delta, double rho) {
  try {
    return classify_cell(monodromy(spec.curve(delta, rho), spec.integrator), spec.tol);
  } catch (const Error&) {
    return {};
  }
}

constexpr std::size_t kLaneChunk = 8;

void fixed_step_row(const SweepSpec& spec, std::size_t i_rho, ClassGrid& grid) {
  const double rho = spec.rho.at(i_rho);
  const std::size_t cols = spec.delta.count;
  for (std::size_t j0 = 0; j0 < cols; j0 += kLaneChunk) {
    const std::size_t j1 = std::min(cols, j0 + kLaneChunk);
    std::vector<ModulationCurve> curves;
    curves.reserve(j1 - j0);
    for (std::size_t j = j0; j < j1; ++j) curves.push_back(spec.curve(spec.delta.at(j), rho));
    try {
      const std::vector<Monodromy> ms = monodromy_fixed_step(curves, spec.fixed_steps);
      for (std::size_t j = j0; j < j1; ++j) {
        const CellResult r = classify_cell(ms[j - j0], spec.tol);
        grid.classes[grid.index(i_rho, j)] = r.cls;
        grid.sigma[grid.index(i_rho, j)] = r.sigma;
      }
    } catch (const Error&) {
      // Cells keep their Unresolved initial value.
    }
  }
}

void sweep_rows(const SweepSpec& spec, std::size_t row_begin, std::size_t row_end, ClassGrid& grid) {
  for (std::size_t i = row_begin; i < row_end; ++i) {
    if (spec.engine == SweepEngine::FixedStep) {
      fixed_step_row(spec, i, grid);
      continue;
    }
    const double rho = spec.rho.at(i);
    for (std::size_t j = 0; j < spec.delta.count; ++j) {
      const CellResult r = adaptive_cell(spec, spec.delta.at(j), rho);
      grid.classes[grid.index(i, j)] = r.cls;
      grid.sigma[grid.index(i, j)] = r.sigma;
    }
  }
}

}  // namespace

ClassGrid run_sweep(const SweepSpec& spec, const SweepOptions& opts) {
  spec.validate();
  ClassGrid grid;
  grid.spec = spec;
  const std::size_t cells = spec.delta.count * spec.rho.count;
  grid.classes.assign(cells, CellClass::Unresolved);
  grid.sigma.assign(cells, Complex{kNaN, kNaN});

  std::size_t workers = opts.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t rows = spec.rho.count;
  workers = std::min(workers, rows);

  // Static contiguous row blocks; every cell is written by exactly one worker.
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = rows * w / workers;
    const std::size_t end = rows * (w + 1) / workers;
    pool.emplace_back([&spec, &grid, begin, end] { sweep_rows(spec, begin, end, grid); });
  }
  for (auto& t : pool) t.join();
  return grid;
}

namespace {

double sigma_excess(const SweepSpec& spec, double delta, double rho) {
  const Monodromy m = monodromy(spec.curve(delta, rho), spec.integrator);
  return trace_square(m.m).real() - 4.0;
}

bool is_real_sigma_class(CellClass c) {
  return c == CellClass::Elliptic || c == CellClass::Hyperbolic || c == CellClass::Parabolic;
}

}  // namespace

std::vector<BoundarySet> extract_boundaries(const ClassGrid& grid, bool refine, double refine_tol) {
  const SweepSpec& spec = grid.spec;
  std::map<std::pair<std::uint8_t, std::uint8_t>, std::vector<BoundaryPoint>> sets;

  auto edge = [&](std::size_t ia, std::size_t ja, std::size_t ib, std::size_t jb) {
    const CellClass ca = grid.at(ia, ja);
    const CellClass cb = grid.at(ib, jb);
    if (ca == cb || ca == CellClass::Unresolved || cb == CellClass::Unresolved) return;
    double d0 = spec.delta.at(ja), d1 = spec.delta.at(jb);
    double r0 = spec.rho.at(ia), r1 = spec.rho.at(ib);
    BoundaryPoint pt{0.5 * (d0 + d1), 0.5 * (r0 + r1), false};

    const double f0 = grid.sigma[grid.index(ia, ja)].real() - 4.0;
    const double f1 = grid.sigma[grid.index(ib, jb)].real() - 4.0;
    if (refine && is_real_sigma_class(ca) && is_real_sigma_class(cb) && std::isfinite(f0) &&
        std::isfinite(f1) && (f0 <= 0.0) != (f1 <= 0.0)) {
      try {
        double fa = f0;
        // Bisect along the edge (only one coordinate differs).
        while (std::max(std::abs(d1 - d0), std::abs(r1 - r0)) > refine_tol) {
          const double dm = 0.5 * (d0 + d1);
          const double rm = 0.5 * (r0 + r1);
          const double fm = sigma_excess(spec, dm, rm);
          if ((fm <= 0.0) == (fa <= 0.0)) {
            d0 = dm;
            r0 = rm;
            fa = fm;
          } else {
            d1 = dm;
            r1 = rm;
          }
        }
        pt = {0.5 * (d0 + d1), 0.5 * (r0 + r1), true};
      } catch (const Error&) {
        // Keep the midpoint.
      }
    }
    const auto a = static_cast<std::uint8_t>(ca);
    const auto b = static_cast<std::uint8_t>(cb);
    sets[{std::min(a, b), std::max(a, b)}].push_back(pt);
  };

  for (std::size_t i = 0; i < grid.rows(); ++i) {
    for (std::size_t j = 0; j < grid.cols(); ++j) {
      if (j + 1 < grid.cols()) edge(i, j, i, j + 1);
      if (i + 1 < grid.rows()) edge(i, j, i + 1, j);
    }
  }

  std::vector<BoundarySet> out;
  for (auto& [key, pts] : sets) {
    out.push_back({static_cast<CellClass>(key.first), static_cast<CellClass>(key.second), std::move(pts)});
  }
  return out;
}

std::vector<int> label_components(const ClassGrid& grid, const std::function<bool(CellClass)>& pred,
                                  int* count) {
  const std::size_t rows = grid.rows();
  const std::size_t cols = grid.cols();
  std::vector<int> label(rows * cols, -1);
  int next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < rows * cols; ++start) {
    if (label[start] != -1 || !pred(grid.classes[start])) continue;
    label[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      const std::size_t i = cur / cols;
      const std::size_t j = cur % cols;
      auto visit = [&](std::size_t ni, std::size_t nj) {
        const std::size_t k = ni * cols + nj;
        if (label[k] == -1 && pred(grid.classes[k])) {
          label[k] = next;
          stack.push_back(k);
        }
      };
      if (i > 0) visit(i - 1, j);
      if (i + 1 < rows) visit(i + 1, j);
      if (j > 0) visit(i, j - 1);
      if (j + 1 < cols) visit(i, j + 1);
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

std::size_t stable_cells(const ClassGrid& grid) {
  return static_cast<std::size_t>(std::count_if(grid.classes.begin(), grid.classes.end(), is_stable));
}

}  // namespace nhf
