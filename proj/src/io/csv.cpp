#include "nhf/io/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>

namespace nhf::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::InvalidArgument, "parse_double: bad number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

namespace {

std::size_t parse_index(std::string_view s) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{}) throw Error(ErrorKind::InvalidArgument, "csv: bad index");
  return v;
}

// Reads data rows after checking the header.
std::vector<std::vector<std::string>> read_rows(std::istream& is, std::string_view header,
                                                std::size_t fields) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::InvalidArgument, "csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw Error(ErrorKind::InvalidArgument, "csv: unexpected header '" + line + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto parts = split_csv(line);
    if (parts.size() != fields) throw Error(ErrorKind::InvalidArgument, "csv: wrong field count");
    rows.emplace_back(parts.begin(), parts.end());
  }
  return rows;
}

constexpr std::string_view kPortraitHeader = "sample_id,step,t,re_p,im_p,sphere_x,sphere_y,sphere_z";
constexpr std::string_view kTrajectoryHeader = "component,step,t,re,im";
constexpr std::string_view kGridHeader = "delta,rho,class,re_sigma,im_sigma";

}  // namespace

void write_portrait_csv(std::ostream& os, const Portrait& p) {
  os << kPortraitHeader << '\n';
  const std::size_t steps = p.times.size();
  for (std::size_t s = 0; s < p.n_samples; ++s) {
    for (std::size_t k = 0; k < steps; ++k) {
      const Polarisation& pol = p.at(s, k);
      const auto xyz = pol.sphere();
      const double inf = std::numeric_limits<double>::infinity();
      const double re = pol.is_infinite() ? inf : pol.value().real();
      const double im = pol.is_infinite() ? inf : pol.value().imag();
      os << s << ',' << k << ',' << format_double(p.times[k]) << ',' << format_double(re) << ','
         << format_double(im) << ',' << format_double(xyz[0]) << ',' << format_double(xyz[1]) << ','
         << format_double(xyz[2]) << '\n';
    }
  }
}

Portrait read_portrait_csv(std::istream& is) {
  const auto rows = read_rows(is, kPortraitHeader, 8);
  Portrait p;
  std::size_t max_sample = 0, max_step = 0;
  for (const auto& r : rows) {
    max_sample = std::max(max_sample, parse_index(r[0]));
    max_step = std::max(max_step, parse_index(r[1]));
  }
  if (rows.empty()) return p;
  p.n_samples = max_sample + 1;
  p.times.assign(max_step + 1, 0.0);
  p.points.assign(p.n_samples * p.times.size(), Polarisation{});
  for (const auto& r : rows) {
    const std::size_t s = parse_index(r[0]);
    const std::size_t k = parse_index(r[1]);
    p.times[k] = parse_double(r[2]);
    const double re = parse_double(r[3]);
    const double im = parse_double(r[4]);
    p.points[s * p.times.size() + k] =
        std::isinf(re) ? Polarisation::infinity() : Polarisation::finite({re, im});
  }
  return p;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << kTrajectoryHeader << '\n';
  for (int comp = 1; comp <= 2; ++comp) {
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
      const Complex z = comp == 1 ? tr.states[k].x0 : tr.states[k].x1;
      os << comp << ',' << k << ',' << format_double(tr.t[k]) << ',' << format_double(z.real()) << ','
         << format_double(z.imag()) << '\n';
    }
  }
}

Trajectory read_trajectory_csv(std::istream& is) {
  const auto rows = read_rows(is, kTrajectoryHeader, 5);
  Trajectory tr;
  std::size_t n = 0;
  for (const auto& r : rows) n = std::max(n, parse_index(r[1]) + 1);
  tr.t.assign(n, 0.0);
  tr.states.assign(n, State2{});
  for (const auto& r : rows) {
    const std::size_t comp = parse_index(r[0]);
    const std::size_t k = parse_index(r[1]);
    tr.t[k] = parse_double(r[2]);
    const Complex z{parse_double(r[3]), parse_double(r[4])};
    if (comp == 1) {
      tr.states[k].x0 = z;
    } else if (comp == 2) {
      tr.states[k].x1 = z;
    } else {
      throw Error(ErrorKind::InvalidArgument, "trajectory csv: component must be 1 or 2");
    }
  }
  return tr;
}

void write_grid_csv(std::ostream& os, const ClassGrid& g) {
  os << kGridHeader << '\n';
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const Complex s = g.sigma[g.index(i, j)];
      os << format_double(g.spec.delta.at(j)) << ',' << format_double(g.spec.rho.at(i)) << ','
         << to_string(g.at(i, j)) << ',' << format_double(s.real()) << ',' << format_double(s.imag())
         << '\n';
    }
  }
}

ClassGrid read_grid_csv(std::istream& is) {
  const auto rows = read_rows(is, kGridHeader, 5);
  std::set<double> deltas, rhos;
  for (const auto& r : rows) {
    deltas.insert(parse_double(r[0]));
    rhos.insert(parse_double(r[1]));
  }
  if (deltas.size() < 2 || rhos.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "grid csv: need at least 2x2 cells");
  }
  ClassGrid g;
  g.spec.delta = {*deltas.begin(), *deltas.rbegin(), deltas.size()};
  g.spec.rho = {*rhos.begin(), *rhos.rbegin(), rhos.size()};
  const std::vector<double> dv(deltas.begin(), deltas.end());
  const std::vector<double> rv(rhos.begin(), rhos.end());
  g.classes.assign(dv.size() * rv.size(), CellClass::Unresolved);
  g.sigma.assign(dv.size() * rv.size(), Complex{});
  for (const auto& r : rows) {
    const auto j = static_cast<std::size_t>(
        std::lower_bound(dv.begin(), dv.end(), parse_double(r[0])) - dv.begin());
    const auto i = static_cast<std::size_t>(
        std::lower_bound(rv.begin(), rv.end(), parse_double(r[1])) - rv.begin());
    const auto cls = cell_class_from_string(r[2]);
    if (!cls) throw Error(ErrorKind::InvalidArgument, "grid csv: unknown class '" + r[2] + "'");
    g.classes[g.index(i, j)] = *cls;
    g.sigma[g.index(i, j)] = Complex{parse_double(r[3]), parse_double(r[4])};
  }
  return g;
}

void write_boundaries_csv(std::ostream& os, const std::vector<BoundarySet>& sets) {
  os << "class_a,class_b,delta,rho,refined\n";
  for (const BoundarySet& set : sets) {
    for (const BoundaryPoint& p : set.points) {
      os << to_string(set.a) << ',' << to_string(set.b) << ',' << format_double(p.delta) << ','
         << format_double(p.rho) << ',' << (p.refined ? 1 : 0) << '\n';
    }
  }
}

}  // namespace nhf::io
