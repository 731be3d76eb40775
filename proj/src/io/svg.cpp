#include "nhf/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace nhf::io {

namespace {

constexpr std::array<Rgb, 9> kViridis{{
    {68, 1, 84},
    {71, 44, 122},
    {59, 81, 139},
    {44, 113, 142},
    {33, 144, 141},
    {39, 173, 129},
    {92, 200, 99},
    {170, 220, 50},
    {253, 231, 37},
}};

// Two decimals keep dense portraits small without visible loss.
std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void open_svg(std::ostringstream& os, int w, int h, std::string_view title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << ' ' << h << "\" font-family=\"sans-serif\">\n"
     << "<title>" << escape(title) << "</title>\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">" << escape(title)
     << "</text>\n";
}

std::string star_path(double cx, double cy, double r) {
  std::string d;
  for (int k = 0; k < 10; ++k) {
    const double a = -std::numbers::pi / 2 + k * std::numbers::pi / 5;
    const double rr = (k % 2 == 0) ? r : 0.45 * r;
    d += (k == 0 ? "M" : "L") + num(cx + rr * std::cos(a)) + ',' + num(cy + rr * std::sin(a));
  }
  return d + "Z";
}

// About six ticks at multiples of 1, 2 or 5 times a power of ten.
std::vector<double> nice_ticks(double lo, double hi) {
  const double raw = (hi - lo) / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = 10.0 * mag;
  for (double m : {1.0, 2.0, 5.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

struct Panel {
  double x0, y0, w, h;
  double xmin, xmax, ymin, ymax;
  double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
  double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

}  // namespace

Rgb viridis(double x) {
  if (!(x > 0.0)) x = 0.0;
  x = std::min(x, 1.0);
  const double pos = x * (kViridis.size() - 1);
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(pos), kViridis.size() - 2);
  const double f = pos - static_cast<double>(k);
  auto lerp = [f](unsigned char a, unsigned char b) {
    return static_cast<unsigned char>(std::lround(a + f * (b - a)));
  };
  const Rgb& a = kViridis[k];
  const Rgb& b = kViridis[k + 1];
  return {lerp(a.r, b.r), lerp(a.g, b.g), lerp(a.b, b.b)};
}

std::string to_hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

Rgb class_colour(CellClass c) {
  switch (c) {
    case CellClass::Elliptic:
    case CellClass::Identity: return {49, 104, 196};
    case CellClass::Hyperbolic: return {245, 205, 48};
    case CellClass::Parabolic: return {0, 0, 0};
    case CellClass::Loxodromic: return {214, 82, 140};
    case CellClass::Unresolved: break;
  }
  return {160, 160, 160};
}

std::string portrait_svg(const Portrait& p, std::string_view title) {
  constexpr int kW = 640, kH = 640;
  constexpr double kR = 270.0, cx = 320.0, cy = 340.0;
  // Oblique orthographic camera: elevation 25 degrees, azimuth 35 degrees.
  const double el = 25.0 * std::numbers::pi / 180.0, az = 35.0 * std::numbers::pi / 180.0;
  const double ca = std::cos(az), sa = std::sin(az), ce = std::cos(el), se = std::sin(el);
  struct Screen {
    double x, y;
    bool front;
  };
  auto project = [&](const std::array<double, 3>& v) {
    const double xr = ca * v[0] - sa * v[1];
    const double yr = sa * v[0] + ca * v[1];
    const double depth = ce * yr - se * v[2];
    const double up = se * yr + ce * v[2];
    return Screen{cx + kR * xr, cy - kR * up, depth <= 0.0};
  };

  std::ostringstream os;
  open_svg(os, kW, kH, title);
  os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << kR << "\" fill=\"#f6f6fa\" stroke=\"#333\"/>\n";
  std::string eq_front, eq_back;
  for (int k = 0; k <= 180; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / 180.0;
    const Screen sc = project({std::cos(phi), std::sin(phi), 0.0});
    (sc.front ? eq_front : eq_back) += num(sc.x) + ',' + num(sc.y) + ' ';
  }
  os << "<polyline fill=\"none\" stroke=\"#999\" stroke-dasharray=\"3,3\" points=\"" << eq_back << "\"/>\n";

  // Back-side pieces first so that the front hemisphere is drawn on top.
  const std::size_t steps = p.times.size();
  for (int pass = 0; pass < 2; ++pass) {
    const bool want_front = pass == 1;
    os << "<g fill=\"none\" stroke-width=\"0.6\" stroke=\"" << (want_front ? "#2b5d9c" : "#b9c3d3")
       << "\" stroke-opacity=\"" << (want_front ? "0.45" : "0.35") << "\">\n";
    for (std::size_t s = 0; s < p.n_samples; ++s) {
      std::string pts;
      auto flush = [&] {
        if (pts.find(' ') != std::string::npos) os << "<polyline points=\"" << pts << "\"/>\n";
        pts.clear();
      };
      for (std::size_t k = 0; k < steps; ++k) {
        const Screen sc = project(p.at(s, k).sphere());
        if (sc.front != want_front) {
          flush();
          continue;
        }
        if (!pts.empty()) pts += ' ';
        pts += num(sc.x) + ',' + num(sc.y);
      }
      flush();
    }
    os << "</g>\n";
  }
  os << "<polyline fill=\"none\" stroke=\"#666\" points=\"" << eq_front << "\"/>\n";

  for (const Polarisation& m : p.markers) {
    const Screen sc = project(m.sphere());
    os << "<path d=\"" << star_path(sc.x, sc.y, 13.0) << "\" fill=\"" << (sc.front ? "#e8231f" : "none")
       << "\" stroke=\"#a01010\" stroke-width=\"1.5\"/>\n";
  }
  const Screen north = project({0.0, 0.0, 1.0});
  os << "<text x=\"" << num(north.x + 6) << "\" y=\"" << num(north.y - 6) << "\" font-size=\"12\">p = 0</text>\n"
     << "<text x=\"12\" y=\"" << kH - 12 << "\" font-size=\"11\">" << p.n_samples
     << " trajectories; filled stars: eigenstates on the visible side, hollow: far side</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string trajectory_svg(const Trajectory& tr, std::string_view title) {
  constexpr int kW = 900, kH = 500;
  std::ostringstream os;
  open_svg(os, kW, kH, title);
  const std::size_t n = tr.states.size();
  const double t0 = n ? tr.t.front() : 0.0;
  const double t1 = n ? tr.t.back() : 1.0;

  for (int comp = 0; comp < 2; ++comp) {
    double lim = 1e-12;
    for (const State2& s : tr.states) {
      const Complex z = comp == 0 ? s.x0 : s.x1;
      if (std::isfinite(z.real()) && std::isfinite(z.imag())) {
        lim = std::max({lim, std::abs(z.real()), std::abs(z.imag())});
      }
    }
    lim *= 1.05;
    const Panel pan{60.0 + comp * 440.0, 50.0, 380.0, 380.0, -lim, lim, -lim, lim};
    os << "<rect x=\"" << pan.x0 << "\" y=\"" << pan.y0 << "\" width=\"" << pan.w << "\" height=\"" << pan.h
       << "\" fill=\"none\" stroke=\"#333\"/>\n"
       << "<line x1=\"" << pan.x0 << "\" y1=\"" << num(pan.py(0)) << "\" x2=\"" << pan.x0 + pan.w << "\" y2=\""
       << num(pan.py(0)) << "\" stroke=\"#bbb\"/>\n"
       << "<line x1=\"" << num(pan.px(0)) << "\" y1=\"" << pan.y0 << "\" x2=\"" << num(pan.px(0)) << "\" y2=\""
       << pan.y0 + pan.h << "\" stroke=\"#bbb\"/>\n"
       << "<text x=\"" << pan.x0 + pan.w / 2 << "\" y=\"" << pan.y0 + pan.h + 22
       << "\" text-anchor=\"middle\" font-size=\"13\">component " << comp + 1 << " (Re horizontal, Im vertical, |max| "
       << escape(num(lim)) << ")</text>\n";

    // Consecutive segments are grouped into 64 colour bands.
    constexpr std::size_t kBands = 64;
    std::size_t k = 0;
    while (k + 1 < n) {
      const double tm = t1 > t0 ? (tr.t[k] - t0) / (t1 - t0) : 0.0;
      const std::size_t band = std::min(kBands - 1, static_cast<std::size_t>(tm * kBands));
      std::string pts;
      std::size_t j = k;
      for (; j < n; ++j) {
        const Complex z = comp == 0 ? tr.states[j].x0 : tr.states[j].x1;
        if (!pts.empty()) pts += ' ';
        pts += num(pan.px(z.real())) + ',' + num(pan.py(z.imag()));
        const double tj = t1 > t0 ? (tr.t[j] - t0) / (t1 - t0) : 0.0;
        if (j > k && std::min(kBands - 1, static_cast<std::size_t>(tj * kBands)) != band) break;
      }
      os << "<polyline fill=\"none\" stroke-width=\"1.4\" stroke=\""
         << to_hex(viridis((band + 0.5) / kBands)) << "\" points=\"" << pts << "\"/>\n";
      k = std::max(j, k + 1);
    }
  }

  // Colour bar.
  for (int k = 0; k < 100; ++k) {
    os << "<rect x=\"" << 250 + 4 * k << "\" y=\"470\" width=\"4\" height=\"10\" fill=\""
       << to_hex(viridis(k / 99.0)) << "\"/>\n";
  }
  os << "<text x=\"245\" y=\"480\" text-anchor=\"end\" font-size=\"11\">t=" << escape(num(t0))
     << "</text><text x=\"655\" y=\"480\" font-size=\"11\">t=" << escape(num(t1)) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string stability_svg(const ClassGrid& g, const std::vector<BoundarySet>& boundaries,
                          std::string_view title) {
  constexpr int kW = 1000, kH = 640;
  std::ostringstream os;
  open_svg(os, kW, kH, title);
  const Axis& dx = g.spec.delta;
  const Axis& ry = g.spec.rho;
  const Panel pan{70.0, 40.0, 760.0, 540.0, dx.min, dx.max, ry.min, ry.max};
  const double cw = pan.w / static_cast<double>(g.cols());
  const double ch = pan.h / static_cast<double>(g.rows());

  // Run-length encoded rows.
  os << "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t i = 0; i < g.rows(); ++i) {
    const double y = pan.y0 + pan.h - static_cast<double>(i + 1) * ch;
    std::size_t j = 0;
    while (j < g.cols()) {
      const CellClass c = g.at(i, j);
      std::size_t e = j + 1;
      while (e < g.cols() && g.at(i, e) == c) ++e;
      os << "<rect x=\"" << num(pan.x0 + static_cast<double>(j) * cw) << "\" y=\"" << num(y) << "\" width=\""
         << num(static_cast<double>(e - j) * cw) << "\" height=\"" << num(ch) << "\" fill=\""
         << to_hex(class_colour(c)) << "\"/>\n";
      j = e;
    }
  }
  os << "</g>\n";

  os << "<g fill=\"black\">\n";
  for (const BoundarySet& set : boundaries) {
    for (const BoundaryPoint& b : set.points) {
      os << "<circle cx=\"" << num(pan.px(b.delta)) << "\" cy=\"" << num(pan.py(b.rho)) << "\" r=\"0.9\"/>\n";
    }
  }
  os << "</g>\n";

  os << "<rect x=\"" << pan.x0 << "\" y=\"" << pan.y0 << "\" width=\"" << pan.w << "\" height=\"" << pan.h
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double xv : nice_ticks(dx.min, dx.max)) {
    os << "<line x1=\"" << num(pan.px(xv)) << "\" y1=\"" << pan.y0 + pan.h << "\" x2=\"" << num(pan.px(xv))
       << "\" y2=\"" << pan.y0 + pan.h + 5 << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << num(pan.px(xv)) << "\" y=\"" << pan.y0 + pan.h + 18
       << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(xv) << "</text>\n";
  }
  for (double yv : nice_ticks(ry.min, ry.max)) {
    os << "<line x1=\"" << pan.x0 - 5 << "\" y1=\"" << num(pan.py(yv)) << "\" x2=\"" << pan.x0 << "\" y2=\""
       << num(pan.py(yv)) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << pan.x0 - 8 << "\" y=\"" << num(pan.py(yv) + 4)
       << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(yv) << "</text>\n";
  }
  os << "<text x=\"" << pan.x0 + pan.w / 2 << "\" y=\"" << pan.y0 + pan.h + 34
     << "\" text-anchor=\"middle\" font-size=\"13\">Re Delta</text>\n"
     << "<text x=\"20\" y=\"" << pan.y0 + pan.h / 2 << "\" font-size=\"13\" transform=\"rotate(-90 20 "
     << pan.y0 + pan.h / 2 << ")\" text-anchor=\"middle\">rho</text>\n";

  // Legend.
  const std::array<std::pair<CellClass, const char*>, 5> legend{{
      {CellClass::Elliptic, "stable"},
      {CellClass::Hyperbolic, "unstable"},
      {CellClass::Parabolic, "parabolic"},
      {CellClass::Loxodromic, "loxodromic"},
      {CellClass::Unresolved, "unresolved"},
  }};
  for (std::size_t k = 0; k < legend.size(); ++k) {
    const double x = 70.0 + 150.0 * static_cast<double>(k);
    os << "<rect x=\"" << x << "\" y=\"620\" width=\"12\" height=\"12\" fill=\""
       << to_hex(class_colour(legend[k].first)) << "\" stroke=\"#333\"/>\n"
       << "<text x=\"" << x + 18 << "\" y=\"631\" font-size=\"12\">" << legend[k].second << "</text>\n";
  }

  // Inset: one period of mu(t) at the grid centre.
  {
    const double dmid = 0.5 * (dx.min + dx.max);
    const double rmid = std::max(0.5 * (ry.min + ry.max), 1e-3);
    const ModulationCurve curve = g.spec.curve(dmid, rmid);
    constexpr int kSamples = 200;
    std::vector<Complex> mu(kSamples + 1);
    double lim = 1e-12;
    for (int k = 0; k <= kSamples; ++k) {
      mu[k] = curve.mu_at(curve.period() * k / kSamples) - Complex(dmid, g.spec.delta_imag);
      lim = std::max({lim, std::abs(mu[k].real()), std::abs(mu[k].imag())});
    }
    lim *= 1.15;
    const Panel ins{860.0, 60.0, 110.0, 110.0, -lim, lim, -lim, lim};
    os << "<rect x=\"" << ins.x0 << "\" y=\"" << ins.y0 << "\" width=\"" << ins.w << "\" height=\"" << ins.h
       << "\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#333\"/>\n";
    std::string pts;
    for (const Complex& z : mu) {
      if (!pts.empty()) pts += ' ';
      pts += num(ins.px(z.real())) + ',' + num(ins.py(z.imag()));
    }
    os << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n"
       << "<circle cx=\"" << num(ins.px(0)) << "\" cy=\"" << num(ins.py(0)) << "\" r=\"2\"/>\n"
       << "<text x=\"" << ins.x0 + ins.w / 2 << "\" y=\"" << ins.y0 + ins.h + 14
       << "\" text-anchor=\"middle\" font-size=\"10\">mu(t) - Delta, rho=" << num(rmid) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace nhf::io
