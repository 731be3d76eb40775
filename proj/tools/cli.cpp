#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <toml.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "nhf/core_model.hpp"
#include "nhf/floquet.hpp"
#include "nhf/io/csv.hpp"
#include "nhf/io/grid_io.hpp"
#include "nhf/io/svg.hpp"
#include "nhf/modulation.hpp"
#include "nhf/static_dynamics.hpp"
#include "nhf/sweep.hpp"

namespace nhf::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::InvalidArgument, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw Error(ErrorKind::InvalidArgument, "empty complex value");
  if (s.front() == '(' && s.back() == ')') {
    s = s.substr(1, s.size() - 2);
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) throw Error(ErrorKind::InvalidArgument, "expected (re,im)");
    return {parse_real(s.substr(0, comma)), parse_real(s.substr(comma + 1))};
  }
  std::string compact;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  }
  if (compact.back() != 'i' && compact.back() != 'j') return {parse_real(compact), 0.0};

  // Split at the last sign that is not part of an exponent.
  const std::string body = compact.substr(0, compact.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_of = [](std::string_view t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
  };
  if (split == std::string::npos) return {0.0, imag_of(body)};
  return {parse_real(std::string_view(body).substr(0, split)), imag_of(std::string_view(body).substr(split))};
}

std::vector<Complex> parse_complex_list(std::string_view text) {
  std::vector<Complex> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= text.size(); ++k) {
    if (k < text.size() && text[k] == '(') ++depth;
    if (k < text.size() && text[k] == ')') --depth;
    if (k == text.size() || (text[k] == ',' && depth == 0)) {
      out.push_back(parse_complex(text.substr(start, k - start)));
      start = k + 1;
    }
  }
  return out;
}

namespace {

json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json j = json::object();
    for (const auto& [k, v] : *t) j[std::string(k.str())] = toml_to_json(v);
    return j;
  }
  if (const auto* a = node.as_array()) {
    json j = json::array();
    for (const auto& v : *a) j.push_back(toml_to_json(v));
    return j;
  }
  if (const auto* v = node.as_string()) return v->get();
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  throw ConfigError("unsupported TOML value type (dates are not accepted)");
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  if (fs::path(path).extension() == ".json") {
    try {
      return json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("invalid JSON config: ") + e.what());
    }
  }
  try {
    return toml_to_json(toml::parse(in, path));
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "invalid TOML config: " << e.description() << " at line " << e.source().begin.line;
    throw ConfigError(msg.str());
  }
}

// Resolved configuration: file values overridden by command-line flags.
class Config {
 public:
  explicit Config(json j) : j_(std::move(j)) {
    if (!j_.is_object()) throw ConfigError("config root must be a table/object");
  }

  const json* find(std::string_view section, std::string_view key) const {
    const json* node = &j_;
    if (!section.empty()) {
      auto it = j_.find(std::string(section));
      if (it == j_.end()) return nullptr;
      node = &*it;
    }
    auto it = node->find(std::string(key));
    return it == node->end() ? nullptr : &*it;
  }

  double real(std::string_view section, std::string_view key, std::optional<double> flag, double def) const {
    if (flag) return *flag;
    const json* v = find(section, key);
    if (!v) return def;
    if (v->is_number()) return v->get<double>();
    if (v->is_string()) return parse_real(v->get<std::string>());
    throw ConfigError(std::string(section) + "." + std::string(key) + " must be a number");
  }

  std::uint64_t integer(std::string_view section, std::string_view key, std::optional<std::uint64_t> flag,
                        std::uint64_t def) const {
    if (flag) return *flag;
    const json* v = find(section, key);
    if (!v) return def;
    if (v->is_number_integer() && v->get<std::int64_t>() >= 0) return v->get<std::uint64_t>();
    throw ConfigError(std::string(section) + "." + std::string(key) + " must be a non-negative integer");
  }

  Complex complex(std::string_view section, std::string_view key, const std::optional<std::string>& flag,
                  Complex def) const {
    if (flag) return parse_complex(*flag);
    const json* v = find(section, key);
    if (!v) return def;
    return complex_of(*v, key);
  }

  std::string text(std::string_view section, std::string_view key, const std::optional<std::string>& flag,
                   std::string def) const {
    if (flag) return *flag;
    const json* v = find(section, key);
    if (!v) return def;
    if (!v->is_string()) throw ConfigError(std::string(section) + "." + std::string(key) + " must be a string");
    return v->get<std::string>();
  }

  bool boolean(std::string_view section, std::string_view key, bool flag, bool def) const {
    if (flag) return true;
    const json* v = find(section, key);
    if (!v) return def;
    if (!v->is_boolean()) throw ConfigError(std::string(section) + "." + std::string(key) + " must be a boolean");
    return v->get<bool>();
  }

  static Complex complex_of(const json& v, std::string_view key) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_string()) return parse_complex(v.get<std::string>());
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      return {v[0].get<double>(), v[1].get<double>()};
    }
    throw ConfigError(std::string(key) + ": expected a number, a string like \"1+2i\" or [re, im]");
  }

 private:
  json j_;
};

json cjson(Complex z) { return json::array({z.real(), z.imag()}); }

template <std::size_t N>
json cjson(const std::array<Complex, N>& zs) {
  json a = json::array();
  for (const Complex& z : zs) a.push_back(cjson(z));
  return a;
}

// ---------------------------------------------------------------------------
// Option sets

struct GlobalFlags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> workers;
  std::optional<double> rel_tol;
};

struct HamiltonianFlags {
  std::optional<std::string> matrix, tau, eta, b, mu;
};

struct CurveFlags {
  std::optional<std::string> family, delta, b, eta;
  std::optional<double> rho, alpha, omega, speed;
};

void add_hamiltonian_flags(CLI::App* app, HamiltonianFlags& f) {
  app->add_option("--matrix", f.matrix, "Hamiltonian entries a,b,c,d (row-major, complex)");
  app->add_option("--tau", f.tau, "Mean diagonal tau");
  app->add_option("--eta", f.eta, "Half detuning eta");
  app->add_option("--b", f.b, "Upper coupling b");
  app->add_option("--mu", f.mu, "EP deformation mu");
}

void add_curve_flags(CLI::App* app, CurveFlags& f) {
  app->add_option("--curve", f.family, "Curve family: circular | quadratic | rectangular | elliptical | custom");
  app->add_option("--delta", f.delta, "Curve centre Delta (complex)");
  app->add_option("--rho", f.rho, "Modulation depth rho");
  app->add_option("--alpha", f.alpha, "Aspect ratio alpha (rectangular, elliptical)");
  app->add_option("--omega", f.omega, "Angular frequency (circular, elliptical)");
  app->add_option("--coupling", f.b, "Coupling b of the modulated Hamiltonian");
  app->add_option("--detuning", f.eta, "Constant detuning eta of the modulated Hamiltonian");
  app->add_option("--speed", f.speed, "Time-scale factor applied to every segment duration");
}

std::optional<Hamiltonian2> resolve_hamiltonian(const Config& cfg, const HamiltonianFlags& f) {
  std::optional<std::vector<Complex>> entries;
  if (f.matrix) {
    entries = parse_complex_list(*f.matrix);
  } else if (const json* m = cfg.find("hamiltonian", "matrix")) {
    std::vector<Complex> v;
    if (m->is_string()) {
      v = parse_complex_list(m->get<std::string>());
    } else if (m->is_array()) {
      for (const auto& e : *m) v.push_back(Config::complex_of(e, "hamiltonian.matrix"));
    } else {
      throw ConfigError("hamiltonian.matrix must be a list of four entries");
    }
    entries = v;
  }
  if (entries) {
    if (entries->size() != 4) throw ConfigError("matrix needs exactly four entries a,b,c,d");
    const auto& e = *entries;
    return hamiltonian_from_matrix(e[0], e[1], e[2], e[3]);
  }
  const bool any = f.tau || f.eta || f.b || f.mu || cfg.find("hamiltonian", "b") || cfg.find("hamiltonian", "mu") ||
                   cfg.find("hamiltonian", "tau") || cfg.find("hamiltonian", "eta");
  if (!any) return std::nullopt;
  return Hamiltonian2::make(cfg.complex("hamiltonian", "tau", f.tau, 0.0), cfg.complex("hamiltonian", "eta", f.eta, 0.0),
                            cfg.complex("hamiltonian", "b", f.b, 1.0), cfg.complex("hamiltonian", "mu", f.mu, 0.0));
}

Segment segment_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("curve.segments entries must be tables");
  auto get = [&](const char* key, Complex def) {
    auto it = j.find(key);
    return it == j.end() ? def : Config::complex_of(*it, key);
  };
  auto real = [&](const char* key, double def) {
    auto it = j.find(key);
    if (it == j.end()) return def;
    if (!it->is_number()) throw ConfigError(std::string("segment.") + key + " must be a number");
    return it->get<double>();
  };
  auto it = j.find("kind");
  if (it == j.end() || !it->is_string()) throw ConfigError("segment needs a kind");
  const std::string kind = it->get<std::string>();
  const double duration = real("duration", 1.0);
  if (kind == "constant") return Segment::constant(get("value", 0.0), duration);
  if (kind == "linear") return Segment::linear(get("start", 0.0), get("slope", 0.0), duration);
  if (kind == "quadratic") return Segment::quadratic(get("c0", 0.0), get("c1", 0.0), get("c2", 0.0), duration);
  if (kind == "circular_arc") {
    return Segment::circular_arc(get("center", 0.0), real("rho", 1.0), real("omega", 2.0 * std::numbers::pi),
                                 real("phase", 0.0), duration);
  }
  if (kind == "elliptic_arc") {
    return Segment::elliptic_arc(get("center", 0.0), real("rho", 1.0), real("alpha", 1.0),
                                 real("omega", 2.0 * std::numbers::pi), real("phase", 0.0), duration);
  }
  throw ConfigError("unknown segment kind '" + kind + "'");
}

std::optional<ModulationCurve> resolve_curve(const Config& cfg, const CurveFlags& f) {
  const std::string name = cfg.text("curve", "family", f.family, "");
  if (name.empty()) return std::nullopt;
  const Complex delta = cfg.complex("curve", "delta", f.delta, 0.0);
  const double rho = cfg.real("curve", "rho", f.rho, 1.0);
  const double alpha = cfg.real("curve", "alpha", f.alpha, 1.0);
  const double omega = cfg.real("curve", "omega", f.omega, 2.0 * std::numbers::pi);
  const double speed = cfg.real("curve", "speed", f.speed, 1.0);
  const Complex b = cfg.complex("curve", "b", f.b, 1.0);
  const Complex eta = cfg.complex("curve", "eta", f.eta, 0.0);
  if (!(speed > 0)) throw ConfigError("curve speed must be positive");

  std::optional<ModulationCurve> curve;
  if (name == "custom") {
    const json* segs = cfg.find("curve", "segments");
    if (!segs || !segs->is_array() || segs->empty()) throw ConfigError("custom curve needs curve.segments");
    std::vector<Segment> list;
    for (const auto& j : *segs) list.push_back(segment_from_json(j));
    curve.emplace(std::move(list), b, eta, "custom");
  } else {
    const auto fam = family_from_string(name);
    if (!fam) throw ConfigError("unknown curve family '" + name + "'");
    switch (*fam) {
      case Family::Circular: curve = circular(delta, rho, omega, b, eta); break;
      case Family::QuadraticPair: curve = quadratic_pair(delta, b, eta); break;
      case Family::Rectangular: curve = rectangular(delta, rho, alpha, b, eta); break;
      case Family::Elliptical: curve = elliptical(delta, rho, alpha, omega, b, eta); break;
    }
  }
  // Speed > 1 runs the same loop faster, i.e. shorter durations.
  if (speed != 1.0) curve = curve->time_scaled(1.0 / speed);
  return curve;
}

IntegratorOptions resolve_integrator(const Config& cfg, const GlobalFlags& g) {
  IntegratorOptions o;
  o.rel_tol = cfg.real("integrator", "rel_tol", g.rel_tol, o.rel_tol);
  o.abs_tol = cfg.real("integrator", "abs_tol", std::nullopt, o.abs_tol);
  o.initial_step = cfg.real("integrator", "initial_step", std::nullopt, o.initial_step);
  o.max_step = cfg.real("integrator", "max_step", std::nullopt, o.max_step);
  o.max_steps = cfg.integer("integrator", "max_steps", std::nullopt, o.max_steps);
  if (!(o.rel_tol > 0) || !(o.abs_tol > 0) || !(o.max_step > 0) || !(o.initial_step > 0)) {
    throw ConfigError("integrator tolerances and steps must be positive");
  }
  return o;
}

fs::path resolve_out(const Config& cfg, const GlobalFlags& g) {
  const fs::path dir = cfg.text("output", "dir", g.out, "out");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory '" + dir.string() + "'");
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  os << content;
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
}

template <typename Fn>
void write_stream(const fs::path& path, Fn&& fn) {
  std::ofstream os(path, std::ios::binary);
  fn(os);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// classify

struct ClassifyFlags {
  HamiltonianFlags ham;
  CurveFlags curve;
  std::optional<double> tol;
};

int cmd_classify(const Config& cfg, const GlobalFlags& g, const ClassifyFlags& f, std::ostream& out) {
  const auto curve = resolve_curve(cfg, f.curve);
  json report;
  if (curve) {
    const double tol = cfg.real("curve", "tol", f.tol, kMonodromyTol);
    const Monodromy m = monodromy(*curve, resolve_integrator(cfg, g));
    const MoebiusClass cls = classify_monodromy(m, tol);
    const FloquetSpectrum spec = floquet_spectrum(m);
    report["class"] = std::string(to_string(cls));
    report["is_floquet_ep"] = cls == MoebiusClass::Parabolic;
    report["family"] = curve->family();
    report["period"] = m.period;
    report["sigma"] = cjson(trace_square(m.m));
    report["multipliers"] = cjson(spec.multipliers);
    report["exponents"] = cjson(spec.exponents);
    report["lambda"] = cjson(spec.lambda);
    report["lambda_modulus"] = spec.lambda_modulus;
    report["det_residual"] = std::abs(m.m.det() - 1.0);
    report["winding_number"] = winding_number(*curve, 0.0);
  } else {
    const auto h = resolve_hamiltonian(cfg, f.ham);
    if (!h) throw ConfigError("classify needs --matrix, Hamiltonian parameters or --curve");
    const double tol = cfg.real("hamiltonian", "tol", f.tol, kDefaultTol);
    const MoebiusClass cls = classify_hamiltonian(*h, tol);
    const Spectrum2 sp = eigenvalues(*h, tol);
    report["class"] = std::string(to_string(cls));
    report["is_ep"] = is_exceptional(*h, tol);
    report["parameters"] = {{"tau", cjson(h->tau)}, {"eta", cjson(h->eta)}, {"b", cjson(h->b)}, {"mu", cjson(h->mu)}};
    report["eigenvalues"] = json::array({cjson(sp.lambda_plus), cjson(sp.lambda_minus)});
    if (sp.dominant) {
      report["dominant"] = *sp.dominant == Dominant::Plus ? "plus" : "minus";
    } else {
      report["dominant"] = nullptr;
    }
    if (const auto s = pseudo_hermitian_parameter(*h, tol)) {
      report["pseudo_hermitian_s"] = *s;
    } else {
      report["pseudo_hermitian_s"] = nullptr;
    }
  }
  out << report.dump() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// portrait

struct PortraitPreset {
  const char* name;
  Complex tau, eta, b, mu;
  double t_max;
};

// bmu > 0 elliptic, < 0 hyperbolic, complex loxodromic, 0 parabolic.
constexpr std::array<PortraitPreset, 4> kPortraitPresets{{
    {"elliptic", 0.0, 0.0, 1.0, 1.0, std::numbers::pi},
    {"hyperbolic", 0.0, 0.0, 1.0, -1.0, 6.0},
    {"loxodromic", 0.0, 0.0, 1.0, Complex(1.0, 0.6), 12.0},
    {"parabolic", 0.0, 0.0, 1.0, 0.0, 40.0},
}};

struct PortraitFlags {
  HamiltonianFlags ham;
  std::optional<std::string> preset;
  std::optional<std::uint64_t> samples, steps;
  std::optional<double> t_max;
};

int cmd_portrait(const Config& cfg, const GlobalFlags& g, const PortraitFlags& f, std::ostream& out) {
  const std::string preset = cfg.text("portrait", "preset", f.preset, "");
  std::optional<Hamiltonian2> h;
  double t_max_default = 10.0;
  std::string tag = "custom";
  if (!preset.empty()) {
    const auto it = std::find_if(kPortraitPresets.begin(), kPortraitPresets.end(),
                                 [&](const PortraitPreset& p) { return preset == p.name; });
    if (it == kPortraitPresets.end()) throw ConfigError("unknown portrait preset '" + preset + "'");
    h = Hamiltonian2::make(it->tau, it->eta, it->b, it->mu);
    t_max_default = it->t_max;
    tag = it->name;
  } else {
    h = resolve_hamiltonian(cfg, f.ham);
    if (!h) throw ConfigError("portrait needs --preset, --matrix or Hamiltonian parameters");
  }
  const std::size_t samples = cfg.integer("portrait", "samples", f.samples, 1000);
  const std::size_t steps = cfg.integer("portrait", "steps", f.steps, 200);
  const double t_max = cfg.real("portrait", "t_max", f.t_max, t_max_default);
  const std::uint64_t seed = cfg.integer("", "seed", g.seed, 1);
  if (samples == 0 || steps < 2 || !(t_max > 0)) throw ConfigError("portrait needs samples >= 1, steps >= 2, t_max > 0");

  const Portrait p = poincare_portrait(*h, samples, t_max, steps, seed);
  const fs::path dir = resolve_out(cfg, g);
  write_stream(dir / "portrait.csv", [&](std::ostream& os) { io::write_portrait_csv(os, p); });
  const MoebiusClass cls = classify_hamiltonian(*h);
  write_file(dir / "portrait.svg",
             io::portrait_svg(p, "Polarisation portrait (" + tag + ", " + std::string(to_string(cls)) + ")"));
  json report{{"class", std::string(to_string(cls))},
              {"samples", samples},
              {"steps", steps},
              {"t_max", t_max},
              {"markers", p.markers.size()},
              {"files", json::array({(dir / "portrait.csv").string(), (dir / "portrait.svg").string()})}};
  out << report.dump() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// trajectory

struct TrajectoryPreset {
  const char* name;
  Family family;
  Complex delta;
  double rho;
  std::size_t periods;
};

constexpr std::array<TrajectoryPreset, 3> kTrajectoryPresets{{
    {"circular-cusp", Family::Circular, 1.0, 1.0, 4},
    {"circular-loxodromic", Family::Circular, Complex(0.5, 0.3), 1.0, 6},
    {"quadratic-ep", Family::QuadraticPair, 0.0, 1.0, 8},
}};

struct TrajectoryFlags {
  CurveFlags curve;
  std::optional<std::string> preset, state;
  std::optional<std::uint64_t> eigenstate, periods, samples;
};

int cmd_trajectory(const Config& cfg, const GlobalFlags& g, const TrajectoryFlags& f, std::ostream& out) {
  const std::string preset = cfg.text("trajectory", "preset", f.preset, "");
  std::optional<ModulationCurve> curve;
  std::size_t periods_default = 4;
  bool generic_state = false;
  if (!preset.empty()) {
    const auto it = std::find_if(kTrajectoryPresets.begin(), kTrajectoryPresets.end(),
                                 [&](const TrajectoryPreset& p) { return preset == p.name; });
    if (it == kTrajectoryPresets.end()) throw ConfigError("unknown trajectory preset '" + preset + "'");
    curve = it->family == Family::Circular ? circular(it->delta, it->rho, 2.0 * std::numbers::pi)
                                           : quadratic_pair(it->delta);
    periods_default = it->periods;
    generic_state = it->family == Family::QuadraticPair;
  } else {
    curve = resolve_curve(cfg, f.curve);
    if (!curve) throw ConfigError("trajectory needs --preset or --curve");
  }
  const IntegratorOptions opts = resolve_integrator(cfg, g);
  const std::size_t periods = cfg.integer("trajectory", "periods", f.periods, periods_default);
  const std::size_t spp = cfg.integer("trajectory", "samples_per_period", f.samples, 200);
  if (periods == 0 || spp == 0) throw ConfigError("periods and samples must be positive");

  const Monodromy m = monodromy(*curve, opts);
  State2 s0;
  const std::string state_text = cfg.text("trajectory", "state", f.state, "");
  if (!state_text.empty()) {
    const auto v = parse_complex_list(state_text);
    if (v.size() != 2 || (v[0] == 0.0 && v[1] == 0.0)) throw ConfigError("state needs two components, not both zero");
    s0 = {v[0], v[1]};
  } else if (generic_state && !f.eigenstate && !cfg.find("trajectory", "eigenstate")) {
    s0 = {1.0, Complex(0.3, -0.4)};
  } else {
    const std::size_t idx = cfg.integer("trajectory", "eigenstate", f.eigenstate, 0);
    const auto eig = stroboscopic_eigenstates(m);
    if (idx >= eig.size()) {
      throw ConfigError("eigenstate index " + std::to_string(idx) + " out of range (" + std::to_string(eig.size()) +
                        " available)");
    }
    s0 = eig[idx];
  }
  const Trajectory tr = trajectory(*curve, s0, periods, spp, opts);
  const fs::path dir = resolve_out(cfg, g);
  write_stream(dir / "trajectory.csv", [&](std::ostream& os) { io::write_trajectory_csv(os, tr); });
  const MoebiusClass cls = classify_monodromy(m);
  write_file(dir / "trajectory.svg", io::trajectory_svg(tr, "State trajectory (" + curve->family() + ", " +
                                                                std::string(to_string(cls)) + ")"));
  json report{{"class", std::string(to_string(cls))},
              {"initial_state", json::array({cjson(s0.x0), cjson(s0.x1)})},
              {"periods", periods},
              {"samples", tr.t.size()},
              {"files", json::array({(dir / "trajectory.csv").string(), (dir / "trajectory.svg").string()})}};
  out << report.dump() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// stability

struct StabilityFlags {
  std::optional<std::string> family, engine, b;
  std::optional<double> alpha, delta_min, delta_max, rho_min, rho_max, delta_imag, omega, tol;
  std::optional<std::uint64_t> delta_count, rho_count, fixed_steps;
  bool refine = false;
};

SweepSpec resolve_sweep(const Config& cfg, const GlobalFlags& g, const StabilityFlags& f) {
  SweepSpec s;
  const std::string fam = cfg.text("sweep", "family", f.family, std::string(to_string(s.family)));
  const auto family = family_from_string(fam);
  if (!family) throw ConfigError("unknown sweep family '" + fam + "'");
  s.family = *family;
  s.alpha = cfg.real("sweep", "alpha", f.alpha, s.alpha);
  s.delta.min = cfg.real("sweep", "delta_min", f.delta_min, s.delta.min);
  s.delta.max = cfg.real("sweep", "delta_max", f.delta_max, s.delta.max);
  s.delta.count = cfg.integer("sweep", "delta_count", f.delta_count, s.delta.count);
  s.rho.min = cfg.real("sweep", "rho_min", f.rho_min, s.rho.min);
  s.rho.max = cfg.real("sweep", "rho_max", f.rho_max, s.rho.max);
  s.rho.count = cfg.integer("sweep", "rho_count", f.rho_count, s.rho.count);
  s.delta_imag = cfg.real("sweep", "delta_imag", f.delta_imag, s.delta_imag);
  s.b = cfg.complex("sweep", "b", f.b, s.b);
  s.omega = cfg.real("sweep", "omega", f.omega, s.omega);
  s.tol = cfg.real("sweep", "tol", f.tol, s.tol);
  s.fixed_steps = cfg.integer("sweep", "fixed_steps", f.fixed_steps, s.fixed_steps);
  const std::string engine = cfg.text("sweep", "engine", f.engine, "adaptive");
  if (engine == "adaptive") {
    s.engine = SweepEngine::Adaptive;
  } else if (engine == "fixed") {
    s.engine = SweepEngine::FixedStep;
  } else {
    throw ConfigError("engine must be 'adaptive' or 'fixed'");
  }
  s.integrator = resolve_integrator(cfg, g);
  s.validate();
  return s;
}

int cmd_stability(const Config& cfg, const GlobalFlags& g, const StabilityFlags& f, std::ostream& out) {
  const SweepSpec spec = resolve_sweep(cfg, g, f);
  SweepOptions opts;
  opts.workers = cfg.integer("sweep", "workers", g.workers, 0);
  const bool refine = cfg.boolean("sweep", "refine", f.refine, false);

  const ClassGrid grid = run_sweep(spec, opts);
  const auto boundaries = extract_boundaries(grid, refine);
  const fs::path dir = resolve_out(cfg, g);
  write_stream(dir / "grid.csv", [&](std::ostream& os) { io::write_grid_csv(os, grid); });
  write_stream(dir / "grid.bin", [&](std::ostream& os) { io::write_grid_binary(os, grid); });
  write_stream(dir / "boundaries.csv", [&](std::ostream& os) { io::write_boundaries_csv(os, boundaries); });
  std::ostringstream title;
  title << "Stability diagram (" << to_string(spec.family) << ", alpha=" << spec.alpha << ")";
  write_file(dir / "stability.svg", io::stability_svg(grid, boundaries, title.str()));

  std::map<std::string, std::size_t> counts;
  for (CellClass c : grid.classes) ++counts[std::string(to_string(c))];
  std::size_t n_boundary = 0;
  for (const auto& b : boundaries) n_boundary += b.points.size();
  json report{{"family", std::string(to_string(spec.family))},
              {"cells", grid.classes.size()},
              {"counts", counts},
              {"unresolved", grid.unresolved()},
              {"boundary_points", n_boundary},
              {"files", json::array({(dir / "grid.csv").string(), (dir / "grid.bin").string(),
                                     (dir / "boundaries.csv").string(), (dir / "stability.svg").string()})}};
  out << report.dump() << '\n';
  return grid.unresolved() > 0 ? kPartialSweep : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-hermitian two-level dynamics: exceptional points, Moebius classes and Floquet stability",
               "moebius-floquet"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--config", g.config, "TOML (or .json) configuration file");
  app.add_option("--out", g.out, "Output directory (default: out)");
  app.add_option("--seed", g.seed, "Random seed for sampled initial states");
  app.add_option("--workers", g.workers, "Sweep worker threads (0: all cores)");
  app.add_option("--rel-tol", g.rel_tol, "Relative tolerance of the adaptive integrator");

  ClassifyFlags cf;
  auto* classify = app.add_subcommand("classify", "Classify a static Hamiltonian or a modulation curve");
  add_hamiltonian_flags(classify, cf.ham);
  add_curve_flags(classify, cf.curve);
  classify->add_option("--tol", cf.tol, "Classification tolerance");

  PortraitFlags pf;
  auto* portrait = app.add_subcommand("portrait", "Polarisation portrait of a static Hamiltonian");
  add_hamiltonian_flags(portrait, pf.ham);
  portrait->add_option("--preset", pf.preset, "elliptic | hyperbolic | loxodromic | parabolic");
  portrait->add_option("--samples", pf.samples, "Number of random initial polarisations (default 1000)");
  portrait->add_option("--steps", pf.steps, "Time samples per trajectory (default 200)");
  portrait->add_option("--t-max", pf.t_max, "Final time");

  TrajectoryFlags tf;
  auto* traj = app.add_subcommand("trajectory", "State trajectory under a periodic modulation");
  add_curve_flags(traj, tf.curve);
  traj->add_option("--preset", tf.preset, "circular-cusp | circular-loxodromic | quadratic-ep");
  traj->add_option("--eigenstate", tf.eigenstate, "Start from stroboscopic eigenstate k");
  traj->add_option("--state", tf.state, "Explicit initial state psi1,psi2");
  traj->add_option("--periods", tf.periods, "Number of periods");
  traj->add_option("--samples", tf.samples, "Samples per period (default 200)");

  StabilityFlags sf;
  auto* stab = app.add_subcommand("stability", "Stability diagram over (Delta, rho)");
  stab->add_option("--family", sf.family, "rectangular | elliptical | circular | quadratic");
  stab->add_option("--alpha", sf.alpha, "Aspect ratio alpha");
  stab->add_option("--delta-min", sf.delta_min);
  stab->add_option("--delta-max", sf.delta_max);
  stab->add_option("--delta-count", sf.delta_count);
  stab->add_option("--rho-min", sf.rho_min);
  stab->add_option("--rho-max", sf.rho_max);
  stab->add_option("--rho-count", sf.rho_count);
  stab->add_option("--delta-imag", sf.delta_imag, "Constant imaginary part of Delta");
  stab->add_option("--coupling", sf.b, "Coupling b");
  stab->add_option("--omega", sf.omega, "Angular frequency of circular/elliptical curves");
  stab->add_option("--tol", sf.tol, "Classification tolerance on sigma");
  stab->add_option("--engine", sf.engine, "adaptive | fixed");
  stab->add_option("--fixed-steps", sf.fixed_steps, "RK4 steps per period for the fixed engine");
  stab->add_flag("--refine", sf.refine, "Bisect sigma = 4 along boundary edges");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    Config cfg(g.config.empty() ? json::object() : load_config(g.config));
    if (*classify) return cmd_classify(cfg, g, cf, out);
    if (*portrait) return cmd_portrait(cfg, g, pf, out);
    if (*traj) return cmd_trajectory(cfg, g, tf, out);
    return cmd_stability(cfg, g, sf, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    const bool input = e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::DiagonalInput;
    err << (input ? "config error: " : "numerical failure: ") << e.what() << '\n';
    return input ? kConfigError : kNumericalFailure;
  }
}

}  // namespace nhf::cli
