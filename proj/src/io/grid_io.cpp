#include "nhf/io/grid_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

namespace nhf::io {

namespace {

constexpr std::array<char, 4> kMagic{'N', 'H', 'F', 'G'};

template <typename U>
void put_le(std::ostream& os, U v) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t k = 0; k < sizeof(U); ++k) bytes[k] = static_cast<char>((v >> (8 * k)) & 0xffu);
  os.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream& is) {
  std::array<unsigned char, sizeof(U)> bytes{};
  if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw Error(ErrorKind::InvalidArgument, "grid binary: truncated input");
  }
  U v = 0;
  for (std::size_t k = 0; k < sizeof(U); ++k) v |= static_cast<U>(bytes[k]) << (8 * k);
  return v;
}

void put_f64(std::ostream& os, double x) { put_le(os, std::bit_cast<std::uint64_t>(x)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is)); }

}  // namespace

void write_grid_binary(std::ostream& os, const ClassGrid& g) {
  os.write(kMagic.data(), kMagic.size());
  put_le(os, kGridFormatVersion);
  put_le(os, static_cast<std::uint32_t>(g.cols()));
  put_le(os, static_cast<std::uint32_t>(g.rows()));
  put_f64(os, g.spec.delta.min);
  put_f64(os, g.spec.delta.max);
  put_f64(os, g.spec.rho.min);
  put_f64(os, g.spec.rho.max);
  for (CellClass c : g.classes) os.put(static_cast<char>(c));
  for (Complex s : g.sigma) {
    put_f64(os, s.real());
    put_f64(os, s.imag());
  }
}

ClassGrid read_grid_binary(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
    throw Error(ErrorKind::InvalidArgument, "grid binary: bad magic");
  }
  const auto version = get_le<std::uint32_t>(is);
  if (version != kGridFormatVersion) {
    throw Error(ErrorKind::InvalidArgument, "grid binary: unsupported version " + std::to_string(version));
  }
  ClassGrid g;
  g.spec.delta.count = get_le<std::uint32_t>(is);
  g.spec.rho.count = get_le<std::uint32_t>(is);
  g.spec.delta.min = get_f64(is);
  g.spec.delta.max = get_f64(is);
  g.spec.rho.min = get_f64(is);
  g.spec.rho.max = get_f64(is);
  const std::size_t n = g.cols() * g.rows();
  g.classes.resize(n);
  for (auto& c : g.classes) c = static_cast<CellClass>(get_le<std::uint8_t>(is));
  g.sigma.resize(n);
  for (auto& s : g.sigma) {
    const double re = get_f64(is);
    s = Complex{re, get_f64(is)};
  }
  return g;
}

}  // namespace nhf::io
