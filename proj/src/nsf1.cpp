#include "nsleray/nsf1.hpp"

#include "nsleray/errors.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>

namespace nsleray {

namespace {

constexpr std::array<char, 4> kMagic{'N', 'S', 'F', '1'};

template <class U>
void put_le(std::ostream& out, U v) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

template <class U>
U get_le(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw std::runtime_error("nsf1: truncated stream");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(bytes[i]) << (8 * i);
  return v;
}

std::filesystem::path component_path(const std::filesystem::path& stem, int i) {
  return stem.string() + "_" + std::to_string(i) + ".nsf1";
}

}  // namespace

void write_nsf1(std::ostream& out, const ScalarField& f) {
  out.write(kMagic.data(), kMagic.size());
  const auto n = static_cast<std::uint32_t>(f.grid().points());
  for (int i = 0; i < 3; ++i) put_le<std::uint32_t>(out, n);
  for (double v : f.values()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
}

void write_nsf1(const std::filesystem::path& path, const ScalarField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("nsf1: cannot open " + path.string());
  write_nsf1(out, f);
}

ScalarField read_nsf1(std::istream& in, double box_length) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("nsf1: bad magic");
  const auto nx = get_le<std::uint32_t>(in);
  const auto ny = get_le<std::uint32_t>(in);
  const auto nz = get_le<std::uint32_t>(in);
  if (nx != ny || ny != nz) throw std::runtime_error("nsf1: only cubic grids are supported");
  ScalarField f(Grid(static_cast<int>(nx), box_length));
  for (double& v : f.values()) v = std::bit_cast<double>(get_le<std::uint64_t>(in));
  if (!f.all_finite()) throw NumericalError("nsf1: non-finite value");
  return f;
}

ScalarField read_nsf1(const std::filesystem::path& path, double box_length) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("nsf1: not found: " + path.string());
  return read_nsf1(in, box_length);
}

void write_nsf1(const std::filesystem::path& stem, const VectorField& v) {
  for (int i = 0; i < kDim; ++i) write_nsf1(component_path(stem, i), v[i]);
}

VectorField read_nsf1_vector(const std::filesystem::path& stem, double box_length) {
  return VectorField(read_nsf1(component_path(stem, 0), box_length),
                     read_nsf1(component_path(stem, 1), box_length),
                     read_nsf1(component_path(stem, 2), box_length));
}

}  // namespace nsleray
