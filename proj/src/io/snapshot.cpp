#include "nsc/io/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace nsc::io {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <class T>
void put(std::ofstream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is, const std::string& path) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  require(static_cast<bool>(is), "snapshot " + path + ": truncated file");
  return to_little(v);
}

// Flat storage index of the j-th entry in ascending wavenumber order.
std::size_t storage_index(const FrequencyLattice& lat, std::size_t j) {
  const auto& n = lat.modes();
  const int i3 = static_cast<int>(j % n[2]);
  const int i2 = static_cast<int>((j / n[2]) % n[1]);
  const int i1 = static_cast<int>(j / (static_cast<std::size_t>(n[1]) * n[2]));
  return lat.flat(lat.position(0, i1 - n[0] / 2), lat.position(1, i2 - n[1] / 2),
                  lat.position(2, i3 - n[2] / 2));
}

}  // namespace

void write_snapshot(const std::string& path, const SpectralVectorField& u, double time) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), "cannot open snapshot for writing: " + path);
  os.write("NSCF", 4);
  put<std::uint32_t>(os, kSnapshotVersion);
  put<std::uint32_t>(os, (u.real_valued ? 1u : 0u) | (u.divergence_free ? 2u : 0u));
  for (double L : u.lattice.periods()) put<double>(os, L);
  for (int N : u.lattice.modes()) put<std::int32_t>(os, N);
  put<double>(os, time);
  for (const auto& c : u.comp) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      const cplx v = c[storage_index(u.lattice, j)];
      put<double>(os, v.real());
      put<double>(os, v.imag());
    }
  }
  require(static_cast<bool>(os), "error writing snapshot: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), "cannot open snapshot: " + path);
  char magic[4];
  is.read(magic, 4);
  require(static_cast<bool>(is) && std::memcmp(magic, "NSCF", 4) == 0,
          "snapshot " + path + ": bad magic");
  const auto version = get<std::uint32_t>(is, path);
  require(version == kSnapshotVersion,
          "snapshot " + path + ": unsupported version " + std::to_string(version));
  const auto flags = get<std::uint32_t>(is, path);
  std::array<double, 3> periods;
  std::array<int, 3> modes;
  for (auto& L : periods) L = get<double>(is, path);
  for (auto& N : modes) N = get<std::int32_t>(is, path);
  const double time = get<double>(is, path);
  Snapshot s{time, SpectralVectorField(make_lattice(periods, modes))};
  s.field.real_valued = flags & 1u;
  s.field.divergence_free = flags & 2u;
  for (auto& c : s.field.comp) {
    for (std::size_t j = 0; j < s.field.size(); ++j) {
      const double re = get<double>(is, path);
      const double im = get<double>(is, path);
      c[storage_index(s.field.lattice, j)] = {re, im};
    }
  }
  is.peek();
  require(is.eof(), "snapshot " + path + ": trailing data");
  return s;
}

}  // namespace nsc::io
