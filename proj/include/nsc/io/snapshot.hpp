#pragma once

#include <cstdint>
#include <string>

#include "nsc/field.hpp"

namespace nsc::io {

/// Binary spectral snapshot (little-endian):
///   char[4] "NSCF", u32 version (1), u32 flags (bit 0 real-valued,
///   bit 1 divergence-free), f64 periods[3], i32 modes[3], f64 time,
///   then for each component 1..3 the coefficients as (re, im) f64 pairs
///   in ascending wavenumber order k_i = -N_i/2 .. N_i/2-1, k1 slowest.
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  double time = 0.0;
  SpectralVectorField field;
};

void write_snapshot(const std::string& path, const SpectralVectorField& u, double time);
Snapshot read_snapshot(const std::string& path);

}  // namespace nsc::io
