#include "nsc/field.hpp"

#include <algorithm>
#include <cmath>

namespace nsc {

SpectralVectorField::SpectralVectorField(const FrequencyLattice& lat) : lattice(lat) {
  for (auto& c : comp) c.assign(lat.size(), cplx{});
}

SpectralVectorField& SpectralVectorField::operator+=(const SpectralVectorField& o) {
  require(lattice == o.lattice, "field lattices differ");
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < comp[c].size(); ++i) comp[c][i] += o.comp[c][i];
  real_valued = real_valued && o.real_valued;
  divergence_free = divergence_free && o.divergence_free;
  return *this;
}

SpectralVectorField& SpectralVectorField::operator-=(const SpectralVectorField& o) {
  require(lattice == o.lattice, "field lattices differ");
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < comp[c].size(); ++i) comp[c][i] -= o.comp[c][i];
  real_valued = real_valued && o.real_valued;
  divergence_free = divergence_free && o.divergence_free;
  return *this;
}

SpectralVectorField& SpectralVectorField::operator*=(double s) {
  for (auto& c : comp)
    for (auto& v : c) v *= s;
  return *this;
}

SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b) {
  a += b;
  return a;
}
SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b) {
  a -= b;
  return a;
}
SpectralVectorField operator*(double s, SpectralVectorField a) {
  a *= s;
  return a;
}

SpectralScalarField::SpectralScalarField(const FrequencyLattice& lat)
    : lattice(lat), values(lat.size(), cplx{}) {}

PhysicalVectorField::PhysicalVectorField(const FrequencyLattice& lat) : lattice(lat) {
  for (auto& c : comp) c.assign(lat.size(), 0.0);
}

PhysicalScalarField::PhysicalScalarField(const FrequencyLattice& lat)
    : lattice(lat), values(lat.size(), 0.0) {}

double max_abs(const SpectralVectorField& u) {
  double m = 0.0;
  for (const auto& c : u.comp)
    for (const auto& v : c) m = std::max(m, std::abs(v));
  return m;
}

double hermitian_defect(const SpectralVectorField& u) {
  const double scale = max_abs(u);
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const std::size_t m = u.lattice.mirror(i);
    for (int c = 0; c < 3; ++c)
      worst = std::max(worst, std::abs(u.comp[c][m] - std::conj(u.comp[c][i])));
  }
  return worst / scale;
}

void symmetrize_hermitian(SpectralVectorField& u) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    const std::size_t m = u.lattice.mirror(i);
    if (m < i) continue;
    for (int c = 0; c < 3; ++c) {
      const cplx avg = 0.5 * (u.comp[c][i] + std::conj(u.comp[c][m]));
      u.comp[c][i] = avg;
      u.comp[c][m] = std::conj(avg);
    }
  }
  u.real_valued = true;
}

double relative_difference(const SpectralVectorField& a, const SpectralVectorField& b) {
  require(a.lattice == b.lattice, "field lattices differ");
  const double scale = std::max(max_abs(a), max_abs(b));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.size(); ++i)
      worst = std::max(worst, std::abs(a.comp[c][i] - b.comp[c][i]));
  return worst / scale;
}

}  // namespace nsc
