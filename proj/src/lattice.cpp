#include "nsc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace nsc {

FrequencyLattice::FrequencyLattice(std::array<double, 3> periods, std::array<int, 3> modes)
    : periods_(periods), modes_(modes) {
  for (int a = 0; a < 3; ++a) {
    if (!(periods[a] > 0.0) || !std::isfinite(periods[a]))
      throw ValidationError("non-positive period on axis " + std::to_string(a + 1));
    if (modes[a] % 2 != 0)
      throw ValidationError("odd mode count on axis " + std::to_string(a + 1));
    if (modes[a] < 4)
      throw ValidationError("mode count below 4 on axis " + std::to_string(a + 1));
  }

  auto geo = std::make_shared<Geometry>();
  const std::size_t n = size();
  std::array<std::vector<double>, 3> line;
  std::array<std::vector<double>, 3> keep;
  for (int a = 0; a < 3; ++a) {
    line[a].resize(modes_[a]);
    keep[a].resize(modes_[a]);
    const int cut = dealias_cutoff(a);
    for (int i = 0; i < modes_[a]; ++i) {
      const int k = wavenumber(a, i);
      line[a][i] = k * spacing(a);
      keep[a][i] = std::abs(k) <= cut ? 1.0 : 0.0;
    }
    geo->xi[a].resize(n);
  }
  geo->xi2.resize(n);
  geo->inv_xi2.resize(n);
  geo->mask.resize(n);
  geo->mirror.resize(n);

  std::size_t idx = 0;
  for (int i1 = 0; i1 < modes_[0]; ++i1) {
    for (int i2 = 0; i2 < modes_[1]; ++i2) {
      for (int i3 = 0; i3 < modes_[2]; ++i3, ++idx) {
        const double x1 = line[0][i1], x2 = line[1][i2], x3 = line[2][i3];
        geo->xi[0][idx] = x1;
        geo->xi[1][idx] = x2;
        geo->xi[2][idx] = x3;
        geo->xi2[idx] = x1 * x1 + x2 * x2 + x3 * x3;
        geo->inv_xi2[idx] = geo->xi2[idx] > 0.0 ? 1.0 / geo->xi2[idx] : 0.0;
        geo->mask[idx] = keep[0][i1] * keep[1][i2] * keep[2][i3];
        geo->mirror[idx] = flat(i1 == 0 ? 0 : modes_[0] - i1, i2 == 0 ? 0 : modes_[1] - i2,
                                i3 == 0 ? 0 : modes_[2] - i3);
      }
    }
  }
  geometry_ = std::move(geo);
}

std::array<int, 3> FrequencyLattice::unflatten(std::size_t idx) const {
  const int i3 = static_cast<int>(idx % modes_[2]);
  idx /= modes_[2];
  const int i2 = static_cast<int>(idx % modes_[1]);
  const int i1 = static_cast<int>(idx / modes_[1]);
  return {i1, i2, i3};
}

std::array<int, 3> FrequencyLattice::wavenumbers(std::size_t idx) const {
  const auto p = unflatten(idx);
  return {wavenumber(0, p[0]), wavenumber(1, p[1]), wavenumber(2, p[2])};
}

std::array<double, 3> FrequencyLattice::frequency(std::size_t idx) const {
  return {geometry_->xi[0][idx], geometry_->xi[1][idx], geometry_->xi[2][idx]};
}

double FrequencyLattice::max_resolved_radius() const {
  return std::min({nyquist(0), nyquist(1), nyquist(2)});
}

bool FrequencyLattice::retained(std::size_t idx) const { return geometry_->mask[idx] != 0.0; }

FrequencyLattice make_lattice(std::array<double, 3> periods, std::array<int, 3> modes) {
  return FrequencyLattice(periods, modes);
}

}  // namespace nsc
