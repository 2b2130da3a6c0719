#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "nsc/common.hpp"

namespace nsc {

/// Periodic-box discretization of Fourier space.
///
/// Frequencies are xi = (k1*dxi1, k2*dxi2, k3*dxi3) with dxi_i = 2*pi/L_i and
/// k_i in {-N_i/2, ..., N_i/2 - 1}. Storage is FFT order along each axis
/// (k = 0, 1, ..., N/2-1, -N/2, ..., -1) with axis 1 slowest, so the flat
/// index of (i1, i2, i3) is (i1*N2 + i2)*N3 + i3.
///
/// Copies are cheap: the per-point frequency tables are shared and immutable.
class FrequencyLattice {
 public:
  FrequencyLattice(std::array<double, 3> periods, std::array<int, 3> modes);

  const std::array<double, 3>& periods() const { return periods_; }
  const std::array<int, 3>& modes() const { return modes_; }

  double spacing(int axis) const { return kTwoPi / periods_[axis]; }
  double physical_spacing(int axis) const { return periods_[axis] / modes_[axis]; }
  double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }
  double box_volume() const { return periods_[0] * periods_[1] * periods_[2]; }
  std::size_t size() const {
    return static_cast<std::size_t>(modes_[0]) * modes_[1] * modes_[2];
  }

  /// Signed wavenumber k for storage position i along an axis.
  int wavenumber(int axis, int i) const { return i < modes_[axis] / 2 ? i : i - modes_[axis]; }
  /// Storage position for a signed wavenumber; k must lie in [-N/2, N/2-1].
  int position(int axis, int k) const { return k >= 0 ? k : k + modes_[axis]; }
  bool representable(int axis, int k) const {
    return k >= -modes_[axis] / 2 && k < modes_[axis] / 2;
  }

  std::size_t flat(int i1, int i2, int i3) const {
    return (static_cast<std::size_t>(i1) * modes_[1] + i2) * modes_[2] + i3;
  }
  std::array<int, 3> unflatten(std::size_t idx) const;
  /// Flat index of -xi; the Nyquist index -N/2 maps to itself.
  std::size_t mirror(std::size_t idx) const { return geometry_->mirror[idx]; }
  std::array<int, 3> wavenumbers(std::size_t idx) const;
  std::array<double, 3> frequency(std::size_t idx) const;

  /// Per-point frequency component tables (length size()).
  std::span<const double> xi(int axis) const { return geometry_->xi[axis]; }
  /// Per-point |xi|^2.
  std::span<const double> xi_squared() const { return geometry_->xi2; }
  /// Per-point 1/|xi|^2, with 0 at xi = 0.
  std::span<const double> inv_xi_squared() const { return geometry_->inv_xi2; }

  /// Largest representable frequency on an axis, (N/2)*dxi.
  double nyquist(int axis) const { return 0.5 * modes_[axis] * spacing(axis); }
  /// Radius of the largest centered ball inside the lattice box.
  double max_resolved_radius() const;

  /// 2/3-rule cutoff: modes with |k| > N/3 are discarded.
  int dealias_cutoff(int axis) const { return modes_[axis] / 3; }
  int retained_modes(int axis) const { return 2 * dealias_cutoff(axis) + 1; }
  bool retained(std::size_t idx) const;
  /// Per-point 2/3-rule keep mask (1.0 retained, 0.0 discarded).
  std::span<const double> dealias_mask() const { return geometry_->mask; }

  friend bool operator==(const FrequencyLattice& a, const FrequencyLattice& b) {
    return a.periods_ == b.periods_ && a.modes_ == b.modes_;
  }

 private:
  struct Geometry {
    std::array<RealArray, 3> xi;
    RealArray xi2;
    RealArray inv_xi2;
    RealArray mask;
    std::vector<std::size_t> mirror;
  };

  std::array<double, 3> periods_;
  std::array<int, 3> modes_;
  std::shared_ptr<const Geometry> geometry_;
};

/// Validating constructor: mode counts even and >= 4, periods positive.
FrequencyLattice make_lattice(std::array<double, 3> periods, std::array<int, 3> modes);

}  // namespace nsc
