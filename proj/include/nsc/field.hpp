#pragma once

#include <array>

#include "nsc/common.hpp"
#include "nsc/lattice.hpp"

namespace nsc {

/// Three complex coefficient arrays on a lattice, holding continuum
/// Fourier-transform amplitudes u_hat(xi) = integral of exp(-i x.xi) u(x) dx
/// (velocity x length^3).
struct SpectralVectorField {
  FrequencyLattice lattice;
  std::array<ComplexArray, 3> comp;
  /// Field represents a real velocity: u_hat(-xi) = conj(u_hat(xi)).
  bool real_valued = true;
  /// Set by constructions that guarantee xi . u_hat = 0 (projection, semigroup).
  bool divergence_free = false;

  explicit SpectralVectorField(const FrequencyLattice& lat);

  std::size_t size() const { return lattice.size(); }
  cplx& at(int c, std::size_t idx) { return comp[c][idx]; }
  const cplx& at(int c, std::size_t idx) const { return comp[c][idx]; }

  SpectralVectorField& operator+=(const SpectralVectorField& o);
  SpectralVectorField& operator-=(const SpectralVectorField& o);
  SpectralVectorField& operator*=(double s);
};

SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b);
SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b);
SpectralVectorField operator*(double s, SpectralVectorField a);

struct SpectralScalarField {
  FrequencyLattice lattice;
  ComplexArray values;
  bool real_valued = true;

  explicit SpectralScalarField(const FrequencyLattice& lat);
};

/// Real samples on the dual spatial grid x_n = n * L/N.
struct PhysicalVectorField {
  FrequencyLattice lattice;
  std::array<RealArray, 3> comp;

  explicit PhysicalVectorField(const FrequencyLattice& lat);
};

struct PhysicalScalarField {
  FrequencyLattice lattice;
  RealArray values;

  explicit PhysicalScalarField(const FrequencyLattice& lat);
};

/// max over all coefficients of |u_hat|, componentwise.
double max_abs(const SpectralVectorField& u);
/// max_xi |u_hat(-xi) - conj(u_hat(xi))| / max |u_hat| (0 for the zero field).
double hermitian_defect(const SpectralVectorField& u);
/// Enforces u_hat(-xi) = conj(u_hat(xi)) by averaging each mirror pair.
void symmetrize_hermitian(SpectralVectorField& u);
/// Relative distance max|a-b| / max(max|a|, max|b|), 0 when both vanish.
double relative_difference(const SpectralVectorField& a, const SpectralVectorField& b);

}  // namespace nsc
