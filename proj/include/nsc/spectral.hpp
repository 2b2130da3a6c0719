#pragma once

#include <cstdint>
#include <memory>

#include "nsc/fft.hpp"
#include "nsc/field.hpp"

namespace nsc {

// Transform convention (continuum Fourier transform on the periodic box):
//   u_hat(xi) = (V/N) * DFT[u](xi),   u(x) = (1/V) * IDFT[u_hat](x),
// with V the box volume and N the number of grid points. With this scaling
// sums of the form sum_xi f(xi) * dxi1*dxi2*dxi3 approximate continuum
// integrals, and products in physical space correspond to (2 pi)^{-3} times
// the discrete convolution weighted by the cell volume.

/// Reusable spectral <-> physical transformer with its own scratch buffer.
/// Not thread-safe per instance; construct one per thread.
class SpectralTransformer {
 public:
  explicit SpectralTransformer(const FrequencyLattice& lattice);

  const FrequencyLattice& lattice() const { return lattice_; }

  /// Inverse transform of two real-field spectra at once. `ca`/`cb` are
  /// optional real multipliers applied as i*c*f (spectral derivatives).
  void to_physical_pair(const cplx* a, const double* ca, const cplx* b, const double* cb,
                        double* out_a, double* out_b);
  /// Forward transform of two real fields at once; outputs are exactly
  /// Hermitian-symmetric.
  void to_spectral_pair(const double* a, const double* b, cplx* out_a, cplx* out_b);
  void to_spectral_single(const double* a, cplx* out);

 private:
  FrequencyLattice lattice_;
  std::shared_ptr<const fft::Plan3d> plan_;
  ComplexArray work_;
};

PhysicalVectorField to_physical(const SpectralVectorField& u);
SpectralVectorField to_spectral(const PhysicalVectorField& u);
PhysicalScalarField to_physical(const SpectralScalarField& f);
SpectralScalarField to_spectral(const PhysicalScalarField& f);

/// Leray projection with symbol delta_ij - xi_i xi_j / |xi|^2; the xi = 0
/// mode is set to zero.
SpectralVectorField helmholtz_project(const SpectralVectorField& f);
void helmholtz_project_inplace(SpectralVectorField& f);

/// i xi . f_hat per lattice point.
SpectralScalarField divergence(const SpectralVectorField& f);

/// max_xi |xi . f_hat| / max_xi |xi| |f_hat| (0 for the zero field).
double divergence_ratio(const SpectralVectorField& f);

/// Omega * e3 x u per mode: Omega * (-u2, u1, 0).
SpectralVectorField coriolis_term(const SpectralVectorField& u, double omega);

/// Zeros every mode with |k_i| > N_i/3 on some axis.
SpectralVectorField dealias(const SpectralVectorField& u);
void dealias_inplace(SpectralVectorField& u);

/// Kinetic energy (1/2) integral |u|^2 dx from the spectrum:
/// (1/2) (2 pi)^{-3} sum |u_hat|^2 dxi^3.
double energy(const SpectralVectorField& u);
/// Same quantity from grid samples: (1/2) sum |u|^2 dx^3.
double energy(const PhysicalVectorField& u);

/// Real inner product Re sum conj(a) . b * dxi^3 (2 pi)^{-3}.
double inner_product(const SpectralVectorField& a, const SpectralVectorField& b);

enum class Dealiasing { two_thirds, none };

/// Pseudospectral advection term with reusable work buffers.
class NonlinearEvaluator {
 public:
  explicit NonlinearEvaluator(const FrequencyLattice& lattice,
                              Dealiasing rule = Dealiasing::two_thirds);

  /// out <- Fourier coefficients of u . grad u. Returns max_x |u(x)| on the
  /// physical grid (used for the advective CFL limit).
  double evaluate(const SpectralVectorField& u, SpectralVectorField& out);

  const FrequencyLattice& lattice() const { return transformer_.lattice(); }

 private:
  SpectralTransformer transformer_;
  Dealiasing rule_;
  std::array<ComplexArray, 3> masked_;
  std::array<RealArray, 12> physical_;  // u1..u3, then d_j u_i at 3 + 3*i + j
  std::array<RealArray, 3> product_;
};

/// Dealiased u . grad u (2/3 rule). Requires a real-valued field and at least
/// four retained modes per axis.
SpectralVectorField nonlinear_term(const SpectralVectorField& u);

struct RandomFieldOptions {
  double min_radius = 0.0;
  double max_radius = kInf;
  bool divergence_free = true;
  /// Restrict support to modes kept by the 2/3 rule.
  bool dealiased_support = true;
  std::uint64_t seed = 1;
};

/// Real-valued random field with i.i.d. Gaussian coefficients on
/// {min_radius <= |xi| <= max_radius}, Hermitian-symmetrized and optionally
/// projected. Deterministic in the seed.
SpectralVectorField random_field(const FrequencyLattice& lattice, const RandomFieldOptions& opt);

}  // namespace nsc
