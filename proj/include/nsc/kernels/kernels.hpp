#pragma once

// Flat data-parallel inner loops of the spectral pipeline.
//
// Every kernel has a portable scalar reference implementation and, on x86-64
// builds, an AVX2/FMA variant. `active()` returns the variant selected at
// startup from the CPU feature flags; NSC_KERNELS=scalar in the environment
// forces the reference path. The variants agree to rounding (FMA contraction
// is the only source of difference), which the equivalence tests pin down.

#include <cstddef>
#include <string_view>

#include "nsc/common.hpp"

namespace nsc::kernels {

struct KernelTable {
  std::string_view name;

  /// out_i[n] = sum_j u_j[n] * grad[3*i + j][n], with grad[3*i+j] = d_j u_i.
  void (*advect)(std::size_t n, const double* const u[3], const double* const grad[9],
                 double* const out[3]);

  /// In-place Leray projection f <- f - xi (xi . f) * inv_xi2 on complex data.
  /// inv_xi2 holds 1/|xi|^2 (0 where xi = 0).
  void (*project)(std::size_t n, const double* const xi[3], const double* inv_xi2,
                  cplx* const f[3]);

  /// out = cd * f - sd * (xi x f): per-mode heat decay composed with the
  /// Coriolis rotation (cd = e^{-t|xi|^2} cos(theta),
  /// sd = e^{-t|xi|^2} sin(theta)/|xi|). `out` must not alias `f`.
  void (*rotate_decay)(std::size_t n, const double* const xi[3], const double* cd,
                       const double* sd, const cplx* const f[3], cplx* const out[3]);

  /// out = T(a, ca) + i * T(b, cb) with T(f, c) = f when c is null and
  /// i*c*f otherwise. Packs two real-field spectra into one complex transform.
  void (*pack_pair)(std::size_t n, const cplx* a, const double* ca, const cplx* b,
                    const double* cb, cplx* out);

  /// out[n] = sqrt(|f1|^2 + |f2|^2 + |f3|^2).
  void (*magnitude)(std::size_t n, const cplx* const f[3], double* out);
};

const KernelTable& scalar();
/// AVX2 table, or nullptr when not compiled in or not supported by the CPU.
const KernelTable* avx2();
/// Variant in use for this process.
const KernelTable& active();

}  // namespace nsc::kernels
