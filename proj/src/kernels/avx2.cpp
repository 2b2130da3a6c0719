// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the runtime CPU check in dispatch.cpp.

#include <immintrin.h>

#include <cmath>

#include "nsc/kernels/kernels.hpp"

namespace nsc::kernels {
namespace {

// Complex data is interleaved (re, im); one __m256d holds two modes.
inline __m256d load_c2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store_c2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// [a, b] -> [a, a, b, b]: one real coefficient per complex mode.
inline __m256d load_dup2(const double* p) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(p)), 0x50);
}

// Multiplication by i: (re, im) -> (-im, re).
inline __m256d mul_i(__m256d v) {
  const __m256d sign = _mm256_setr_pd(-1.0, 1.0, -1.0, 1.0);
  return _mm256_mul_pd(_mm256_permute_pd(v, 0x5), sign);
}

void advect(std::size_t n, const double* const u[3], const double* const grad[9],
            double* const out[3]) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d u1 = _mm256_loadu_pd(u[0] + k);
    const __m256d u2 = _mm256_loadu_pd(u[1] + k);
    const __m256d u3 = _mm256_loadu_pd(u[2] + k);
    for (int i = 0; i < 3; ++i) {
      __m256d acc = _mm256_mul_pd(u1, _mm256_loadu_pd(grad[3 * i] + k));
      acc = _mm256_fmadd_pd(u2, _mm256_loadu_pd(grad[3 * i + 1] + k), acc);
      acc = _mm256_fmadd_pd(u3, _mm256_loadu_pd(grad[3 * i + 2] + k), acc);
      _mm256_storeu_pd(out[i] + k, acc);
    }
  }
  for (; k < n; ++k) {
    const double u1 = u[0][k], u2 = u[1][k], u3 = u[2][k];
    for (int i = 0; i < 3; ++i)
      out[i][k] = std::fma(u3, grad[3 * i + 2][k],
                           std::fma(u2, grad[3 * i + 1][k], u1 * grad[3 * i][k]));
  }
}

void project(std::size_t n, const double* const xi[3], const double* inv_xi2,
             cplx* const f[3]) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d x1 = load_dup2(xi[0] + k);
    const __m256d x2 = load_dup2(xi[1] + k);
    const __m256d x3 = load_dup2(xi[2] + k);
    const __m256d f1 = load_c2(f[0] + k);
    const __m256d f2 = load_c2(f[1] + k);
    const __m256d f3 = load_c2(f[2] + k);
    __m256d dot = _mm256_mul_pd(x1, f1);
    dot = _mm256_fmadd_pd(x2, f2, dot);
    dot = _mm256_fmadd_pd(x3, f3, dot);
    const __m256d q = _mm256_mul_pd(dot, load_dup2(inv_xi2 + k));
    store_c2(f[0] + k, _mm256_fnmadd_pd(x1, q, f1));
    store_c2(f[1] + k, _mm256_fnmadd_pd(x2, q, f2));
    store_c2(f[2] + k, _mm256_fnmadd_pd(x3, q, f3));
  }
  for (; k < n; ++k) {
    const double x1 = xi[0][k], x2 = xi[1][k], x3 = xi[2][k];
    const cplx dot = x1 * f[0][k] + x2 * f[1][k] + x3 * f[2][k];
    const cplx q = dot * inv_xi2[k];
    f[0][k] -= x1 * q;
    f[1][k] -= x2 * q;
    f[2][k] -= x3 * q;
  }
}

void rotate_decay(std::size_t n, const double* const xi[3], const double* cd, const double* sd,
                  const cplx* const f[3], cplx* const out[3]) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d x1 = load_dup2(xi[0] + k);
    const __m256d x2 = load_dup2(xi[1] + k);
    const __m256d x3 = load_dup2(xi[2] + k);
    const __m256d c = load_dup2(cd + k);
    const __m256d s = load_dup2(sd + k);
    const __m256d f1 = load_c2(f[0] + k);
    const __m256d f2 = load_c2(f[1] + k);
    const __m256d f3 = load_c2(f[2] + k);
    const __m256d c1 = _mm256_fmsub_pd(x2, f3, _mm256_mul_pd(x3, f2));
    const __m256d c2 = _mm256_fmsub_pd(x3, f1, _mm256_mul_pd(x1, f3));
    const __m256d c3 = _mm256_fmsub_pd(x1, f2, _mm256_mul_pd(x2, f1));
    store_c2(out[0] + k, _mm256_fnmadd_pd(s, c1, _mm256_mul_pd(c, f1)));
    store_c2(out[1] + k, _mm256_fnmadd_pd(s, c2, _mm256_mul_pd(c, f2)));
    store_c2(out[2] + k, _mm256_fnmadd_pd(s, c3, _mm256_mul_pd(c, f3)));
  }
  for (; k < n; ++k) {
    const double x1 = xi[0][k], x2 = xi[1][k], x3 = xi[2][k];
    const cplx f1 = f[0][k], f2 = f[1][k], f3 = f[2][k];
    const cplx c1 = x2 * f3 - x3 * f2;
    const cplx c2 = x3 * f1 - x1 * f3;
    const cplx c3 = x1 * f2 - x2 * f1;
    out[0][k] = cd[k] * f1 - sd[k] * c1;
    out[1][k] = cd[k] * f2 - sd[k] * c2;
    out[2][k] = cd[k] * f3 - sd[k] * c3;
  }
}

void pack_pair(std::size_t n, const cplx* a, const double* ca, const cplx* b, const double* cb,
               cplx* out) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    __m256d ta = load_c2(a + k);
    if (ca != nullptr) ta = mul_i(_mm256_mul_pd(load_dup2(ca + k), ta));
    __m256d tb = load_c2(b + k);
    if (cb != nullptr) tb = mul_i(_mm256_mul_pd(load_dup2(cb + k), tb));
    store_c2(out + k, _mm256_add_pd(ta, mul_i(tb)));
  }
  for (; k < n; ++k) {
    cplx ta = a[k], tb = b[k];
    if (ca != nullptr) ta = {-ca[k] * ta.imag(), ca[k] * ta.real()};
    if (cb != nullptr) tb = {-cb[k] * tb.imag(), cb[k] * tb.real()};
    out[k] = {ta.real() - tb.imag(), ta.imag() + tb.real()};
  }
}

void magnitude(std::size_t n, const cplx* const f[3], double* out) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d sa = _mm256_setzero_pd(), sb = _mm256_setzero_pd();
    for (int c = 0; c < 3; ++c) {
      const __m256d va = load_c2(f[c] + k);
      const __m256d vb = load_c2(f[c] + k + 2);
      sa = _mm256_fmadd_pd(va, va, sa);
      sb = _mm256_fmadd_pd(vb, vb, sb);
    }
    // hadd yields [k, k+2, k+1, k+3]; restore mode order.
    const __m256d s = _mm256_permute4x64_pd(_mm256_hadd_pd(sa, sb), 0xD8);
    _mm256_storeu_pd(out + k, _mm256_sqrt_pd(s));
  }
  for (; k < n; ++k) {
    const double s = std::norm(f[0][k]) + std::norm(f[1][k]) + std::norm(f[2][k]);
    out[k] = std::sqrt(s);
  }
}

constexpr KernelTable kAvx2{"avx2", advect, project, rotate_decay, pack_pair, magnitude};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace nsc::kernels
