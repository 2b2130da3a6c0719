#include <cmath>

#include "nsc/kernels/kernels.hpp"

namespace nsc::kernels {
namespace {

void advect(std::size_t n, const double* const u[3], const double* const grad[9],
            double* const out[3]) {
  for (std::size_t k = 0; k < n; ++k) {
    const double u1 = u[0][k], u2 = u[1][k], u3 = u[2][k];
    for (int i = 0; i < 3; ++i)
      out[i][k] = u1 * grad[3 * i][k] + u2 * grad[3 * i + 1][k] + u3 * grad[3 * i + 2][k];
  }
}

void project(std::size_t n, const double* const xi[3], const double* inv_xi2,
             cplx* const f[3]) {
  for (std::size_t k = 0; k < n; ++k) {
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
  for (std::size_t k = 0; k < n; ++k) {
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

inline cplx transform(const cplx& f, const double* c, std::size_t k) {
  if (c == nullptr) return f;
  return {-c[k] * f.imag(), c[k] * f.real()};
}

void pack_pair(std::size_t n, const cplx* a, const double* ca, const cplx* b, const double* cb,
               cplx* out) {
  for (std::size_t k = 0; k < n; ++k) {
    const cplx ta = transform(a[k], ca, k);
    const cplx tb = transform(b[k], cb, k);
    out[k] = {ta.real() - tb.imag(), ta.imag() + tb.real()};
  }
}

void magnitude(std::size_t n, const cplx* const f[3], double* out) {
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::norm(f[0][k]) + std::norm(f[1][k]) + std::norm(f[2][k]);
    out[k] = std::sqrt(s);
  }
}

constexpr KernelTable kScalar{"scalar", advect, project, rotate_decay, pack_pair, magnitude};

}  // namespace

const KernelTable& scalar() { return kScalar; }

}  // namespace nsc::kernels
