#pragma once

#include <cmath>
#include <random>

#include "nsc/lattice.hpp"
#include "nsc/spectral.hpp"

namespace testsupport {

using nsc::cplx;

inline nsc::FrequencyLattice cube(int n, double period = nsc::kTwoPi) {
  return nsc::make_lattice({period, period, period}, {n, n, n});
}

inline nsc::SpectralVectorField random_divfree(const nsc::FrequencyLattice& lat, std::uint64_t seed,
                                               double rmin = 0.0, double rmax = nsc::kInf) {
  nsc::RandomFieldOptions opt;
  opt.seed = seed;
  opt.min_radius = rmin;
  opt.max_radius = rmax;
  return nsc::random_field(lat, opt);
}

// Direct evaluation of (1/V) sum_eta a_j(xi - eta) i eta_j b_i(eta) for every
// retained xi, inputs restricted to retained modes. O(N^6), for tiny lattices.
inline nsc::SpectralVectorField brute_advection(const nsc::SpectralVectorField& u) {
  const auto& lat = u.lattice;
  const auto m = lat.modes();
  nsc::SpectralVectorField out(lat);
  const double inv_v = 1.0 / lat.box_volume();
  auto keep = [&](int a, int k) { return std::abs(k) <= lat.dealias_cutoff(a); };
  for (std::size_t x = 0; x < lat.size(); ++x) {
    const auto kx = lat.wavenumbers(x);
    if (!(keep(0, kx[0]) && keep(1, kx[1]) && keep(2, kx[2]))) continue;
    cplx acc[3] = {0.0, 0.0, 0.0};
    for (std::size_t y = 0; y < lat.size(); ++y) {
      const auto ky = lat.wavenumbers(y);
      if (!(keep(0, ky[0]) && keep(1, ky[1]) && keep(2, ky[2]))) continue;
      int kd[3];
      bool ok = true;
      for (int a = 0; a < 3; ++a) {
        kd[a] = kx[a] - ky[a];
        ok = ok && keep(a, kd[a]);
      }
      if (!ok) continue;
      const std::size_t d = lat.flat(lat.position(0, kd[0]), lat.position(1, kd[1]), lat.position(2, kd[2]));
      const auto eta = lat.frequency(y);
      cplx adv = 0.0;
      for (int j = 0; j < 3; ++j) adv += u.comp[j][d] * cplx(0.0, eta[j]);
      for (int i = 0; i < 3; ++i) acc[i] += adv * u.comp[i][y];
    }
    for (int i = 0; i < 3; ++i) out.comp[i][x] = acc[i] * inv_v;
  }
  (void)m;
  return out;
}

// Per-mode linear Stokes-Coriolis flow by classical RK4 on the 3x3 system
// d/dt f = -|xi|^2 f - P(Omega e3 x f), P the Leray projector.
inline void ode_mode(const std::array<double, 3>& xi, double omega, double t, int steps, cplx f[3]) {
  const double x2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
  auto rhs = [&](const cplx in[3], cplx out[3]) {
    const cplx c[3] = {-omega * in[1], omega * in[0], 0.0};
    cplx dot = 0.0;
    for (int a = 0; a < 3; ++a) dot += xi[a] * c[a];
    for (int a = 0; a < 3; ++a) {
      const cplx pc = x2 > 0.0 ? c[a] - xi[a] * dot / x2 : c[a];
      out[a] = -x2 * in[a] - pc;
    }
  };
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    cplx k1[3], k2[3], k3[3], k4[3], tmp[3];
    rhs(f, k1);
    for (int a = 0; a < 3; ++a) tmp[a] = f[a] + 0.5 * h * k1[a];
    rhs(tmp, k2);
    for (int a = 0; a < 3; ++a) tmp[a] = f[a] + 0.5 * h * k2[a];
    rhs(tmp, k3);
    for (int a = 0; a < 3; ++a) tmp[a] = f[a] + h * k3[a];
    rhs(tmp, k4);
    for (int a = 0; a < 3; ++a) f[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
  }
}

}  // namespace testsupport
