#include "selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "nsc/conditions.hpp"
#include "nsc/kernels/kernels.hpp"
#include "nsc/large_data.hpp"
#include "nsc/littlewood_paley.hpp"
#include "nsc/solver.hpp"
#include "nsc/spectral.hpp"
#include "nsc/stokes_coriolis.hpp"

namespace nsc::cli {

namespace {

SelfCheck make(std::string name, bool ok, double value, double limit) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.3e (limit %.1e)", value, limit);
  return {std::move(name), ok, buf};
}

SpectralVectorField sample_field(int n, std::uint64_t seed) {
  const auto lat = make_lattice({kTwoPi, kTwoPi, kTwoPi}, {n, n, n});
  RandomFieldOptions opt;
  opt.seed = seed;
  opt.max_radius = n / 3.0;
  return random_field(lat, opt);
}

}  // namespace

std::vector<SelfCheck> run_selftest(std::uint64_t seed) {
  std::vector<SelfCheck> out;

  {
    const auto lat = make_lattice({kTwoPi, kTwoPi, 8 * kTwoPi}, {16, 16, 64});
    const auto part = lp::DyadicPartition::for_lattice(lat);
    double worst = 0.0;
    for (double x2 : lat.xi_squared()) {
      if (x2 <= 0.0) continue;
      worst = std::max(worst, std::abs(part.window_sum(std::sqrt(x2)) - 1.0));
    }
    out.push_back(make("partition of unity", worst <= 1e-12, worst, 1e-12));
  }

  const auto u = sample_field(16, seed);
  {
    const auto back = to_spectral(to_physical(u));
    const double err = relative_difference(u, back);
    out.push_back(make("transform round trip", err <= 1e-12, err, 1e-12));
    const double e1 = energy(u), e2 = energy(to_physical(u));
    const double rel = std::abs(e1 - e2) / e1;
    out.push_back(make("Parseval energy", rel <= 1e-10, rel, 1e-10));
  }
  {
    const auto p = helmholtz_project(u);
    const double idem = relative_difference(p, helmholtz_project(p));
    out.push_back(make("projection idempotent", idem <= 1e-12, idem, 1e-12));
    const double div = divergence_ratio(p);
    out.push_back(make("projection divergence-free", div <= 1e-10, div, 1e-10));
  }
  {
    const double ip = inner_product(coriolis_term(u, 1.0), u);
    const double rel = std::abs(ip) / (2.0 * energy(u));
    out.push_back(make("Coriolis orthogonality", rel <= 1e-12, rel, 1e-12));
  }
  {
    const auto a = semigroup_apply(u, {3.0, 0.3});
    const auto b = semigroup_apply(semigroup_apply(u, {3.0, 0.1}), {3.0, 0.2});
    const double err = relative_difference(a, b);
    out.push_back(make("semigroup property", err <= 1e-12, err, 1e-12));
  }
  {
    const auto r = cond::transport_decomposition_check(u);
    out.push_back(make("transport identities", r.max_residual() <= 1e-12, r.max_residual(), 1e-12));
  }
  {
    SolverConfig cfg;
    cfg.T = 0.5;
    cfg.dt0 = 0.05;
    cfg.omega = 2.0;
    cfg.nonlinear = false;
    cfg.snapshot_times = {0.5};
    SpectralVectorField last(u.lattice);
    solve(u, cfg, [&](const RunSample&, const SpectralVectorField& f, const SpectralVectorField*) {
      last = f;
    });
    const double err = relative_difference(last, semigroup_apply(u, {2.0, 0.5}));
    out.push_back(make("linear solver exactness", err <= 1e-10, err, 1e-10));
  }
  {
    const double eps = 1.0 / 16.0;
    const auto d = data::build_u0(eps, data::datum_lattice(eps, 64, 32, 1.0 / 12.0));
    const double div = divergence_ratio(d.u0);
    out.push_back(make("large datum divergence-free", div <= 1e-15, div, 1e-15));
    const auto part = lp::DyadicPartition::for_lattice(d.u0.lattice);
    const auto ns = lp::fb_norm(part, d.u0, lp::BesovParams(0.0, 1.0, 1.0));
    double off = 0.0;
    for (const auto& b : ns.blocks)
      if (b.j != 0) off = std::max(off, b.value);
    off /= ns.block(0);
    out.push_back(make("large datum single block", off <= 1e-14, off, 1e-14));
  }
  if (const auto* simd = kernels::avx2()) {
    const std::size_t n = u.size();
    const cplx* f[3] = {u.comp[0].data(), u.comp[1].data(), u.comp[2].data()};
    RealArray m1(n), m2(n);
    kernels::scalar().magnitude(n, f, m1.data());
    simd->magnitude(n, f, m2.data());
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      worst = std::max(worst, std::abs(m1[k] - m2[k]) / std::max(1e-300, m1[k]));
    out.push_back(make("SIMD kernel agreement", worst <= 1e-14, worst, 1e-14));
  }
  return out;
}

}  // namespace nsc::cli
