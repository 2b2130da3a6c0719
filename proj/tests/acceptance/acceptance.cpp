// Acceptance suite: one PASS/FAIL line per criterion, INFO lines for
// reported (non-gating) findings. Exit 0 iff the failing set equals the
// --expect-fail set.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "nsc/conditions.hpp"
#include "nsc/large_data.hpp"
#include "nsc/littlewood_paley.hpp"
#include "nsc/solver.hpp"
#include "nsc/spectral.hpp"
#include "nsc/stokes_coriolis.hpp"

using namespace nsc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void info(const std::string& id, const std::string& msg) {
  std::printf("INFO              %-20s %s\n", id.c_str(), msg.c_str());
  std::fflush(stdout);
}

FrequencyLattice cube(int n, double period = kTwoPi) { return make_lattice({period, period, period}, {n, n, n}); }

SpectralVectorField random_divfree(const FrequencyLattice& lat, std::uint64_t seed, double rmin = 0.0,
                                   double rmax = kInf) {
  RandomFieldOptions opt;
  opt.seed = seed;
  opt.min_radius = rmin;
  opt.max_radius = rmax;
  return random_field(lat, opt);
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// ---------------------------------------------------------------------------

Outcome partition_of_unity() {
  double worst = 0.0;
  std::vector<FrequencyLattice> lats = {cube(16), cube(64, 3.7), make_lattice({5.0, 9.0, 0.3}, {32, 48, 64}),
                                        data::datum_lattice(1.0 / 8)};
  for (const auto& lat : lats) {
    const auto part = lp::DyadicPartition::for_lattice(lat);
    for (std::size_t n = 1; n < lat.size(); ++n) {
      const double rho = std::sqrt(lat.xi_squared()[n]);
      worst = std::max(worst, std::abs(part.window_sum(rho) - 1.0));
      worst = std::max(worst, std::abs(lp::partition_sum(rho) - 1.0));
    }
  }
  return {worst <= 1e-12, fmt("max |sum_j psi(2^-j|xi|) - 1| = %.3g over 4 lattices (tol 1e-12)", worst)};
}

Outcome fb_lp_identity() {
  const double ps[] = {1.0, 1.5, 2.0, kInf};
  double worst[4] = {0, 0, 0, 0};
  const auto lat = cube(16);
  const auto part = lp::DyadicPartition::for_lattice(lat);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto u = random_divfree(lat, seed, 0.0, 6.0);
    for (int i = 0; i < 4; ++i) {
      const double fb = lp::fb_norm(part, u, lp::BesovParams(0, ps[i], 1)).aggregate;
      worst[i] = std::max(worst[i], rel_gap(fb, lp::lp_norm(u, ps[i])));
    }
  }
  bool ok = true;
  for (double w : worst) ok = ok && w <= 1e-12;
  return {ok, fmt("max rel |FB^0_{p,1} - L^p| over 50 fields: p=1 %.2g, p=3/2 %.2g, p=2 %.2g, p=inf %.2g (tol 1e-12)",
                  worst[0], worst[1], worst[2], worst[3])};
}

Outcome single_block() {
  double worst = 0.0;
  for (double eps : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    const auto d = data::build_u0(eps, data::datum_lattice(eps));
    const auto part = lp::DyadicPartition::for_lattice(d.u0.lattice);
    for (const auto& prm : {lp::BesovParams(-1, 1, 1), lp::BesovParams(0, 1, 1), lp::BesovParams(1, 1.5, 1)}) {
      const auto ns = lp::fb_norm(part, d.u0, prm);
      if (!(ns.block(0) > 0.0)) return {false, fmt("block 0 vanishes at eps=%g", eps)};
      for (const auto& b : ns.blocks)
        if (b.j != 0) worst = std::max(worst, b.value / ns.block(0));
    }
  }
  return {worst <= 1e-14, fmt("max off-block / block 0 = %.3g for eps in {1/8,1/16,1/32} (tol 1e-14)", worst)};
}

Outcome norm_scaling(const data::ScalingTable& t, double seconds) {
  const double a = t.fit("fb_minus1_over_sqrt_loglog").slope;
  const double b = t.fit("condition_group_over_sqrt_loglog").slope;
  const bool ok = std::abs(a) <= 0.05 && std::abs(b - 1.0 / 3) <= 0.05 && seconds < 120.0;
  return {ok, fmt("slopes: FB^-1 / sqrt(L) = %.4f (0 +- 0.05), group / sqrt(L) = %.4f (1/3 +- 0.05), sweep %.1f s (< 120)",
                  a, b, seconds)};
}

Outcome semigroup() {
  double semi = 0.0, modulus = 0.0;
  const auto lat = cube(16);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto u = random_divfree(lat, seed);
    for (double omega : {0.0, 1.0, 10.0, 100.0}) {
      const auto a = semigroup_apply(u, {omega, 0.7});
      const auto b = semigroup_apply(semigroup_apply(u, {omega, 0.3}), {omega, 0.4});
      semi = std::max(semi, relative_difference(a, b));
      const auto m0 = lp::magnitudes(u), m1 = lp::magnitudes(a);
      for (std::size_t n = 1; n < lat.size(); ++n) {
        const double expect = std::exp(-0.7 * lat.xi_squared()[n]) * m0[n];
        if (expect > 0.0) modulus = std::max(modulus, std::abs(m1[n] - expect) / expect);
      }
    }
  }
  return {semi <= 1e-12 && modulus <= 1e-13,
          fmt("semigroup rel diff %.3g (tol 1e-12), per-mode modulus rel err %.3g (tol 1e-13)", semi, modulus)};
}

Outcome pointwise_bounds() {
  const auto d = data::build_u0(1.0 / 8, data::datum_lattice(1.0 / 8));
  bool ok = true;
  double sharp = 0.0, unit = 0.0, tpre = 0.0;
  std::size_t tpre_viol = 0;
  for (double omega : {1.0, 10.0})
    for (double t : {0.1, 1.0, 10.0}) {
      const auto r = pointwise_bound_check(d.u0, omega, t);
      ok = ok && r.passed();
      for (const auto& c : r.checks) {
        if (c.gating) sharp = std::max(sharp, c.max_ratio);
      }
      unit = std::max(unit, r.check("horizontal_sum_unit").max_ratio);
      tpre = std::max(tpre, r.check("diagonal_sum_t_prefactor").max_ratio);
      tpre_viol += r.check("diagonal_sum_t_prefactor").violations;
    }
  info("pointwise_bounds", fmt("t-prefactor diagonal reading: max ratio %.4g, %zu violating modes over 6 (omega,t) pairs",
                               tpre, tpre_viol));
  info("pointwise_bounds", fmt("unit-constant component-sum reading: max ratio %.4g (sqrt 2 = 1.4142)", unit));
  return {ok && sharp <= 1 + 1e-10, fmt("sharp bounds max ratio %.12f (tol 1 + 1e-10)", sharp)};
}

Outcome transport() {
  double worst = 0.0;
  bool divfree = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = cond::transport_decomposition_check(random_divfree(cube(16), seed));
    worst = std::max(worst, r.max_residual());
    divfree = divfree && r.divergence_free;
  }
  return {divfree && worst <= 1e-12, fmt("max relative residual %.3g over 20 fields on 16^3 (tol 1e-12)", worst)};
}

Outcome product_estimates() {
  const auto lat = cube(24);
  const auto part = lp::DyadicPartition::for_lattice(lat);
  const double scale = std::pow(kTwoPi, 3);
  double worst = 0.0, mixed = 0.0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto a = to_physical(random_divfree(lat, seed, 0.0, 5.0));
    const auto b = to_physical(random_divfree(lat, seed + 1000, 0.0, 5.0));
    const int ca = seed % 3, cb = (seed / 3) % 3;
    PhysicalScalarField fa(lat), fb(lat), ab(lat);
    fa.values = a.comp[ca];
    fb.values = b.comp[cb];
    for (std::size_t n = 0; n < lat.size(); ++n) ab.values[n] = fa.values[n] * fb.values[n];
    const auto sa = to_spectral(fa), sb = to_spectral(fb), sab = to_spectral(ab);
    worst = std::max(worst, lp::lp_norm(sab, 1.0) * scale / (lp::lp_norm(sa, 1.0) * lp::lp_norm(sb, 1.0)));
    const double lhs = lp::fb_norm(part, sab, lp::BesovParams(0, 1.5, 1)).aggregate;
    const double rhs = lp::fb_norm(part, sa, lp::BesovParams(0, 1.5, 1)).aggregate *
                       lp::fb_norm(part, sb, lp::BesovParams(0, 1, 1)).aggregate / scale;
    mixed = std::max(mixed, lhs / rhs);
  }
  return {worst <= 1 + 1e-10 && mixed <= 4.0,
          fmt("L^1 product ratio max %.6f (tol 1 + 1e-10); FB^0_{3/2,1} x FB^0_{1,1} observed constant %.4f (<= 4)",
              worst, mixed)};
}

SpectralVectorField two_mode(const FrequencyLattice& lat) {
  PhysicalVectorField p(lat);
  const auto m = lat.modes();
  for (int i = 0; i < m[0]; ++i)
    for (int j = 0; j < m[1]; ++j)
      for (int k = 0; k < m[2]; ++k) {
        const double x = i * lat.physical_spacing(0), y = j * lat.physical_spacing(1), z = k * lat.physical_spacing(2);
        p.comp[0][lat.flat(i, j, k)] = std::sin(y + z);
        p.comp[1][lat.flat(i, j, k)] = std::sin(x);
      }
  auto u = to_spectral(p);
  u.divergence_free = true;
  return u;
}

SpectralVectorField final_state(const SpectralVectorField& u0, SolverConfig cfg) {
  cfg.snapshot_times = {cfg.T};
  SpectralVectorField last(u0.lattice);
  const auto rep = solve(u0, cfg, [&](const RunSample&, const SpectralVectorField& u, const SpectralVectorField*) {
    last = u;
  });
  if (!rep.completed) throw NumericalFinding("benchmark run did not complete: " + rep.finding);
  return last;
}

Outcome solver_order() {
  const auto u0 = two_mode(cube(16));
  SolverConfig cfg;
  cfg.omega = 1.0;
  cfg.T = 1.0;
  cfg.cfl = 1.0;
  cfg.dt0 = 0.0125;
  const auto ref = final_state(u0, cfg);
  std::vector<double> err;
  for (double dt : {0.1, 0.05, 0.025}) {
    cfg.dt0 = dt;
    err.push_back(max_abs(final_state(u0, cfg) - ref));
  }
  const double r1 = err[0] / err[1], r2 = err[1] / err[2];

  double lin = 0.0;
  const auto v0 = random_divfree(cube(16), 7);
  for (double omega : {0.0, 1.0, 10.0, 100.0}) {
    SolverConfig lc;
    lc.omega = omega;
    lc.T = 1.0;
    lc.dt0 = 0.1;
    lc.nonlinear = false;
    lin = std::max(lin, relative_difference(final_state(v0, lc), semigroup_apply(v0, {omega, 1.0})));
  }
  const bool ok = std::abs(r1 - 16) <= 3 && std::abs(r2 - 16) <= 3 && lin <= 1e-10;
  return {ok, fmt("error ratios %.2f, %.2f (16 +- 3); linear runs vs exact semigroup %.3g at T=1 (tol 1e-10)", r1, r2,
                  lin)};
}

struct LongRun {
  double omega;
  RunReport report;
  double seconds;
};

SolverConfig long_config(double omega) {
  SolverConfig cfg;
  cfg.omega = omega;
  cfg.T = 5.0;
  cfg.dt0 = 0.1;
  for (int k = 1; k <= 20; ++k) cfg.snapshot_times.push_back(0.25 * k);
  return cfg;
}

Outcome conservation(const std::vector<LongRun>& runs) {
  bool ok = true;
  std::string detail;
  for (const auto& r : runs) {
    double growth = 0.0, div = 0.0;
    const auto& s = r.report.samples;
    for (std::size_t i = 1; i < s.size(); ++i) {
      const double rate = (s[i].energy / s[i - 1].energy - 1.0) / (s[i].t - s[i - 1].t);
      growth = std::max(growth, rate);
    }
    for (const auto& x : s) div = std::max(div, x.divergence);
    const bool good = r.report.completed && growth <= 1e-6 && div <= 1e-10 && r.seconds < 1800;
    ok = ok && good;
    detail += fmt("[omega=%g: max dlogE/dt %+.2g, div %.2g, %ld steps, %.0f s%s] ", r.omega, growth, div,
                  r.report.steps, r.seconds, r.report.completed ? "" : ", incomplete");
  }
  return {ok, detail + "(tol 1e-6 per unit time, 1e-10, < 1800 s)"};
}

Outcome bootstrap_monitor(const RunReport& full, const RunReport& linear, const SpectralVectorField& u0) {
  double vmax = 0.0;
  for (const auto& s : linear.samples) vmax = std::max(vmax, s.v_max);
  const auto bl = perturbation_monitor(linear, 0.1);
  const bool lin_ok = vmax <= 1e-12 * max_abs(u0) && bl.gamma == linear.config.T && !bl.exceeded;

  const auto bf = perturbation_monitor(full, 0.1);
  bool monotone = true;
  for (std::size_t i = 1; i < bf.times.size(); ++i)
    monotone = monotone && bf.sup_minus1[i] + bf.int_plus1[i] >= bf.sup_minus1[i - 1] + bf.int_plus1[i - 1];
  const double last = bf.sup_minus1.back() + bf.int_plus1.back();
  info("bootstrap_monitor",
       fmt("full run eps=1/8 omega=1 eta=0.1: Gamma = %.4g of T = %g (%s), final sup+int = %.4g, margin eta/2 %s",
           bf.gamma, bf.T, bf.exceeded ? "eta exceeded" : "not exceeded", last, bf.margin ? "held" : "not held"));
  return {lin_ok && monotone && full.completed,
          fmt("linear run max|v| = %.2g, Gamma = %g = T; full run bootstrap sum monotone: %s", vmax, bl.gamma,
              monotone ? "yes" : "no")};
}

Outcome condition_shape(const data::ScalingTable& t) {
  const auto shape = cond::condition_shape(t.rows, {});
  info("condition_shape", fmt("kappa = %.4f; literal exp(C L) model spread %.3g", shape.kappa, shape.literal_spread));
  std::string lhs;
  for (const auto& r : shape.rows) lhs += fmt(" %.3g", r.lhs);
  info("condition_shape", "corollary LHS over eps = 2^-4..2^-14:" + lhs + " (delta = 0.01)");
  return {shape.calibrated_spread <= 2.0,
          fmt("LHS / (C eps^{1/3} L exp(kappa C L)) spread %.4f across the sweep (<= 2)", shape.calibrated_spread)};
}

// Ratio of the nonlinear time integral to ||u0||_{FB^-1} times the corollary
// norm group, the constant the corollary chain absorbs. Reported only.
void integral_constant() {
  std::string line;
  for (double eps : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    const auto d = data::build_u0(eps, data::datum_lattice(eps, 72, 64, 1.0 / 8));
    const auto th = cond::theorem_condition(d.u0, 1.0, {});
    const auto co = cond::corollary_condition(data::datum_norms(eps), {});
    line += fmt(" eps=%g: integral %.3g, ratio %.3g, theorem LHS %.3g;", eps, th.integral.direct,
                th.integral.direct / (co.u0_fb_minus1 * co.group), th.lhs);
  }
  info("integral_constant", "omega=1" + line);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::vector<std::string> expect_fail, only;
  app.add_option("--expect-fail", expect_fail, "criterion ids that are known to fail");
  app.add_option("--only", only, "run only these criterion ids");
  CLI11_PARSE(app, argc, argv);

  const std::set<std::string> expected(expect_fail.begin(), expect_fail.end());
  const std::set<std::string> selected(only.begin(), only.end());
  std::set<std::string> failed, ran;

  auto want = [&](const std::string& id) { return selected.empty() || selected.count(id); };
  auto report = [&](const std::string& id, const std::function<Outcome()>& f) {
    if (!want(id)) return;
    ran.insert(id);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) failed.insert(id);
    const char* tag = o.pass ? (expected.count(id) ? "PASS (unexpected)" : "PASS") : (expected.count(id) ? "FAIL (expected)" : "FAIL");
    std::printf("%-17s %-20s %s [%.2f s]\n", tag, id.c_str(), o.detail.c_str(), s);
    std::fflush(stdout);
  };

  report("partition_of_unity", partition_of_unity);
  report("fb_lp_identity", fb_lp_identity);
  report("single_block", single_block);

  data::ScalingTable sweep;
  double sweep_seconds = 0.0;
  if (want("norm_scaling") || want("condition_shape")) {
    std::vector<double> eps;
    for (int k = 4; k <= 14; ++k) eps.push_back(std::ldexp(1.0, -k));
    const auto t0 = std::chrono::steady_clock::now();
    sweep = data::norm_scaling_sweep(eps, {}, {}, 1);
    sweep_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    info("norm_scaling", fmt("L^1 slopes: l1 / sqrt(L) %.4f, l1 / L %.4f (single block: l1 equals FB^-1)",
                             sweep.fit("l1_over_sqrt_loglog").slope, sweep.fit("l1_over_loglog").slope));
  }
  report("norm_scaling", [&] { return norm_scaling(sweep, sweep_seconds); });
  report("semigroup", semigroup);
  report("pointwise_bounds", pointwise_bounds);
  report("transport", transport);
  report("product_estimates", product_estimates);
  report("solver_order", solver_order);

  if (want("conservation") || want("bootstrap_monitor")) {
    const auto datum = data::build_u0(1.0 / 8, data::datum_lattice(1.0 / 8));
    std::vector<LongRun> runs;
    const std::vector<double> omegas =
        want("conservation") ? std::vector<double>{0.0, 1.0, 10.0, 100.0} : std::vector<double>{1.0};
    for (double omega : omegas) {
      auto cfg = long_config(omega);
      cfg.track_linear = omega == 1.0;
      const auto t0 = std::chrono::steady_clock::now();
      auto rep = solve(datum.u0, cfg);
      runs.push_back({omega, std::move(rep), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
      info("conservation", fmt("omega=%g run finished in %.0f s", omega, runs.back().seconds));
    }
    if (want("conservation")) report("conservation", [&] { return conservation(runs); });
    if (want("bootstrap_monitor")) {
      report("bootstrap_monitor", [&] {
        auto cfg = long_config(1.0);
        cfg.nonlinear = false;
        cfg.track_linear = true;
        const auto lin = solve(datum.u0, cfg);
        const auto& full = std::find_if(runs.begin(), runs.end(), [](const LongRun& r) { return r.omega == 1.0; })->report;
        return bootstrap_monitor(full, lin, datum.u0);
      });
    }
  }
  report("condition_shape", [&] { return condition_shape(sweep); });
  if (selected.empty() || selected.count("integral_constant")) integral_constant();

  std::set<std::string> expected_ran;
  for (const auto& id : expected)
    if (ran.count(id)) expected_ran.insert(id);
  const bool ok = failed == expected_ran;
  std::printf("%zu criteria, %zu failed (%zu expected): %s\n", ran.size(), failed.size(), expected_ran.size(),
              ok ? "OK" : "MISMATCH");
  return ok ? 0 : 1;
}
