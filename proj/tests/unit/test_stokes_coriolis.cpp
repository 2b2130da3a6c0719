#include <doctest.h>

#include <cmath>
#include <json.hpp>

#include "nsc/large_data.hpp"
#include "nsc/stokes_coriolis.hpp"
#include "support.hpp"

using namespace nsc;
using testsupport::cube;

namespace {

// Mirror x1 -> -x1: (R u)^(xi) = (-u1, u2, u3)(-xi1, xi2, xi3).
SpectralVectorField mirror_x1(const SpectralVectorField& u) {
  const auto& lat = u.lattice;
  SpectralVectorField out(lat);
  for (std::size_t n = 0; n < lat.size(); ++n) {
    auto k = lat.wavenumbers(n);
    if (!lat.representable(0, -k[0])) continue;
    const std::size_t m = lat.flat(lat.position(0, -k[0]), lat.position(1, k[1]), lat.position(2, k[2]));
    out.comp[0][n] = -u.comp[0][m];
    out.comp[1][n] = u.comp[1][m];
    out.comp[2][n] = u.comp[2][m];
  }
  out.divergence_free = true;
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("stokes_coriolis");

TEST_CASE("propagator matches a per-mode ODE integration") {
  const auto lat = make_lattice({kTwoPi, 2 * kTwoPi, 3.0}, {8, 8, 8});
  const auto u = testsupport::random_divfree(lat, 11);
  for (double omega : {0.0, 1.0, -7.5}) {
    const double t = 0.3;
    const auto U = semigroup_apply(u, {omega, t});
    double worst = 0.0, scale = max_abs(u);
    for (std::size_t n = 0; n < lat.size(); ++n) {
      cplx f[3] = {u.comp[0][n], u.comp[1][n], u.comp[2][n]};
      testsupport::ode_mode(lat.frequency(n), omega, t, 4000, f);
      for (int a = 0; a < 3; ++a) worst = std::max(worst, std::abs(f[a] - U.comp[a][n]));
    }
    CHECK(worst <= 1e-10 * scale);
  }
}

TEST_CASE("semigroup property and identity at t = 0") {
  const auto u = testsupport::random_divfree(cube(12), 3);
  for (double omega : {0.0, 1.0, 10.0, 100.0}) {
    const auto a = semigroup_apply(u, {omega, 0.7});
    const auto b = semigroup_apply(semigroup_apply(u, {omega, 0.25}), {omega, 0.45});
    CHECK(relative_difference(a, b) <= 1e-12);
  }
  CHECK(relative_difference(semigroup_apply(u, {5.0, 0.0}), u) == 0.0);
}

TEST_CASE("modulus identity for divergence-free data") {
  const auto u = testsupport::random_divfree(cube(12), 5);
  const auto& lat = u.lattice;
  const auto U = semigroup_apply(u, {10.0, 0.2});
  const auto m0 = lp::magnitudes(u), m1 = lp::magnitudes(U);
  for (std::size_t n = 0; n < lat.size(); ++n) {
    const double expect = std::exp(-0.2 * lat.xi_squared()[n]) * m0[n];
    if (n == 0) continue;
    CHECK(std::abs(m1[n] - expect) <= 1e-13 * std::max(expect, 1e-300) + 1e-300);
  }
}

TEST_CASE("zero rotation is the heat flow") {
  const auto u = testsupport::random_divfree(cube(10), 8);
  const auto U = semigroup_apply(u, {0.0, 0.5});
  const auto& lat = u.lattice;
  for (std::size_t n = 1; n < lat.size(); ++n)
    for (int a = 0; a < 3; ++a)
      CHECK(std::abs(U.comp[a][n] - std::exp(-0.5 * lat.xi_squared()[n]) * u.comp[a][n]) <= 1e-15 * max_abs(u));
}

TEST_CASE("rotation reversal is a mirror conjugation") {
  const auto u = testsupport::random_divfree(cube(12), 13);
  const auto lhs = semigroup_apply(u, {-4.0, 0.3});
  const auto rhs = mirror_x1(semigroup_apply(mirror_x1(u), {4.0, 0.3}));
  CHECK(relative_difference(lhs, rhs) <= 1e-13);
}

TEST_CASE("propagator commutes with the Leray projection") {
  RandomFieldOptions opt;
  opt.divergence_free = false;
  opt.seed = 4;
  const auto f = random_field(cube(10), opt);
  const Propagator prop(f.lattice, 3.0, 0.2);
  const auto a = prop.apply(helmholtz_project(f));
  const auto b = helmholtz_project(prop.apply(helmholtz_project(f)));
  CHECK(relative_difference(a, b) <= 1e-13);
  CHECK(divergence_ratio(a) <= 1e-13);
}

TEST_CASE("energy decays and the solution stays real") {
  const auto u = testsupport::random_divfree(cube(12), 14);
  double prev = energy(u);
  for (double t : {0.05, 0.1, 0.2, 0.4}) {
    const auto U = semigroup_apply(u, {20.0, t});
    CHECK(energy(U) <= prev);
    prev = energy(U);
    CHECK(hermitian_defect(U) <= 1e-14);
  }
}

TEST_CASE("in-place application agrees with out-of-place") {
  const auto u = testsupport::random_divfree(cube(8), 2);
  const Propagator prop(u.lattice, 2.0, 0.1);
  auto w = u;
  prop.apply(w, w);
  CHECK(relative_difference(w, prop.apply(u)) == 0.0);
}

TEST_CASE("semigroup input validation") {
  const auto u = testsupport::random_divfree(cube(8), 2);
  CHECK_THROWS_AS(semigroup_apply(u, {1.0, -0.1}), ValidationError);
  RandomFieldOptions opt;
  opt.divergence_free = false;
  CHECK_THROWS_AS(semigroup_apply(random_field(cube(8), opt), {1.0, 0.1}), ValidationError);
}

TEST_CASE("linear series evaluates requested norms") {
  const auto u = testsupport::random_divfree(cube(8), 2);
  const auto ev = linear_solution_series(u, 1.0, {0.0, 0.5, 1.0}, {lp::BesovParams(0, 1, 1)});
  REQUIRE(ev.snapshots.size() == 3);
  REQUIRE(ev.norms.size() == 3);
  CHECK(ev.norms[0][0].aggregate == doctest::Approx(lp::lp_norm(u, 1.0)).epsilon(1e-13));
  CHECK(ev.norms[2][0].aggregate < ev.norms[1][0].aggregate);
}

TEST_CASE("pointwise bounds on the large datum") {
  const double eps = 1.0 / 8.0;
  const auto d = data::build_u0(eps, data::datum_lattice(eps, 48, 32, 1.0 / 8.0));
  for (double omega : {1.0, 10.0})
    for (double t : {0.1, 1.0, 10.0}) {
      const auto rep = pointwise_bound_check(d.u0, omega, t);
      CHECK(rep.passed());
      for (const char* name : {"horizontal_sum_sharp", "horizontal_euclidean", "vertical", "diagonal_sum_sharp"}) {
        CHECK(rep.check(name).gating);
        CHECK(rep.check(name).max_ratio <= 1.0 + 1e-10);
      }
      // the sum-of-moduli form without the factor sqrt(2) is not a valid bound
      CHECK_FALSE(rep.check("horizontal_sum_unit").gating);
      CHECK(rep.check("horizontal_sum_unit").max_ratio <= std::sqrt(2.0) + 1e-10);
      const auto j = nlohmann::json::parse(rep.to_json());
      CHECK(j["bounds"].size() == rep.checks.size());
    }
}

TEST_CASE("pointwise bounds require a vanishing third component") {
  const auto u = testsupport::random_divfree(cube(8), 2);
  CHECK_THROWS_AS(pointwise_bound_check(u, 1.0, 0.1), ValidationError);
}
TEST_SUITE_END();
