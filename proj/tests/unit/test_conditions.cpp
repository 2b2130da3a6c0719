#include <doctest.h>

#include <cmath>
#include <json.hpp>

#include "nsc/conditions.hpp"
#include "nsc/stokes_coriolis.hpp"
#include "support.hpp"

using namespace nsc;
using testsupport::cube;

TEST_SUITE_BEGIN("conditions");

TEST_CASE("transport rewriting holds for divergence-free fields") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto U = testsupport::random_divfree(cube(16), seed);
    const auto r = cond::transport_decomposition_check(U);
    CHECK(r.divergence_free);
    CHECK(r.max_residual() <= 1e-12);
  }
}

TEST_CASE("transport residual equals the divergence term otherwise") {
  RandomFieldOptions opt;
  opt.divergence_free = false;
  opt.seed = 3;
  const auto U = random_field(cube(16), opt);
  const auto r = cond::transport_decomposition_check(U);
  CHECK_FALSE(r.divergence_free);
  for (int i = 0; i < 3; ++i) {
    CHECK(r.residual[i] > 1e-3);
    CHECK(r.residual[i] == doctest::Approx(r.predicted[i]).epsilon(1e-10));
  }
}

TEST_CASE("integrand matches a direct convolution oracle") {
  const auto lat = make_lattice({kTwoPi, 5.0, 7.0}, {8, 8, 8});
  const auto u0 = testsupport::random_divfree(lat, 31, 0.5, kInf);
  for (double t : {0.0, 0.2, 1.0}) {
    const auto s = cond::nonlinear_integrand(u0, 2.0, t);
    const auto U = semigroup_apply(u0, {2.0, t});
    const auto N = testsupport::brute_advection(U);
    const double ref =
        lp::fb_norm(lp::DyadicPartition::for_lattice(lat), N, lp::BesovParams(-1, 1, 1)).aggregate;
    CHECK(s.direct == doctest::Approx(ref).epsilon(1e-11));
    // Hoelder per block: the proof-route bound dominates the direct value
    CHECK(s.proof_route >= s.direct * (1 - 1e-12));
  }
}

TEST_CASE("quadrature converges and the tail bound certifies the truncation") {
  const auto u0 = testsupport::random_divfree(cube(16), 2, 1.0, 4.0);
  cond::ConditionParams prm;
  prm.t_max = 1.0;
  prm.rel_tol = 1e-6;
  prm.max_evaluations = 257;
  const auto a = cond::nonlinear_integral(u0, 1.0, prm);
  CHECK(a.converged);
  CHECK(a.evaluations <= prm.max_evaluations);
  CHECK(a.support_radius >= 1.0 - 1e-12);
  CHECK(a.l1_norm == doctest::Approx(lp::lp_norm(u0, 1.0)));
  prm.t_max = 3.0;
  const auto b = cond::nonlinear_integral(u0, 1.0, prm);
  CHECK(b.direct >= a.direct);
  CHECK(b.direct - a.direct <= a.tail_bound * (1 + 1e-6));
  CHECK(b.tail_bound < a.tail_bound);
}

TEST_CASE("quadrature reports an exhausted budget") {
  const auto u0 = testsupport::random_divfree(cube(16), 2, 1.0, 4.0);
  cond::ConditionParams prm;
  prm.rel_tol = 1e-14;
  prm.max_evaluations = 17;
  const auto r = cond::nonlinear_integral(u0, 1.0, prm);
  CHECK_FALSE(r.converged);
  CHECK(r.evaluations <= 17);
}

TEST_CASE("zero data gives a zero integral") {
  const SpectralVectorField z(cube(8));
  auto u = z;
  u.divergence_free = true;
  const auto r = cond::nonlinear_integral(u, 1.0, {});
  CHECK(r.direct == 0.0);
  CHECK(r.converged);
}

TEST_CASE("theorem condition is monotone in C and in the amplitude") {
  auto u0 = testsupport::random_divfree(cube(16), 4, 1.0, 3.0);
  u0 *= 0.1 / lp::lp_norm(u0, 1.0);
  cond::ConditionParams prm;
  prm.max_evaluations = 65;
  prm.rel_tol = 1e-4;
  const auto base = cond::theorem_condition(u0, 1.0, prm);
  prm.C = 2.0;
  const auto bigger_c = cond::theorem_condition(u0, 1.0, prm);
  CHECK(bigger_c.lhs > base.lhs);
  prm.C = 1.0;
  const auto bigger_u = cond::theorem_condition(2.0 * u0, 1.0, prm);
  CHECK(bigger_u.lhs > base.lhs);
  CHECK(base.lhs == doctest::Approx(base.lhs_direct));
  CHECK(base.lhs_proof_route >= base.lhs_direct);
  prm.proof_route = true;
  const auto route = cond::theorem_condition(u0, 1.0, prm);
  CHECK(route.lhs == doctest::Approx(route.lhs_proof_route));
  CHECK(route.passed == (route.lhs <= prm.delta));
  const auto j = nlohmann::json::parse(route.to_json());
  CHECK(j["kind"] == "theorem");
  CHECK(j.contains("integral"));
}

TEST_CASE("corollary condition requires support away from the origin") {
  const auto u0 = testsupport::random_divfree(cube(16, 2 * kTwoPi), 4, 0.5, 3.0);
  try {
    cond::corollary_condition(u0, {});
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("xi = (") != std::string::npos);
  }
  const auto ok = testsupport::random_divfree(cube(16), 4, 1.0, 3.0);
  const auto rep = cond::corollary_condition(ok, {});
  CHECK(rep.kind == "corollary");
  CHECK(rep.group == doctest::Approx(rep.horizontal_sum + rep.vertical_derivative + rep.third_component));
  CHECK(rep.third_component > 0.0);
}

TEST_CASE("condition parameters are validated") {
  cond::ConditionParams prm;
  prm.C = 0;
  CHECK_THROWS_AS(prm.validate(), ValidationError);
  prm = {};
  prm.delta = -1;
  CHECK_THROWS_AS(prm.validate(), ValidationError);
  prm = {};
  prm.max_evaluations = 3;
  CHECK_THROWS_AS(prm.validate(), ValidationError);
}

TEST_CASE("condition shape across a sweep") {
  std::vector<double> eps;
  for (int k = 4; k <= 9; ++k) eps.push_back(std::ldexp(1.0, -k));
  const auto sweep = data::norm_scaling_sweep(eps, {}, {}, 1);
  const auto shape = cond::condition_shape(sweep.rows, {});
  REQUIRE(shape.rows.size() == eps.size());
  CHECK(shape.kappa > 0.0);
  CHECK(shape.calibrated_spread <= 2.0);
  CHECK(shape.literal_spread >= 1.0);
  for (const auto& r : shape.rows) {
    const auto rep = cond::corollary_condition(sweep.rows[&r - shape.rows.data()], {});
    CHECK(r.lhs == doctest::Approx(rep.lhs));
  }
}
TEST_SUITE_END();
