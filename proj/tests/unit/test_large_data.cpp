#include <doctest.h>

#include <cmath>

#include "nsc/conditions.hpp"
#include "nsc/large_data.hpp"
#include "nsc/littlewood_paley.hpp"
#include "nsc/spectral.hpp"

using namespace nsc;

TEST_SUITE_BEGIN("large_data");

TEST_CASE("horizontal profile: strip and ring") {
  const auto a = data::build_profile_a(1.0 / 8.0, 1.0 / 64.0);
  CHECK(a.strip(0.0) == 1.0);
  CHECK(a.strip(1.0 / 16.0) == 1.0);
  CHECK(a.strip(-1.0 / 8.0) == 0.0);
  CHECK(a.strip(0.09) > 0.0);
  CHECK(a.strip(0.09) < 1.0);
  CHECK(a.ring(1.41) == 1.0);
  CHECK(a.ring(11.0 / 8.0) == 0.0);
  CHECK(a.ring(35.0 / 24.0) == 0.0);
  CHECK(a.ring(1.38) > 0.0);
  // on the diagonal inside the ring plateau
  const double x = 1.41 / std::sqrt(2.0);
  CHECK(a(x, x) == 1.0);
  CHECK(a(-x, -x) == 1.0);
  CHECK(a(x, -x) == 0.0);
}

TEST_CASE("vertical profile plateau") {
  const double eps = 1.0 / 16.0;
  const auto b = data::build_profile_b(eps, eps / 64);
  CHECK(b(0.75 * eps) == 1.0);
  CHECK(b(-0.75 * eps) == 1.0);
  CHECK(b(0.5 * eps) == 0.0);
  CHECK(b(eps) == 0.0);
  CHECK(b(0.0) == 0.0);
  CHECK(b(0.55 * eps) > 0.0);
  // int b = 2 * 3 eps / 8 by the symmetry of the ramps (b is even)
  CHECK(b.lp_norm(1.0) == doctest::Approx(0.75 * eps).epsilon(1e-10));
  CHECK(b.lp_norm(kInf) == 1.0);
}

TEST_CASE("profile L^p norms converge under refinement") {
  const double eps = 1.0 / 32.0;
  for (double p : {1.0, 1.5}) {
    const double coarse = data::build_profile_a(eps, eps / 16).lp_norm(p);
    const double fine = data::build_profile_a(eps, eps / 64).lp_norm(p);
    CHECK(coarse == doctest::Approx(fine).epsilon(1e-3));
  }
}

TEST_CASE("profile construction validates its inputs") {
  CHECK_THROWS_AS(data::build_profile_a(0.2, 0.001), ValidationError);
  CHECK_THROWS_AS(data::build_profile_a(0.0, 0.001), ValidationError);
  CHECK_THROWS_AS(data::build_profile_a(1.0 / 8, 1.0 / 32), ValidationError);
  CHECK_THROWS_AS(data::build_profile_b(1.0 / 8, 1.0 / 32), ValidationError);
  CHECK_NOTHROW(data::build_profile_b(1.0 / 8, 1.0 / 64));
}

TEST_CASE("amplitude and the double logarithm") {
  const double eps = 1.0 / 1024;
  const auto a = data::amplitude(eps);
  CHECK(a.loglog == doctest::Approx(std::log(std::log(1024.0))));
  CHECK(a.value == doctest::Approx(1024.0 * 1024.0 * std::sqrt(a.loglog)));
  CHECK_FALSE(a.floored);
  // moderate eps is flagged, and rejected on request
  CHECK(data::amplitude(1.0 / 8).floored);
  CHECK(data::amplitude(1.0 / 8).loglog == doctest::Approx(std::log(std::log(8.0))));
  CHECK_THROWS_AS(data::amplitude(1.0 / 8, {false}), ValidationError);
  CHECK_NOTHROW(data::amplitude(1.0 / 16, {false}));
}

TEST_CASE("sampled datum is real, divergence-free and band-limited") {
  for (double eps : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    const auto d = data::build_u0(eps, data::datum_lattice(eps, 48, 32, 1.0 / 8));
    CHECK(divergence_ratio(d.u0) <= 1e-15);
    CHECK(hermitian_defect(d.u0) == 0.0);
    CHECK(max_abs(d.u0) > 0.0);
    CHECK(d.support_min_radius >= data::support_min_radius(eps));
    CHECK(d.support_max_radius <= data::support_max_radius(eps));
    CHECK(d.support_min_radius >= 4.0 / 3.0);
    CHECK(d.support_max_radius <= 1.5);
    for (std::size_t n = 0; n < d.u0.size(); ++n) REQUIRE(d.u0.comp[2][n] == cplx(0.0));
  }
}

TEST_CASE("sampled datum lies in a single dyadic block") {
  for (double eps : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    const auto d = data::build_u0(eps, data::datum_lattice(eps));
    const auto part = lp::DyadicPartition::for_lattice(d.u0.lattice);
    const auto ns = lp::fb_norm(part, d.u0, lp::BesovParams(0, 1, 1));
    double off = 0.0;
    for (const auto& b : ns.blocks)
      if (b.j != 0) off = std::max(off, b.value);
    CHECK(off <= 1e-14 * ns.block(0));
    CHECK(ns.block(0) > 0.0);
  }
}

TEST_CASE("build_u0 rejects lattices that cannot hold the datum") {
  const double eps = 1.0 / 8;
  // vertical spacing too coarse
  CHECK_THROWS_AS(data::build_u0(eps, make_lattice({50.0, 50.0, 50.0}, {48, 48, 32})), ValidationError);
  // horizontal band too small
  CHECK_THROWS_AS(data::build_u0(eps, data::datum_lattice(eps, 32, 32, 1.0 / 8)), ValidationError);
  CHECK_THROWS_AS(data::datum_lattice(0.25), ValidationError);
}

TEST_CASE("separable and tensor quadratures agree") {
  for (double eps : {1.0 / 8, 1.0 / 64}) {
    const auto sep = data::datum_norms(eps);
    data::QuadratureOptions q;
    q.force_tensor = true;
    const auto ten = data::datum_norms(eps, q);
    CHECK(sep.single_block);
    CHECK(ten.fb_minus1 == doctest::Approx(sep.fb_minus1).epsilon(1e-6));
    CHECK(ten.horizontal_sum == doctest::Approx(sep.horizontal_sum).epsilon(1e-6));
    CHECK(ten.vertical_derivative == doctest::Approx(sep.vertical_derivative).epsilon(1e-6));
    CHECK(ten.off_block_max <= 1e-14);
    CHECK(sep.third_component == 0.0);
    // single block j = 0: the weights 2^{-j} and 2^{j} are both one
    CHECK(sep.fb_plus1 == doctest::Approx(sep.fb_minus1).epsilon(1e-14));
    CHECK(sep.l1 == doctest::Approx(sep.fb_minus1).epsilon(1e-14));
  }
}

TEST_CASE("lattice sampling cross-validates the separable norms") {
  // fine lattice: horizontal spacing 1/64, vertical eps/32
  const double eps = 1.0 / 8;
  const auto lat = make_lattice({64 * kTwoPi, 64 * kTwoPi, kTwoPi / (eps / 32)}, {288, 288, 96});
  const auto d = data::build_u0(eps, lat);
  const auto sep = data::datum_norms(eps);
  const auto part = lp::DyadicPartition::for_lattice(lat);
  const double m1 = lp::fb_norm(part, d.u0, lp::BesovParams(-1, 1, 1)).aggregate;
  CHECK(m1 == doctest::Approx(sep.fb_minus1).epsilon(0.01));
  const auto c = cond::corollary_condition(d.u0, cond::ConditionParams{});
  CHECK(c.horizontal_sum == doctest::Approx(sep.horizontal_sum).epsilon(0.01));
  CHECK(c.vertical_derivative == doctest::Approx(sep.vertical_derivative).epsilon(0.01));
}

TEST_CASE("log-log fit recovers a power law") {
  std::vector<double> x, y;
  for (int k = 1; k <= 8; ++k) {
    x.push_back(std::ldexp(1.0, -k));
    y.push_back(3.0 * std::pow(x.back(), 0.4));
  }
  const auto f = data::fit_log_log("q", x, y);
  CHECK(f.slope == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK_THROWS_AS(data::fit_log_log("q", {1.0}, {1.0}), ValidationError);
}

TEST_CASE("norm scaling sweep exponents") {
  std::vector<double> eps;
  for (int k = 4; k <= 10; ++k) eps.push_back(std::ldexp(1.0, -k));
  const auto t = data::norm_scaling_sweep(eps, {}, {}, 1);
  REQUIRE(t.rows.size() == eps.size());
  CHECK(std::abs(t.fit("fb_minus1_over_sqrt_loglog").slope) <= 0.05);
  CHECK(t.fit("condition_group_over_sqrt_loglog").slope == doctest::Approx(1.0 / 3).epsilon(0.15));
  CHECK_THROWS_AS(t.fit("nothing"), ValidationError);
  CHECK(t.rows_csv().rfind("eps,", 0) == 0);
  CHECK(t.fits_csv().rfind("quantity,slope", 0) == 0);
}

TEST_CASE("sweep is independent of the worker count") {
  const std::vector<double> eps{1.0 / 16, 1.0 / 32, 1.0 / 64};
  const auto a = data::norm_scaling_sweep(eps, {}, {}, 1);
  const auto b = data::norm_scaling_sweep(eps, {}, {}, 3);
  CHECK(a.rows_csv() == b.rows_csv());
  CHECK_THROWS_AS(data::norm_scaling_sweep({1.0 / 32, 1.0 / 16}), ValidationError);
}
TEST_SUITE_END();
