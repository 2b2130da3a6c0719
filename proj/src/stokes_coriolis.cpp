#include "nsc/stokes_coriolis.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "nsc/kernels/kernels.hpp"
#include "nsc/spectral.hpp"

namespace nsc {

Propagator::Propagator(const FrequencyLattice& lattice, double omega, double t)
    : lattice_(lattice), omega_(omega), t_(t), cd_(lattice.size()), sd_(lattice.size()) {
  require(t >= 0.0, "semigroup: negative time t = " + std::to_string(t));
  require(std::isfinite(omega), "semigroup: non-finite Coriolis parameter");
  const auto xi2 = lattice.xi_squared();
  const auto x3 = lattice.xi(2);
  for (std::size_t k = 0; k < lattice.size(); ++k) {
    if (xi2[k] <= 0.0) {
      cd_[k] = 0.0;
      sd_[k] = 0.0;
      continue;
    }
    const double r = std::sqrt(xi2[k]);
    const double decay = std::exp(-t * xi2[k]);
    const double theta = omega * t * x3[k] / r;
    cd_[k] = decay * std::cos(theta);
    sd_[k] = decay * std::sin(theta) / r;
  }
}

void Propagator::apply(const SpectralVectorField& f, SpectralVectorField& out) const {
  require(f.lattice == lattice_ && out.lattice == lattice_, "semigroup: lattice mismatch");
  const double* xi[3] = {lattice_.xi(0).data(), lattice_.xi(1).data(), lattice_.xi(2).data()};
  if (&f == &out) {
    SpectralVectorField tmp = f;
    apply(tmp, out);
    return;
  }
  const cplx* in[3] = {f.comp[0].data(), f.comp[1].data(), f.comp[2].data()};
  cplx* dst[3] = {out.comp[0].data(), out.comp[1].data(), out.comp[2].data()};
  kernels::active().rotate_decay(lattice_.size(), xi, cd_.data(), sd_.data(), in, dst);
  out.real_valued = f.real_valued;
  out.divergence_free = f.divergence_free;
}

SpectralVectorField Propagator::apply(const SpectralVectorField& f) const {
  SpectralVectorField out(f.lattice);
  apply(f, out);
  return out;
}

SpectralVectorField semigroup_apply(const SpectralVectorField& u0, const SemigroupParams& prm) {
  require(prm.t >= 0.0, "semigroup: negative time t = " + std::to_string(prm.t));
  require(u0.divergence_free || divergence_ratio(u0) <= 1e-10,
          "semigroup: initial field is not divergence-free");
  const Propagator prop(u0.lattice, prm.omega, prm.t);
  SpectralVectorField out = prop.apply(u0);
  out.divergence_free = true;
  return out;
}

LinearEvolution linear_solution_series(const SpectralVectorField& u0, double omega,
                                       const std::vector<double>& times,
                                       const std::vector<lp::BesovParams>& norms) {
  require(!times.empty(), "linear evolution: empty time list");
  require(times.front() == 0.0, "linear evolution: times must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    require(times[i] > times[i - 1], "linear evolution: times not sorted");
  LinearEvolution ev;
  ev.omega = omega;
  ev.times = times;
  const auto part = lp::DyadicPartition::for_lattice(u0.lattice);
  for (double t : times) {
    ev.snapshots.push_back(semigroup_apply(u0, {omega, t}));
    if (!norms.empty()) {
      std::vector<lp::NormSeries> row;
      for (const auto& prm : norms) row.push_back(lp::fb_norm(part, ev.snapshots.back(), prm));
      ev.norms.push_back(std::move(row));
    }
  }
  return ev;
}

bool BoundReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const BoundCheck& c) { return !c.gating || c.passed; });
}

const BoundCheck& BoundReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw ValidationError("bound report: no check named " + name);
}

std::string BoundReport::to_json() const {
  nlohmann::ordered_json j;
  j["omega"] = omega;
  j["t"] = t;
  j["tolerance"] = tolerance;
  j["passed"] = passed();
  auto& arr = j["bounds"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["convention"] = c.convention;
    e["gating"] = c.gating;
    e["max_ratio"] = std::isfinite(c.max_ratio) ? nlohmann::ordered_json(c.max_ratio)
                                                 : nlohmann::ordered_json("inf");
    e["argmax_xi"] = c.argmax_xi;
    e["violations"] = c.violations;
    e["passed"] = c.passed;
    arr.push_back(e);
  }
  return j.dump(2);
}

namespace {

struct RatioAccumulator {
  BoundCheck& check;
  double tolerance;

  void add(double lhs, double rhs, double scale, const std::array<double, 3>& xi) {
    // Modes where both sides vanish to roundoff carry no information.
    if (lhs <= 1e-15 * scale) return;
    const double ratio = rhs > 0.0 ? lhs / rhs : kInf;
    if (ratio > check.max_ratio) {
      check.max_ratio = ratio;
      check.argmax_xi = xi;
    }
    if (ratio > tolerance) {
      ++check.violations;
      check.passed = false;
    }
  }
};

}  // namespace

BoundReport pointwise_bound_check(const SpectralVectorField& u0, double omega, double t,
                                  double tolerance) {
  require(t >= 0.0, "bound check: negative time");
  double third = 0.0;
  for (const auto& v : u0.comp[2]) third = std::max(third, std::abs(v));
  require(third == 0.0, "bound check: third component of the initial field is nonzero");

  const SpectralVectorField U = semigroup_apply(u0, {omega, t});
  const double w = std::abs(omega);
  const auto& lat = u0.lattice;
  const auto xi2 = lat.xi_squared();
  const auto x1 = lat.xi(0), x2 = lat.xi(1), x3 = lat.xi(2);
  const double scale = max_abs(u0);

  BoundReport rep;
  rep.omega = omega;
  rep.t = t;
  rep.tolerance = tolerance;
  rep.checks = {
      {"horizontal_sum_unit", "|U1|+|U2| <= e |u0| (component sum vs Euclidean)", false},
      {"horizontal_sum_sharp", "|U1|+|U2| <= sqrt(2) e |u0|", true},
      {"horizontal_euclidean", "sqrt(|U1|^2+|U2|^2) <= e |u0|", true},
      {"vertical", "|U3| <= |omega| t e (|xi3|/|xi|) |u0_h| + e |u0_3|", true},
      {"diagonal_sum_t_prefactor", "|U1+U2| <= t e |u0_1+u0_2| + |omega| t e (|xi3|/|xi|) |u0|", false},
      {"diagonal_sum_sharp", "|U1+U2| <= e |u0_1+u0_2| + |omega| t e (|xi3|/|xi|) |u0|", true},
  };
  RatioAccumulator acc[6] = {{rep.checks[0], tolerance}, {rep.checks[1], tolerance},
                             {rep.checks[2], tolerance}, {rep.checks[3], tolerance},
                             {rep.checks[4], tolerance}, {rep.checks[5], tolerance}};

  for (std::size_t k = 0; k < lat.size(); ++k) {
    if (xi2[k] <= 0.0) continue;
    const cplx a1 = u0.comp[0][k], a2 = u0.comp[1][k], a3 = u0.comp[2][k];
    const double m0 = std::sqrt(std::norm(a1) + std::norm(a2) + std::norm(a3));
    if (m0 == 0.0) continue;
    const double mh = std::sqrt(std::norm(a1) + std::norm(a2));
    const double e = std::exp(-t * xi2[k]);
    const double n3 = std::abs(x3[k]) / std::sqrt(xi2[k]);
    const std::array<double, 3> xi{x1[k], x2[k], x3[k]};
    const double u1 = std::abs(U.comp[0][k]), u2 = std::abs(U.comp[1][k]);
    const double u3 = std::abs(U.comp[2][k]);
    const double diag = std::abs(U.comp[0][k] + U.comp[1][k]);
    const double diag0 = std::abs(a1 + a2);
    const double rot = w * t * e * n3 * m0;

    acc[0].add(u1 + u2, e * m0, scale, xi);
    acc[1].add(u1 + u2, std::sqrt(2.0) * e * m0, scale, xi);
    acc[2].add(std::hypot(u1, u2), e * m0, scale, xi);
    acc[3].add(u3, w * t * e * n3 * mh + e * std::abs(a3), scale, xi);
    acc[4].add(diag, t * e * diag0 + rot, scale, xi);
    acc[5].add(diag, e * diag0 + rot, scale, xi);
  }
  return rep;
}

}  // namespace nsc
