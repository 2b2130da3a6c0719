#include "nsc/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "nsc/parallel.hpp"
#include "nsc/spectral.hpp"
#include "nsc/stokes_coriolis.hpp"

namespace nsc::cond {

double TransportResidual::max_residual() const {
  return *std::max_element(residual.begin(), residual.end());
}

TransportResidual transport_decomposition_check(const SpectralVectorField& U) {
  require(U.real_valued, "transport check: field is not flagged real-valued");
  const auto& lat = U.lattice;
  const std::size_t n = lat.size();
  SpectralTransformer tr(lat);

  // u_i and d_j u_i on the grid.
  std::array<RealArray, 12> f;
  for (auto& a : f) a.resize(n);
  struct Src {
    int comp, axis;
  };
  std::array<Src, 12> src{};
  for (int i = 0; i < 3; ++i) src[i] = {i, -1};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) src[3 + 3 * i + j] = {i, j};
  for (int p = 0; p < 12; p += 2) {
    tr.to_physical_pair(U.comp[src[p].comp].data(),
                        src[p].axis < 0 ? nullptr : lat.xi(src[p].axis).data(),
                        U.comp[src[p + 1].comp].data(),
                        src[p + 1].axis < 0 ? nullptr : lat.xi(src[p + 1].axis).data(),
                        f[p].data(), f[p + 1].data());
  }
  auto u = [&](int i, std::size_t k) { return f[i][k]; };
  auto d = [&](int i, int j, std::size_t k) { return f[3 + 3 * i + j][k]; };

  std::array<double, 3> diff{}, scale{}, pred{};
  for (std::size_t k = 0; k < n; ++k) {
    const double u1 = u(0, k), u2 = u(1, k), u3 = u(2, k);
    const double div = d(0, 0, k) + d(1, 1, k) + d(2, 2, k);
    std::array<double, 3> lhs, rhs;
    for (int i = 0; i < 3; ++i) lhs[i] = u1 * d(i, 0, k) + u2 * d(i, 1, k) + u3 * d(i, 2, k);
    rhs[0] = (u1 + u2) * d(0, 0, k) + u2 * (d(0, 1, k) + d(1, 1, k)) + u2 * d(2, 2, k) +
             u3 * d(0, 2, k);
    rhs[1] = (u1 + u2) * d(1, 1, k) + u1 * (d(0, 0, k) + d(1, 0, k)) + u1 * d(2, 2, k) +
             u3 * d(1, 2, k);
    rhs[2] = u1 * d(2, 0, k) + u2 * d(2, 1, k) - u3 * (d(0, 0, k) + d(1, 1, k));
    const std::array<double, 3> p{u2 * div, u1 * div, -u3 * div};
    for (int i = 0; i < 3; ++i) {
      diff[i] = std::max(diff[i], std::abs(rhs[i] - lhs[i]));
      scale[i] = std::max({scale[i], std::abs(lhs[i]), std::abs(rhs[i])});
      pred[i] = std::max(pred[i], std::abs(p[i]));
    }
  }
  TransportResidual out;
  for (int i = 0; i < 3; ++i) {
    out.residual[i] = scale[i] > 0.0 ? diff[i] / scale[i] : 0.0;
    out.predicted[i] = scale[i] > 0.0 ? pred[i] / scale[i] : 0.0;
  }
  out.divergence_ratio = divergence_ratio(U);
  out.divergence_free = out.divergence_ratio <= 1e-10;
  return out;
}

void ConditionParams::validate() const {
  require(C > 0.0, "condition parameter C must be positive");
  require(delta > 0.0, "condition parameter delta must be positive");
  require(t_max > 0.0, "condition horizon t_max must be positive");
  require(rel_tol > 0.0, "quadrature tolerance must be positive");
  require(max_evaluations >= 9, "quadrature budget must allow at least 9 evaluations");
}

namespace {

// Evaluates both integrand routes at arbitrary times; one instance per thread.
class Integrand {
 public:
  Integrand(const SpectralVectorField& u0, double omega)
      : u0_(u0),
        omega_(omega),
        part_(lp::DyadicPartition::for_lattice(u0.lattice)),
        eval_(u0.lattice),
        U_(u0.lattice),
        N_(u0.lattice),
        support_(part_.count(), 0.0) {
    const auto xi2 = u0.lattice.xi_squared();
    for (double x2 : xi2) {
      if (x2 <= 0.0) continue;
      const lp::ActiveBlocks b = lp::active_blocks(std::sqrt(x2));
      for (int i = 0; i < b.count; ++i)
        if (part_.contains(b.j[i])) support_[b.j[i] - part_.j_min()] += 1.0;
    }
    for (double& s : support_) s = std::cbrt(s * u0.lattice.cell_volume());
  }

  IntegralSample operator()(double t) {
    Propagator(u0_.lattice, omega_, t).apply(u0_, U_);
    eval_.evaluate(U_, N_);
    const auto mag = lp::magnitudes(N_);
    const auto direct = lp::fb_norm(part_, N_.lattice, mag, lp::BesovParams(-1.0, 1.0, 1.0));
    const auto l32 = lp::fb_norm(part_, N_.lattice, mag, lp::BesovParams(-1.0, 1.5, 1.0));
    double route = 0.0;
    for (std::size_t i = 0; i < l32.blocks.size(); ++i) route += l32.blocks[i].value * support_[i];
    truncated = std::max(truncated, direct.truncated_mass);
    return {t, direct.aggregate, route};
  }

  double truncated = 0.0;

 private:
  const SpectralVectorField& u0_;
  double omega_;
  lp::DyadicPartition part_;
  NonlinearEvaluator eval_;
  SpectralVectorField U_;
  SpectralVectorField N_;
  std::vector<double> support_;  // (count_j * cell)^{1/3}
};

struct Support {
  double min_radius = kInf;
  bool retained = true;
  bool origin = false;
  std::array<int, 3> extent{};  // largest |k_a| with nonzero coefficient
};

Support analyze_support(const SpectralVectorField& u) {
  Support s;
  const auto& lat = u.lattice;
  const auto xi2 = lat.xi_squared();
  for (std::size_t k = 0; k < lat.size(); ++k) {
    if (u.comp[0][k] == cplx{} && u.comp[1][k] == cplx{} && u.comp[2][k] == cplx{}) continue;
    if (xi2[k] <= 0.0) {
      s.origin = true;
      continue;
    }
    s.min_radius = std::min(s.min_radius, std::sqrt(xi2[k]));
    if (!lat.retained(k)) s.retained = false;
    const auto kk = lat.wavenumbers(k);
    for (int a = 0; a < 3; ++a) s.extent[a] = std::max(s.extent[a], std::abs(kk[a]));
  }
  return s;
}

}  // namespace

IntegralSample nonlinear_integrand(const SpectralVectorField& u0, double omega, double t) {
  Integrand f(u0, omega);
  return f(t);
}

NonlinearIntegral nonlinear_integral(const SpectralVectorField& u0, double omega,
                                     const ConditionParams& prm) {
  prm.validate();
  require(u0.real_valued, "nonlinear integral: field is not flagged real-valued");
  require(u0.divergence_free || divergence_ratio(u0) <= 1e-10,
          "nonlinear integral: initial field is not divergence-free");
  const Support sup = analyze_support(u0);
  NonlinearIntegral out;
  out.l1_norm = lp::lp_norm(u0, 1.0);
  if (out.l1_norm == 0.0) {
    out.converged = true;
    out.samples = {{0.0, 0.0, 0.0}, {prm.t_max, 0.0, 0.0}};
    return out;
  }
  require(!sup.origin && sup.retained,
          "nonlinear integral: initial field is not band-limited inside the retained band; "
          "no certified tail available");
  out.support_radius = sup.min_radius;
  for (int a = 0; a < 3; ++a)
    if (2 * sup.extent[a] > u0.lattice.dealias_cutoff(a)) out.alias_free = false;

  // Romberg integration over uniform doublings of [0, t_max].
  const unsigned workers = worker_count(prm.workers);
  std::vector<IntegralSample> samples;  // indexed by node on the finest grid so far
  double truncated = 0.0;
  auto evaluate = [&](const std::vector<double>& times) {
    std::vector<IntegralSample> res(times.size());
    const std::size_t chunks = std::min<std::size_t>(workers, times.size());
    std::vector<double> trunc(chunks, 0.0);
    parallel_for(chunks, workers, [&](std::size_t c) {
      Integrand f(u0, omega);
      for (std::size_t i = c; i < times.size(); i += chunks) res[i] = f(times[i]);
      trunc[c] = f.truncated;
    });
    for (double t : trunc) truncated = std::max(truncated, t);
    return res;
  };

  int intervals = 8;
  {
    std::vector<double> t(intervals + 1);
    for (int i = 0; i <= intervals; ++i) t[i] = prm.t_max * i / intervals;
    samples = evaluate(t);
  }
  out.evaluations = intervals + 1;
  auto trapezoid = [&](auto get) {
    double s = 0.5 * (get(samples.front()) + get(samples.back()));
    for (int i = 1; i < intervals; ++i) s += get(samples[i]);
    return s * prm.t_max / intervals;
  };
  auto get_direct = [](const IntegralSample& s) { return s.direct; };
  auto get_route = [](const IntegralSample& s) { return s.proof_route; };

  std::vector<std::vector<double>> rd{{trapezoid(get_direct)}}, rr{{trapezoid(get_route)}};
  while (true) {
    if (out.evaluations + intervals > prm.max_evaluations) break;
    std::vector<double> t(intervals);
    for (int i = 0; i < intervals; ++i) t[i] = prm.t_max * (2 * i + 1) / (2.0 * intervals);
    const auto fresh = evaluate(t);
    std::vector<IntegralSample> merged(2 * intervals + 1);
    for (int i = 0; i <= intervals; ++i) merged[2 * i] = samples[i];
    for (int i = 0; i < intervals; ++i) merged[2 * i + 1] = fresh[i];
    samples.swap(merged);
    out.evaluations += intervals;
    intervals *= 2;

    auto extend = [&](std::vector<std::vector<double>>& R, double trap) {
      std::vector<double> row{trap};
      double f = 1.0;
      for (std::size_t m = 1; m <= R.back().size(); ++m) {
        f *= 4.0;
        row.push_back(row[m - 1] + (row[m - 1] - R.back()[m - 1]) / (f - 1.0));
      }
      R.push_back(std::move(row));
    };
    extend(rd, trapezoid(get_direct));
    extend(rr, trapezoid(get_route));
    const double cur = rd.back().back();
    const double prev = rd[rd.size() - 2].back();
    out.error_estimate = std::abs(cur - prev);
    if (out.error_estimate <= prm.rel_tol * std::abs(cur)) {
      out.converged = true;
      break;
    }
  }
  out.direct = std::max(0.0, rd.back().back());
  out.proof_route = std::max(0.0, rr.back().back());
  out.samples = std::move(samples);
  out.truncated_mass = truncated;

  // |U_hat(t)| <= e^{-rho0^2 t} |u0_hat| and ||U . grad U||_{FB^{-1}_{1,1}}
  // <= (8/3) (2 pi)^{-3} ||U_hat||_{L^1}^2.
  const double r2 = out.support_radius * out.support_radius;
  out.tail_bound = (8.0 / 3.0) * std::pow(kTwoPi, -3.0) * out.l1_norm * out.l1_norm / (2.0 * r2) *
                   std::exp(-2.0 * r2 * prm.t_max);
  return out;
}

namespace {

nlohmann::ordered_json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

double fb_minus1(const SpectralVectorField& u) {
  const auto part = lp::DyadicPartition::for_lattice(u.lattice);
  return lp::fb_norm(part, u, lp::BesovParams(-1.0, 1.0, 1.0)).aggregate;
}

}  // namespace

ConditionReport theorem_condition(const SpectralVectorField& u0, double omega,
                                  const ConditionParams& prm) {
  prm.validate();
  ConditionReport rep;
  rep.kind = "theorem";
  rep.C = prm.C;
  rep.delta = prm.delta;
  rep.omega = omega;
  rep.proof_route = prm.proof_route;
  rep.u0_fb_minus1 = fb_minus1(u0);
  rep.exp_factor = std::exp(prm.C * rep.u0_fb_minus1 * rep.u0_fb_minus1);
  rep.integral = nonlinear_integral(u0, omega, prm);
  rep.lhs_direct = (rep.integral.direct + rep.integral.tail_bound) * rep.exp_factor;
  rep.lhs_proof_route = (rep.integral.proof_route + rep.integral.tail_bound) * rep.exp_factor;
  rep.lhs = prm.proof_route ? rep.lhs_proof_route : rep.lhs_direct;
  rep.passed = rep.lhs <= prm.delta;
  return rep;
}

ConditionReport corollary_condition(const SpectralVectorField& u0, const ConditionParams& prm) {
  prm.validate();
  const auto& lat = u0.lattice;
  const auto xi2 = lat.xi_squared();
  for (std::size_t k = 0; k < lat.size(); ++k) {
    const bool nonzero =
        u0.comp[0][k] != cplx{} || u0.comp[1][k] != cplx{} || u0.comp[2][k] != cplx{};
    if (nonzero && xi2[k] < 1.0) {
      const auto xi = lat.frequency(k);
      std::ostringstream os;
      os << "corollary support condition violated: nonzero coefficient at xi = (" << xi[0] << ", "
         << xi[1] << ", " << xi[2] << "), |xi| = " << std::sqrt(xi2[k]) << " < 1";
      throw ValidationError(os.str());
    }
  }
  const auto part = lp::DyadicPartition::for_lattice(lat);
  const lp::BesovParams p1(1.0, 1.5, 1.0);

  SpectralScalarField hsum(lat), third(lat);
  SpectralVectorField d3(lat);
  const auto x3 = lat.xi(2);
  for (std::size_t k = 0; k < lat.size(); ++k) {
    hsum.values[k] = u0.comp[0][k] + u0.comp[1][k];
    third.values[k] = u0.comp[2][k];
    for (int c = 0; c < 3; ++c) d3.comp[c][k] = cplx{0.0, x3[k]} * u0.comp[c][k];
  }

  ConditionReport rep;
  rep.kind = "corollary";
  rep.C = prm.C;
  rep.delta = prm.delta;
  rep.u0_fb_minus1 = fb_minus1(u0);
  rep.horizontal_sum = lp::fb_norm(part, hsum, p1).aggregate;
  rep.vertical_derivative = lp::fb_norm(part, d3, p1).aggregate;
  rep.third_component = lp::fb_norm(part, third, p1).aggregate;
  rep.group = rep.horizontal_sum + rep.vertical_derivative + rep.third_component;
  rep.exp_factor = std::exp(prm.C * rep.u0_fb_minus1 * rep.u0_fb_minus1);
  rep.lhs = rep.u0_fb_minus1 * rep.group * rep.exp_factor;
  rep.passed = rep.lhs <= prm.delta;
  return rep;
}

ConditionReport corollary_condition(const data::DatumNorms& n, const ConditionParams& prm) {
  prm.validate();
  ConditionReport rep;
  rep.kind = "corollary";
  rep.C = prm.C;
  rep.delta = prm.delta;
  rep.u0_fb_minus1 = n.fb_minus1;
  rep.horizontal_sum = n.horizontal_sum;
  rep.vertical_derivative = n.vertical_derivative;
  rep.third_component = n.third_component;
  rep.group = n.group();
  rep.exp_factor = std::exp(prm.C * n.fb_minus1 * n.fb_minus1);
  rep.lhs = n.fb_minus1 * rep.group * rep.exp_factor;
  rep.passed = rep.lhs <= prm.delta;
  return rep;
}

std::string ConditionReport::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["C"] = C;
  j["delta"] = delta;
  j["u0_fb_minus1"] = finite_or_string(u0_fb_minus1);
  j["exp_factor"] = finite_or_string(exp_factor);
  if (kind == "theorem") {
    j["omega"] = omega;
    j["proof_route"] = proof_route;
    nlohmann::ordered_json in;
    in["direct"] = integral.direct;
    in["proof_route"] = integral.proof_route;
    in["tail_bound"] = integral.tail_bound;
    in["support_radius"] = integral.support_radius;
    in["l1_norm"] = integral.l1_norm;
    in["error_estimate"] = integral.error_estimate;
    in["evaluations"] = integral.evaluations;
    in["converged"] = integral.converged;
    in["alias_free"] = integral.alias_free;
    in["truncated_mass"] = integral.truncated_mass;
    j["integral"] = in;
    j["lhs_direct"] = finite_or_string(lhs_direct);
    j["lhs_proof_route"] = finite_or_string(lhs_proof_route);
  } else {
    j["horizontal_sum"] = horizontal_sum;
    j["vertical_derivative"] = vertical_derivative;
    j["third_component"] = third_component;
    j["group"] = group;
  }
  j["lhs"] = finite_or_string(lhs);
  j["passed"] = passed;
  return j.dump(2);
}

ShapeReport condition_shape(const std::vector<data::DatumNorms>& sweep, const ConditionParams& prm) {
  prm.validate();
  require(!sweep.empty(), "condition shape: empty sweep");
  ShapeReport rep;
  rep.C = prm.C;
  for (const auto& n : sweep) rep.kappa += n.fb_minus1 * n.fb_minus1 / n.amp.loglog;
  rep.kappa /= static_cast<double>(sweep.size());
  double lo_lit = kInf, hi_lit = 0.0, lo_cal = kInf, hi_cal = 0.0;
  for (const auto& n : sweep) {
    const double L = n.amp.loglog;
    const double lhs = corollary_condition(n, prm).lhs;
    const double base = prm.C * std::cbrt(n.eps) * L;
    ShapeRow row{n.eps, lhs, lhs / (base * std::exp(prm.C * L)),
                 lhs / (base * std::exp(rep.kappa * prm.C * L))};
    lo_lit = std::min(lo_lit, row.literal_ratio);
    hi_lit = std::max(hi_lit, row.literal_ratio);
    lo_cal = std::min(lo_cal, row.calibrated_ratio);
    hi_cal = std::max(hi_cal, row.calibrated_ratio);
    rep.rows.push_back(row);
  }
  rep.literal_spread = hi_lit / lo_lit;
  rep.calibrated_spread = hi_cal / lo_cal;
  return rep;
}

std::string ShapeReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "eps,lhs,literal_ratio,calibrated_ratio\n";
  for (const auto& r : rows)
    os << r.eps << ',' << r.lhs << ',' << r.literal_ratio << ',' << r.calibrated_ratio << '\n';
  return os.str();
}

}  // namespace nsc::cond
