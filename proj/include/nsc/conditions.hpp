#pragma once

#include <array>
#include <string>
#include <vector>

#include "nsc/field.hpp"
#include "nsc/large_data.hpp"
#include "nsc/littlewood_paley.hpp"

namespace nsc::cond {

/// Pointwise check of the div-free rewriting of U . grad U used to bound the
/// nonlinear integral. Both sides are evaluated on the physical grid; their
/// difference is (U2, U1, -U3) div U.
struct TransportResidual {
  std::array<double, 3> residual{};  ///< max |rhs_i - lhs_i| / max(|lhs_i|, |rhs_i|)
  std::array<double, 3> predicted{}; ///< same ratio for (U2, U1, -U3) div U
  double divergence_ratio = 0.0;     ///< spectral xi . U_hat ratio
  bool divergence_free = true;       ///< divergence_ratio <= 1e-10

  double max_residual() const;
};

TransportResidual transport_decomposition_check(const SpectralVectorField& U);

struct ConditionParams {
  double C = 1.0;
  double delta = 0.01;
  double t_max = 8.0;
  double rel_tol = 1e-6;
  int max_evaluations = 513;
  /// Feed the proof-route upper bound into the left-hand side instead of the
  /// direct value.
  bool proof_route = false;
  int workers = 1;

  void validate() const;
};

struct IntegralSample {
  double t;
  double direct;      ///< ||U . grad U||_{FB^{-1}_{1,1}}
  double proof_route; ///< sum_j 2^{-j} ||f_j||_{L^{3/2}} |supp_j|^{1/3}
};

struct NonlinearIntegral {
  double direct = 0.0;
  double proof_route = 0.0;
  double tail_bound = 0.0;    ///< certified bound on the integral over (t_max, inf)
  double support_radius = 0.0; ///< min |xi| over supp u0_hat
  double l1_norm = 0.0;        ///< ||u0_hat||_{L^1}
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = false;
  bool alias_free = true;      ///< product support inside the retained band
  double truncated_mass = 0.0; ///< largest per-node mass outside the partition window
  std::vector<IntegralSample> samples;
};

/// integral over [0, t_max] of ||U . grad U||_{FB^{-1}_{1,1}} with U the exact
/// linear solution from u0, plus the certified tail.
NonlinearIntegral nonlinear_integral(const SpectralVectorField& u0, double omega,
                                     const ConditionParams& prm);

/// Integrand at a single time (both routes), for tests and diagnostics.
IntegralSample nonlinear_integrand(const SpectralVectorField& u0, double omega, double t);

struct ConditionReport {
  std::string kind;  ///< "theorem" or "corollary"
  double C = 0.0;
  double delta = 0.0;
  double omega = 0.0;
  double u0_fb_minus1 = 0.0;
  double exp_factor = 0.0;
  double lhs = 0.0;
  bool passed = false;

  // theorem
  NonlinearIntegral integral;
  double lhs_direct = 0.0;
  double lhs_proof_route = 0.0;
  bool proof_route = false;

  // corollary
  double horizontal_sum = 0.0;       ///< ||u0^1 + u0^2||_{FB^1_{3/2,1}}
  double vertical_derivative = 0.0;  ///< ||d3 u0||_{FB^1_{3/2,1}}
  double third_component = 0.0;      ///< ||u0^3||_{FB^1_{3/2,1}}
  double group = 0.0;

  std::string to_json() const;
};

ConditionReport theorem_condition(const SpectralVectorField& u0, double omega,
                                  const ConditionParams& prm);
/// Requires supp u0_hat inside {|xi| >= 1}.
ConditionReport corollary_condition(const SpectralVectorField& u0, const ConditionParams& prm);
/// Same assembly from separable-quadrature norms of the large datum.
ConditionReport corollary_condition(const data::DatumNorms& norms, const ConditionParams& prm);

/// Comparison of the corollary left-hand side across a sweep with the model
/// C eps^{1/3} L exp(k C L), L = loglog(1/eps).
struct ShapeRow {
  double eps;
  double lhs;
  double literal_ratio;     ///< lhs / (C eps^{1/3} L exp(C L))
  double calibrated_ratio;  ///< lhs / (C eps^{1/3} L exp(kappa C L))
};

struct ShapeReport {
  double C = 0.0;
  double kappa = 0.0;  ///< mean of ||u0||^2_{FB^{-1}_{1,1}} / L over the sweep
  std::vector<ShapeRow> rows;
  double literal_spread = 0.0;     ///< max / min of literal ratios
  double calibrated_spread = 0.0;

  std::string to_csv() const;
};

ShapeReport condition_shape(const std::vector<data::DatumNorms>& sweep, const ConditionParams& prm);

}  // namespace nsc::cond
