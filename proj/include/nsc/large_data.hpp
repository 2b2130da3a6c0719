#pragma once

#include <string>
#include <vector>

#include "nsc/field.hpp"
#include "nsc/littlewood_paley.hpp"

namespace nsc::data {

/// Largest admissible shape parameter.
inline constexpr double kEpsMax = 1.0 / 8.0;

// Horizontal ring of the 2D profile, in |(xi1, xi2)|.
inline constexpr double kRingOuterLo = 66.0 / 48.0;  // 11/8
inline constexpr double kRingInnerLo = 67.0 / 48.0;
inline constexpr double kRingInnerHi = 69.0 / 48.0;
inline constexpr double kRingOuterHi = 70.0 / 48.0;  // 35/24

/// Horizontal profile: product of a strip in |xi1 - xi2| (1 below eps/2,
/// 0 above eps) and a ring in |xi_h| (1 on [67/48, 69/48], 0 outside
/// [11/8, 35/24]). Even in xi_h, values in [0, 1].
struct ProfileA {
  double eps;
  double spacing;  ///< quadrature spacing used by lp_norm

  double strip(double diff) const;  ///< factor in |xi1 - xi2|
  double ring(double radius) const;
  double operator()(double xi1, double xi2) const;
  /// Discrete L^p norm on a rotated midpoint grid of the given spacing.
  double lp_norm(double p) const;
};

/// Vertical profile: 1 on 5eps/8 < |xi3| < 7eps/8, 0 outside eps/2 < |xi3| < eps.
struct ProfileB {
  double eps;
  double spacing;

  double operator()(double xi3) const;
  double lp_norm(double p) const;
};

/// Validates eps in (0, 1/8] and a spacing fine enough to separate the eps/2
/// and eps shells (spacing <= eps/8).
ProfileA build_profile_a(double eps, double spacing);
ProfileB build_profile_b(double eps, double spacing);

struct AmplitudeOptions {
  /// For eps >= e^{-e} the double logarithm is replaced by max(loglog, 0.1).
  /// When false such eps are rejected.
  bool floor_loglog = true;
};

struct Amplitude {
  double value;    ///< eps^{-2} sqrt(L)
  double loglog;   ///< L actually used
  bool floored;    ///< eps >= e^{-e}: outside the asymptotic regime, flagged
};

/// log(log(1/eps)), natural logarithms.
double loglog(double eps);
Amplitude amplitude(double eps, const AmplitudeOptions& opt = {});

struct LargeDatum {
  double eps;
  Amplitude amp;
  SpectralVectorField u0;
  double support_min_radius;  ///< over nonzero lattice coefficients
  double support_max_radius;
};

/// Exact continuum support radii of the datum: [11/8, sqrt((35/24)^2 + eps^2)].
double support_min_radius(double eps);
double support_max_radius(double eps);

/// Samples the datum on a lattice. Requires dxi3 <= eps/8 and the support
/// inside the 2/3-retained band on every axis.
LargeDatum build_u0(double eps, const FrequencyLattice& lattice, const AmplitudeOptions& opt = {});

/// Lattice with horizontal spacing dxi_h and vertical spacing eps/8.
FrequencyLattice datum_lattice(double eps, int horizontal_modes = 64, int vertical_modes = 256,
                               double horizontal_spacing = 1.0 / 12.0);

struct QuadratureOptions {
  int radial_nodes = 4096;      ///< along the diagonal coordinate, per half-line
  int strip_nodes = 256;        ///< across the strip, per half
  int vertical_nodes = 1024;    ///< across one vertical shell
  /// Evaluate per-block norms on a 3D tensor grid even when the support is
  /// certified to lie in a single block.
  bool force_tensor = false;
  int tensor_nodes = 96;        ///< per coordinate in the tensor fallback
};

/// Norms of the datum evaluated by separable quadrature.
struct DatumNorms {
  double eps = 0.0;
  Amplitude amp{};
  bool single_block = false;   ///< support certified inside the j = 0 plateau
  double rho_min = 0.0, rho_max = 0.0;
  double fb_minus1 = 0.0;      ///< ||u0||_{FB^{-1}_{1,1}}
  double fb_plus1 = 0.0;       ///< ||u0||_{FB^{1}_{1,1}}
  double l1 = 0.0;             ///< ||u0_hat||_{L^1}
  double horizontal_sum = 0.0; ///< ||u0^1 + u0^2||_{FB^1_{3/2,1}}
  double vertical_derivative = 0.0;  ///< ||d3 u0||_{FB^1_{3/2,1}}
  double third_component = 0.0;      ///< ||u0^3||_{FB^1_{3/2,1}}
  double off_block_max = 0.0;  ///< largest relative off-block value (tensor path)

  double group() const { return horizontal_sum + vertical_derivative + third_component; }
};

DatumNorms datum_norms(double eps, const QuadratureOptions& q = {}, const AmplitudeOptions& opt = {});

struct ExponentFit {
  std::string quantity;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least-squares slope of log(y) against log(x).
ExponentFit fit_log_log(const std::string& name, const std::vector<double>& x,
                        const std::vector<double>& y);

struct ScalingTable {
  std::vector<DatumNorms> rows;
  std::vector<ExponentFit> fits;

  const ExponentFit& fit(const std::string& quantity) const;
  std::string rows_csv() const;
  std::string fits_csv() const;
};

/// Sweep over a strictly decreasing list of eps <= 1/8; entries run on up to
/// `workers` threads (0: hardware concurrency) and are merged in input order.
ScalingTable norm_scaling_sweep(const std::vector<double>& eps_list, const QuadratureOptions& q = {},
                                const AmplitudeOptions& opt = {}, int workers = 0);

}  // namespace nsc::data
