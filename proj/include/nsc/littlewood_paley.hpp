#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nsc/field.hpp"

namespace nsc::lp {

/// Annulus carrying the dyadic profile: supp psi_hat in [3/4, 8/3].
inline constexpr double kAnnulusInner = 3.0 / 4.0;
inline constexpr double kAnnulusOuter = 8.0 / 3.0;
/// psi_hat is identically 1 on [4/3, 3/2]; fields supported there live in a
/// single block.
inline constexpr double kPlateauInner = 4.0 / 3.0;
inline constexpr double kPlateauOuter = 3.0 / 2.0;

/// Radial low-pass cutoff: 1 for rho <= 3/4, 0 for rho >= 4/3, C-infinity.
double cutoff(double rho);
/// Dyadic profile psi_hat(rho) = cutoff(rho/2) - cutoff(rho).
double profile(double rho);
/// sum over all j in Z of psi_hat(2^-j rho); 1 for every rho > 0.
double partition_sum(double rho);

/// Finite window [j_min, j_max] of the homogeneous dyadic decomposition.
///
/// The window sums exactly to one on [4/3 * 2^j_min, 3/2 * 2^j_max]
/// (the telescoped sum is cutoff(rho 2^{-j_max-1}) - cutoff(rho 2^{-j_min})).
/// Outside that interval the missing blocks are reported as truncation.
class DyadicPartition {
 public:
  DyadicPartition(int j_min, int j_max);

  /// Smallest window whose exact-coverage interval contains [rho_min, rho_max].
  static DyadicPartition covering(double rho_min, double rho_max);
  /// Window covering every nonzero frequency of the lattice.
  static DyadicPartition for_lattice(const FrequencyLattice& lattice);

  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  int count() const { return j_max_ - j_min_ + 1; }
  bool contains(int j) const { return j >= j_min_ && j <= j_max_; }

  /// psi_hat(2^-j rho); defined for any j.
  double weight(int j, double rho) const;
  /// sum over j in [j_min, j_max] of weight(j, rho).
  double window_sum(double rho) const;
  double covered_min() const;
  double covered_max() const;

 private:
  int j_min_;
  int j_max_;
};

/// Blocks j with psi_hat(2^-j rho) > 0 (at most two consecutive indices),
/// together with their weights.
struct ActiveBlocks {
  int count = 0;
  std::array<int, 2> j{};
  std::array<double, 2> w{};
};
ActiveBlocks active_blocks(double rho);

struct BesovParams {
  double s = 0.0;
  double p = 1.0;  ///< integrability, [1, inf]
  double r = 1.0;  ///< summation exponent, [1, inf]

  BesovParams() = default;
  BesovParams(double s_, double p_, double r_);
};

struct BlockValue {
  int j;
  double value;  ///< 2^{js} ||psi_hat_j u_hat||_{L^p}
};

struct NormSeries {
  BesovParams params;
  std::vector<BlockValue> blocks;
  double aggregate = 0.0;
  /// L^p mass of u_hat on frequencies the window does not fully cover,
  /// (1 - window_sum) |u_hat|. Zero when the window certifies the norm.
  double truncated_mass = 0.0;

  bool truncated() const { return truncated_mass > 0.0; }
  double block(int j) const;
  /// Rows "j,block_value", then "aggregate,<value>".
  std::string to_csv() const;
};

/// Discrete L^p norm (sum |m|^p dxi^3)^{1/p}, max for p = inf.
double lp_norm(const FrequencyLattice& lattice, std::span<const double> magnitude, double p);
/// ||u_hat||_{L^p} with the pointwise Euclidean magnitude |u_hat(xi)|.
double lp_norm(const SpectralVectorField& u, double p);
double lp_norm(const SpectralScalarField& f, double p);

std::vector<double> magnitudes(const SpectralVectorField& u);
std::vector<double> magnitudes(const SpectralScalarField& f);

/// Coefficients u_hat(xi) * psi_hat(2^-j |xi|).
SpectralVectorField dyadic_block(const DyadicPartition& part, int j, const SpectralVectorField& u);

NormSeries fb_norm(const DyadicPartition& part, const FrequencyLattice& lattice,
                   std::span<const double> magnitude, const BesovParams& prm);
NormSeries fb_norm(const DyadicPartition& part, const SpectralVectorField& u, const BesovParams& prm);
NormSeries fb_norm(const DyadicPartition& part, const SpectralScalarField& f, const BesovParams& prm);

struct TimedValue {
  double t;
  double value;
};

/// L^rho in time of an instantaneous norm sampled at increasing times:
/// rho = inf -> max, rho = 1 -> trapezoid, otherwise (trapezoid of v^rho)^{1/rho}.
double spacetime_fb_norm(std::span<const TimedValue> samples, double rho);
double spacetime_fb_norm(std::span<const std::pair<double, NormSeries>> snapshots, double rho);

struct AdaptiveTimeIntegral {
  double value = 0.0;
  double error_estimate = 0.0;  ///< |T_2n - T_n| / 3
  int evaluations = 0;
  bool converged = false;
  std::vector<TimedValue> samples;
};

/// Trapezoid integral of f on [0, t_end] with uniform doubling refinement
/// until the Richardson error estimate drops below rel_tol * |value|.
AdaptiveTimeIntegral integrate_in_time(const std::function<double(double)>& f, double t_end,
                                       double rel_tol, int max_evaluations = 1 << 16);

}  // namespace nsc::lp
