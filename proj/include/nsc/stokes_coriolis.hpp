#pragma once

#include <array>
#include <string>
#include <vector>

#include "nsc/field.hpp"
#include "nsc/littlewood_paley.hpp"

namespace nsc {

struct SemigroupParams {
  double omega = 0.0;  ///< Coriolis parameter
  double t = 0.0;      ///< elapsed time, >= 0
};

/// Per-mode tables of the linear rotating Stokes propagator over a fixed time
/// step: out = e^{-t|xi|^2} [cos(theta) f - sin(theta) (xi/|xi|) x f] with
/// theta = omega t xi3 / |xi|. The xi = 0 mode maps to zero.
class Propagator {
 public:
  Propagator(const FrequencyLattice& lattice, double omega, double t);

  double omega() const { return omega_; }
  double time() const { return t_; }

  /// out <- propagated f. `out` may be `f`.
  void apply(const SpectralVectorField& f, SpectralVectorField& out) const;
  SpectralVectorField apply(const SpectralVectorField& f) const;

 private:
  FrequencyLattice lattice_;
  double omega_;
  double t_;
  RealArray cd_;  // e^{-t|xi|^2} cos(theta)
  RealArray sd_;  // e^{-t|xi|^2} sin(theta) / |xi|
};

/// Exact linear solution at time t from divergence-free data u0.
SpectralVectorField semigroup_apply(const SpectralVectorField& u0, const SemigroupParams& prm);

struct LinearEvolution {
  double omega = 0.0;
  std::vector<double> times;
  std::vector<SpectralVectorField> snapshots;
  /// norms[k][i]: Besov norm i (in the order requested) of snapshot k.
  std::vector<std::vector<lp::NormSeries>> norms;
};

LinearEvolution linear_solution_series(const SpectralVectorField& u0, double omega,
                                       const std::vector<double>& times,
                                       const std::vector<lp::BesovParams>& norms = {});

struct BoundCheck {
  std::string name;
  std::string convention;  ///< how the moduli on each side are combined
  bool gating = true;      ///< false for readings reported for information only
  double max_ratio = 0.0;  ///< max over modes of lhs / rhs
  std::array<double, 3> argmax_xi{};
  std::size_t violations = 0;  ///< modes with lhs > rhs * tolerance
  bool passed = true;
};

struct BoundReport {
  double omega = 0.0;
  double t = 0.0;
  double tolerance = 1.0 + 1e-10;
  std::vector<BoundCheck> checks;

  bool passed() const;  ///< all gating checks pass
  const BoundCheck& check(const std::string& name) const;
  std::string to_json() const;
};

/// Evaluates the pointwise Fourier bounds on the linear solution at time t
/// for data with vanishing third component. Bounds use |omega|.
BoundReport pointwise_bound_check(const SpectralVectorField& u0, double omega, double t,
                                  double tolerance = 1.0 + 1e-10);

}  // namespace nsc
