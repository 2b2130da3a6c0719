#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nsc/field.hpp"
#include "nsc/spectral.hpp"
#include "nsc/stokes_coriolis.hpp"

namespace nsc {

struct SolverConfig {
  double omega = 0.0;
  double T = 1.0;
  double dt0 = 0.01;
  double cfl = 0.5;  ///< safety factor in (0, 1]
  /// Explicit snapshot times in (0, T]; empty selects the geometric schedule.
  std::vector<double> snapshot_times;
  int geometric_snapshots = 32;
  double first_snapshot = 0.01;
  Dealiasing dealiasing = Dealiasing::two_thirds;
  bool nonlinear = true;
  /// Also evaluate the exact linear solution U at every snapshot and record
  /// norms of v = u - U.
  bool track_linear = false;
  double blowup_factor = 1e6;

  void validate() const;
  /// 0, the configured or geometric times, and T.
  std::vector<double> schedule() const;
};

/// Geometric times first, first*r, ..., T (count entries), preceded by 0.
std::vector<double> geometric_schedule(double first, double T, int count);

struct SolverState {
  double t = 0.0;
  SpectralVectorField u;
};

/// One integrating-factor step with cached propagators. Not thread-safe.
class Stepper {
 public:
  Stepper(const FrequencyLattice& lattice, const SolverConfig& cfg);

  /// Advances by exactly dt. Returns max |u| on the grid at the start of the
  /// step (0 when the nonlinearity is off).
  double step(SolverState& s, double dt);
  /// Largest dt allowed by the advective limit for the given speed.
  double cfl_limit(double max_speed) const;

 private:
  void ensure(double dt);
  /// out <- -P[u . grad u]; returns max |u|.
  double rhs(const SpectralVectorField& u, SpectralVectorField& out);

  SolverConfig cfg_;
  FrequencyLattice lattice_;
  NonlinearEvaluator eval_;
  double cached_dt_ = -1.0;
  std::optional<Propagator> full_, half_;
  SpectralVectorField k1_, k2_, k3_, k4_, tmp_, acc_;
  double min_dx_;
};

struct RunSample {
  double t = 0.0;
  double dt = 0.0;          ///< last step size before this sample
  double energy = 0.0;
  double fb_minus1 = 0.0;   ///< ||u||_{FB^{-1}_{1,1}}
  double fb_zero = 0.0;     ///< ||u||_{FB^{0}_{1,1}}
  double fb_plus1 = 0.0;    ///< ||u||_{FB^{1}_{1,1}}
  double l1 = 0.0;          ///< ||u_hat||_{L^1}
  double divergence = 0.0;  ///< divergence_ratio
  double hermitian = 0.0;   ///< hermitian_defect
  double max_speed = 0.0;
  // present when tracking the linear solution
  double linear_energy = 0.0;
  double v_fb_minus1 = 0.0;
  double v_fb_plus1 = 0.0;
  double v_max = 0.0;       ///< max |v_hat|
};

struct RunReport {
  SolverConfig config;
  std::vector<RunSample> samples;
  bool tracked_linear = false;
  long steps = 0;
  long rejections = 0;
  bool completed = true;
  std::string finding;  ///< blow-up or NaN diagnostic when !completed

  std::string to_csv() const;
};

/// Called at every snapshot with the state and, when tracking, U(t).
using SnapshotCallback =
    std::function<void(const RunSample&, const SpectralVectorField& u, const SpectralVectorField* U)>;

/// Integrates the rotating Navier-Stokes system from u0 to T.
RunReport solve(const SpectralVectorField& u0, const SolverConfig& cfg,
                const SnapshotCallback& on_snapshot = {});

struct BootstrapReport {
  double eta = 0.0;
  double T = 0.0;
  std::vector<double> times;
  std::vector<double> sup_minus1;  ///< running max of ||v||_{FB^{-1}_{1,1}}
  std::vector<double> int_plus1;   ///< running trapezoid of ||v||_{FB^{1}_{1,1}}
  double gamma = 0.0;              ///< first exceedance time of eta, or T
  bool exceeded = false;
  bool margin = false;             ///< sum <= eta/2 for all t <= gamma
  bool degenerate = false;         ///< eta <= 0

  std::string to_csv() const;
};

BootstrapReport perturbation_monitor(const RunReport& run, double eta);

}  // namespace nsc
