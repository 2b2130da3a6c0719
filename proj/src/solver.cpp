#include "nsc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsc/littlewood_paley.hpp"

namespace nsc {

void SolverConfig::validate() const {
  require(T > 0.0, "solver: final time T must be positive");
  require(dt0 > 0.0, "solver: initial step dt0 must be positive");
  require(cfl > 0.0 && cfl <= 1.0, "solver: CFL factor must lie in (0, 1]");
  require(std::isfinite(omega), "solver: non-finite Coriolis parameter");
  require(blowup_factor > 1.0, "solver: blow-up factor must exceed 1");
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    require(snapshot_times[i] > 0.0 && snapshot_times[i] <= T,
            "solver: snapshot times must lie in (0, T]");
    require(i == 0 || snapshot_times[i] > snapshot_times[i - 1],
            "solver: snapshot times must increase");
  }
  if (snapshot_times.empty()) {
    require(geometric_snapshots >= 1, "solver: need at least one snapshot");
    require(first_snapshot > 0.0, "solver: first snapshot time must be positive");
  }
}

std::vector<double> geometric_schedule(double first, double T, int count) {
  std::vector<double> out{0.0};
  first = std::min(first, T);
  if (count <= 1 || first >= T) {
    out.push_back(T);
    return out;
  }
  const double r = std::pow(T / first, 1.0 / (count - 1));
  for (int k = 0; k < count - 1; ++k) out.push_back(first * std::pow(r, k));
  out.push_back(T);
  return out;
}

std::vector<double> SolverConfig::schedule() const {
  if (snapshot_times.empty()) return geometric_schedule(first_snapshot, T, geometric_snapshots);
  std::vector<double> out{0.0};
  out.insert(out.end(), snapshot_times.begin(), snapshot_times.end());
  if (out.back() < T) out.push_back(T);
  return out;
}

Stepper::Stepper(const FrequencyLattice& lattice, const SolverConfig& cfg)
    : cfg_(cfg),
      lattice_(lattice),
      eval_(lattice, cfg.dealiasing),
      k1_(lattice),
      k2_(lattice),
      k3_(lattice),
      k4_(lattice),
      tmp_(lattice),
      acc_(lattice) {
  min_dx_ = std::min({lattice.physical_spacing(0), lattice.physical_spacing(1),
                      lattice.physical_spacing(2)});
}

void Stepper::ensure(double dt) {
  if (dt == cached_dt_) return;
  full_.emplace(lattice_, cfg_.omega, dt);
  half_.emplace(lattice_, cfg_.omega, 0.5 * dt);
  cached_dt_ = dt;
}

double Stepper::cfl_limit(double max_speed) const {
  return max_speed > 0.0 ? cfg_.cfl * min_dx_ / max_speed : kInf;
}

double Stepper::rhs(const SpectralVectorField& u, SpectralVectorField& out) {
  const double speed = eval_.evaluate(u, out);
  helmholtz_project_inplace(out);
  out *= -1.0;
  return speed;
}

namespace {

// y <- a + h * b
void axpy(const SpectralVectorField& a, double h, const SpectralVectorField& b,
          SpectralVectorField& y) {
  for (int c = 0; c < 3; ++c) {
    const cplx* pa = a.comp[c].data();
    const cplx* pb = b.comp[c].data();
    cplx* py = y.comp[c].data();
    for (std::size_t k = 0; k < a.size(); ++k) py[k] = pa[k] + h * pb[k];
  }
}

}  // namespace

double Stepper::step(SolverState& s, double dt) {
  require(dt > 0.0, "solver: step size must be positive");
  ensure(dt);
  const Propagator& E = *full_;
  const Propagator& H = *half_;
  if (!cfg_.nonlinear) {
    E.apply(s.u, s.u);
    s.t += dt;
    return 0.0;
  }
  // Integrating-factor RK4 for u' = L u + F(u), F = -P[u . grad u]:
  //   k1 = F(u)
  //   k2 = F(H(u + dt/2 k1))
  //   k3 = F(H u + dt/2 k2)
  //   k4 = F(E u + dt H k3)
  //   u+ = E u + dt/6 (E k1 + 2 H (k2 + k3) + k4)
  const double speed = rhs(s.u, k1_);
  axpy(s.u, 0.5 * dt, k1_, tmp_);
  H.apply(tmp_, tmp_);
  rhs(tmp_, k2_);
  H.apply(s.u, acc_);  // acc = H u
  axpy(acc_, 0.5 * dt, k2_, tmp_);
  rhs(tmp_, k3_);
  H.apply(k3_, tmp_);
  E.apply(s.u, acc_);  // acc = E u
  axpy(acc_, dt, tmp_, tmp_);
  rhs(tmp_, k4_);

  // u+ = E u + dt/6 (E k1 + 2 H (k2 + k3) + k4)
  k2_ += k3_;
  H.apply(k2_, k3_);
  E.apply(k1_, k2_);
  const double h6 = dt / 6.0;
  for (int c = 0; c < 3; ++c) {
    cplx* pu = s.u.comp[c].data();
    const cplx* pe = acc_.comp[c].data();
    const cplx* a = k2_.comp[c].data();
    const cplx* b = k3_.comp[c].data();
    const cplx* d = k4_.comp[c].data();
    for (std::size_t k = 0; k < s.u.size(); ++k) pu[k] = pe[k] + h6 * (a[k] + 2.0 * b[k] + d[k]);
  }
  s.t += dt;
  return speed;
}

namespace {

bool all_finite(const SpectralVectorField& u) {
  for (const auto& c : u.comp)
    for (const auto& v : c)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace

RunReport solve(const SpectralVectorField& u0, const SolverConfig& cfg,
                const SnapshotCallback& on_snapshot) {
  cfg.validate();
  require(u0.real_valued, "solver: initial field is not flagged real-valued");
  require(u0.divergence_free || divergence_ratio(u0) <= 1e-10,
          "solver: initial field is not divergence-free");

  RunReport rep;
  rep.config = cfg;
  rep.tracked_linear = cfg.track_linear;
  const auto& lat = u0.lattice;
  const auto part = lp::DyadicPartition::for_lattice(lat);
  const auto schedule = cfg.schedule();

  Stepper stepper(lat, cfg);
  SolverState state{0.0, u0};
  state.u.divergence_free = true;
  const double l1_initial = lp::lp_norm(u0, 1.0);
  SpectralVectorField lin(lat), v(lat);

  auto record = [&](double dt_last, double speed) {
    RunSample smp;
    smp.t = state.t;
    smp.dt = dt_last;
    smp.energy = energy(state.u);
    const auto mag = lp::magnitudes(state.u);
    smp.fb_minus1 = lp::fb_norm(part, lat, mag, lp::BesovParams(-1.0, 1.0, 1.0)).aggregate;
    smp.fb_zero = lp::fb_norm(part, lat, mag, lp::BesovParams(0.0, 1.0, 1.0)).aggregate;
    smp.fb_plus1 = lp::fb_norm(part, lat, mag, lp::BesovParams(1.0, 1.0, 1.0)).aggregate;
    smp.l1 = lp::lp_norm(lat, mag, 1.0);
    smp.divergence = divergence_ratio(state.u);
    smp.hermitian = hermitian_defect(state.u);
    smp.max_speed = speed;
    const SpectralVectorField* linear = nullptr;
    if (cfg.track_linear) {
      Propagator(lat, cfg.omega, state.t).apply(u0, lin);
      smp.linear_energy = energy(lin);
      v = state.u;
      v -= lin;
      const auto vm = lp::magnitudes(v);
      smp.v_fb_minus1 = lp::fb_norm(part, lat, vm, lp::BesovParams(-1.0, 1.0, 1.0)).aggregate;
      smp.v_fb_plus1 = lp::fb_norm(part, lat, vm, lp::BesovParams(1.0, 1.0, 1.0)).aggregate;
      smp.v_max = *std::max_element(vm.begin(), vm.end());
      linear = &lin;
    }
    rep.samples.push_back(smp);
    if (on_snapshot) on_snapshot(smp, state.u, linear);
  };

  record(0.0, 0.0);
  double dt = cfg.dt0;
  double last_dt = 0.0, last_speed = 0.0;
  try {
    for (std::size_t next = 1; next < schedule.size(); ++next) {
      const double target = schedule[next];
      while (state.t < target) {
        double h = std::min(dt, target - state.t);
        // Avoid a sliver step right before the snapshot.
        if (target - state.t - h < 1e-12 * target) h = target - state.t;
        SolverState trial = state;
        const double speed = stepper.step(trial, h);
        if (cfg.nonlinear && h > stepper.cfl_limit(speed)) {
          dt = 0.5 * h;
          ++rep.rejections;
          continue;
        }
        if (!all_finite(trial.u))
          throw NumericalFinding("non-finite coefficients after step to t = " +
                                 std::to_string(trial.t));
        state = std::move(trial);
        if (std::abs(state.t - target) < 1e-12 * std::max(1.0, target)) state.t = target;
        ++rep.steps;
        last_dt = h;
        last_speed = speed;
        const double l1 = lp::lp_norm(state.u, 1.0);
        if (l1_initial > 0.0 && l1 > cfg.blowup_factor * l1_initial)
          throw NumericalFinding("blow-up heuristic: ||u_hat||_{L^1} grew by more than " +
                                 std::to_string(cfg.blowup_factor) + " at t = " +
                                 std::to_string(state.t));
        // Recover the configured step once the advective limit allows it.
        if (dt < cfg.dt0 && 2.0 * dt <= 0.5 * stepper.cfl_limit(speed)) dt = std::min(cfg.dt0, 2.0 * dt);
      }
      record(last_dt, last_speed);
    }
  } catch (const NumericalFinding& e) {
    rep.completed = false;
    rep.finding = e.what();
  }
  return rep;
}

std::string RunReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "t,dt,energy,fb_minus1,fb_zero,fb_plus1,l1,divergence,hermitian,max_speed";
  if (tracked_linear) os << ",linear_energy,v_fb_minus1,v_fb_plus1,v_max";
  os << '\n';
  for (const auto& s : samples) {
    os << s.t << ',' << s.dt << ',' << s.energy << ',' << s.fb_minus1 << ',' << s.fb_zero << ','
       << s.fb_plus1 << ',' << s.l1 << ',' << s.divergence << ',' << s.hermitian << ','
       << s.max_speed;
    if (tracked_linear)
      os << ',' << s.linear_energy << ',' << s.v_fb_minus1 << ',' << s.v_fb_plus1 << ',' << s.v_max;
    os << '\n';
  }
  return os.str();
}

BootstrapReport perturbation_monitor(const RunReport& run, double eta) {
  require(run.tracked_linear,
          "perturbation monitor: run does not carry the linear solution on its snapshot schedule");
  require(!run.samples.empty(), "perturbation monitor: run has no snapshots");
  for (std::size_t i = 1; i < run.samples.size(); ++i)
    require(run.samples[i].t > run.samples[i - 1].t,
            "perturbation monitor: mismatched snapshot schedule (times not increasing)");

  BootstrapReport rep;
  rep.eta = eta;
  rep.T = run.samples.back().t;
  double sup = 0.0, integral = 0.0;
  for (std::size_t i = 0; i < run.samples.size(); ++i) {
    const auto& s = run.samples[i];
    sup = std::max(sup, s.v_fb_minus1);
    if (i > 0) {
      const auto& p = run.samples[i - 1];
      integral += 0.5 * (p.v_fb_plus1 + s.v_fb_plus1) * (s.t - p.t);
    }
    rep.times.push_back(s.t);
    rep.sup_minus1.push_back(sup);
    rep.int_plus1.push_back(integral);
  }

  if (eta <= 0.0) {
    rep.degenerate = true;
    rep.gamma = 0.0;
    rep.exceeded = true;
    rep.margin = false;
    return rep;
  }
  rep.gamma = rep.T;
  rep.margin = true;
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const double sum = rep.sup_minus1[i] + rep.int_plus1[i];
    if (sum > eta) {
      rep.exceeded = true;
      if (i == 0) {
        rep.gamma = 0.0;
      } else {
        const double prev = rep.sup_minus1[i - 1] + rep.int_plus1[i - 1];
        const double f = (eta - prev) / (sum - prev);
        rep.gamma = rep.times[i - 1] + f * (rep.times[i] - rep.times[i - 1]);
      }
      break;
    }
    if (sum > 0.5 * eta) rep.margin = false;
  }
  return rep;
}

std::string BootstrapReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "t,sup_fb_minus1,int_fb_plus1,bootstrap_sum\n";
  for (std::size_t i = 0; i < times.size(); ++i)
    os << times[i] << ',' << sup_minus1[i] << ',' << int_plus1[i] << ','
       << sup_minus1[i] + int_plus1[i] << '\n';
  return os.str();
}

}  // namespace nsc
