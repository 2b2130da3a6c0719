#include "nsc/cli.hpp"

#include <fftw3.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <json.hpp>
#include <sstream>

#include "nsc/conditions.hpp"
#include "nsc/io/snapshot.hpp"
#include "nsc/kernels/kernels.hpp"
#include "nsc/large_data.hpp"
#include "nsc/littlewood_paley.hpp"
#include "nsc/solver.hpp"
#include "nsc/spectral.hpp"
#include "nsc/stokes_coriolis.hpp"
#include "selftest.hpp"

#ifndef NSC_VERSION
#define NSC_VERSION "0.0.0"
#endif

namespace nsc::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kManifestSchema = 1;

// Options shared by the subcommands; every field has a documented default.
struct Options {
  std::string out_dir = "out";
  int workers = 0;
  std::uint64_t seed = 1;

  // data / lattice
  std::string eps = "1/8";
  std::string modes = "64,64,256";
  std::string dxi_h = "1/12";
  std::string periods;   // explicit periods override dxi_h and eps scaling
  std::string snapshot;  // read the initial field from a snapshot file
  bool random = false;   // random band-limited field instead of the datum
  double random_min = 1.0;
  double random_max = 2.0;
  bool no_floor = false;

  // norms
  double s = -1.0;
  std::string p = "1";
  std::string r = "1";

  // dynamics
  std::string omega = "1";
  std::string times = "0.1,1,10";
  double T = 5.0;
  double dt = 0.1;
  double cfl = 0.5;
  int snapshots = 32;
  double first_snapshot = 0.01;
  bool no_nonlinear = false;
  bool no_dealias = false;
  bool monitor = false;
  double eta = 0.1;
  bool write_fields = false;
  std::string run_csv;

  // conditions
  double C = 1.0;
  double delta = 0.01;
  double t_max = 8.0;
  double rel_tol = 1e-6;
  int budget = 513;
  bool proof_route = false;
  std::string kind = "both";
};

struct Context {
  std::string command;
  fs::path dir;
  std::vector<std::string> outputs;

  void write(const std::string& name, const std::string& text) {
    std::ofstream os(dir / name, std::ios::binary);
    require(static_cast<bool>(os), "cannot write " + (dir / name).string());
    os << text;
    require(static_cast<bool>(os), "error writing " + (dir / name).string());
    outputs.push_back(name);
  }
};

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::array<int, 3> parse_modes(const std::string& text) {
  const auto v = parse_number_list(text);
  require(v.size() == 3, "--modes expects three comma-separated counts");
  std::array<int, 3> m{};
  for (int a = 0; a < 3; ++a) {
    require(v[a] == std::floor(v[a]), "--modes entries must be integers");
    m[a] = static_cast<int>(v[a]);
  }
  return m;
}

double single_eps(const Options& o) {
  const auto v = parse_number_list(o.eps);
  require(v.size() == 1, "this subcommand takes a single --eps value");
  return v[0];
}

FrequencyLattice lattice_for(const Options& o, double eps) {
  const auto m = parse_modes(o.modes);
  if (!o.periods.empty()) {
    const auto L = parse_number_list(o.periods);
    require(L.size() == 3, "--periods expects three comma-separated lengths");
    return make_lattice({L[0], L[1], L[2]}, m);
  }
  const double h = parse_number(o.dxi_h);
  require(h > 0.0, "--dxi-h must be positive");
  const double lh = kTwoPi / h;
  return make_lattice({lh, lh, kTwoPi / (eps / 8.0)}, m);
}

data::AmplitudeOptions amp_options(const Options& o) { return {!o.no_floor}; }

// Initial field from a snapshot, a random draw, or the large datum.
SpectralVectorField initial_field(const Options& o, json& info) {
  if (!o.snapshot.empty()) {
    auto s = io::read_snapshot(o.snapshot);
    info["source"] = "snapshot";
    info["snapshot"] = o.snapshot;
    info["snapshot_time"] = s.time;
    return std::move(s.field);
  }
  const double eps = single_eps(o);
  const auto lat = lattice_for(o, eps);
  if (o.random) {
    RandomFieldOptions r;
    r.min_radius = o.random_min;
    r.max_radius = o.random_max;
    r.seed = o.seed;
    info["source"] = "random";
    info["seed"] = o.seed;
    return random_field(lat, r);
  }
  auto d = data::build_u0(eps, lat, amp_options(o));
  info["source"] = "large_datum";
  info["eps"] = eps;
  info["amplitude"] = d.amp.value;
  info["loglog"] = d.amp.loglog;
  info["loglog_floored"] = d.amp.floored;
  info["support_min_radius"] = d.support_min_radius;
  info["support_max_radius"] = d.support_max_radius;
  return std::move(d.u0);
}

json lattice_json(const FrequencyLattice& lat) {
  json j;
  j["periods"] = lat.periods();
  j["modes"] = lat.modes();
  j["spacing"] = {lat.spacing(0), lat.spacing(1), lat.spacing(2)};
  j["cell_volume"] = lat.cell_volume();
  j["max_resolved_radius"] = lat.max_resolved_radius();
  return j;
}

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInf;
  return parse_number(text);
}

// Every numeric CSV cell must be finite.
void check_finite_csv(const std::string& name, const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      if (cell == "nan" || cell == "-nan" || cell == "inf" || cell == "-inf")
        throw NumericalFinding("non-finite value in " + name + ": " + line);
    }
  }
}

void write_csv(Context& ctx, const std::string& name, const std::string& csv) {
  check_finite_csv(name, csv);
  ctx.write(name, csv);
}

// Keeps the global keys and those of the selected subcommand, so the file
// round-trips through --config.
std::string effective_config(const std::string& full, const std::string& command) {
  std::istringstream is(full);
  std::ostringstream os;
  std::string line;
  const std::string prefix = command + ".";
  while (std::getline(is, line)) {
    const auto key = line.substr(0, line.find('='));
    if (key.find('.') == std::string::npos || key.rfind(prefix, 0) == 0) os << line << '\n';
  }
  return os.str();
}

std::string file_bytes(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), "cannot read " + path);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

// ---- subcommands ---------------------------------------------------------

int cmd_norms(const Options& o, Context& ctx) {
  json info;
  const auto u = initial_field(o, info);
  const lp::BesovParams prm(o.s, parse_exponent(o.p), parse_exponent(o.r));
  const auto part = lp::DyadicPartition::for_lattice(u.lattice);
  const auto series = lp::fb_norm(part, u, prm);
  write_csv(ctx, "norm_series.csv", series.to_csv());
  json j;
  j["field"] = info;
  j["lattice"] = lattice_json(u.lattice);
  j["s"] = prm.s;
  j["p"] = std::isinf(prm.p) ? json("inf") : json(prm.p);
  j["r"] = std::isinf(prm.r) ? json("inf") : json(prm.r);
  j["j_min"] = part.j_min();
  j["j_max"] = part.j_max();
  j["aggregate"] = series.aggregate;
  j["truncated_mass"] = series.truncated_mass;
  j["fourier_lp_norm"] = lp::lp_norm(u, prm.p);
  ctx.write("norms.json", j.dump(2) + "\n");
  std::cout << "aggregate " << series.aggregate << "\n";
  return kExitOk;
}

int cmd_build_data(const Options& o, Context& ctx) {
  json info;
  const auto u = initial_field(o, info);
  io::write_snapshot((ctx.dir / "u0.nscf").string(), u, 0.0);
  ctx.outputs.push_back("u0.nscf");
  info["lattice"] = lattice_json(u.lattice);
  info["divergence_ratio"] = divergence_ratio(u);
  info["hermitian_defect"] = hermitian_defect(u);
  info["energy"] = energy(u);
  info["l1_norm"] = lp::lp_norm(u, 1.0);
  ctx.write("datum.json", info.dump(2) + "\n");
  return kExitOk;
}

int cmd_sweep(const Options& o, Context& ctx) {
  const auto eps = parse_number_list(o.eps);
  const auto table = data::norm_scaling_sweep(eps, {}, amp_options(o), o.workers);
  write_csv(ctx, "sweep.csv", table.rows_csv());
  if (!table.fits.empty()) write_csv(ctx, "sweep_fit.csv", table.fits_csv());
  cond::ConditionParams prm;
  prm.C = o.C;
  prm.delta = o.delta;
  const auto shape = cond::condition_shape(table.rows, prm);
  write_csv(ctx, "condition_shape.csv", shape.to_csv());
  json j;
  j["C"] = prm.C;
  j["delta"] = prm.delta;
  j["kappa"] = shape.kappa;
  j["literal_spread"] = shape.literal_spread;
  j["calibrated_spread"] = shape.calibrated_spread;
  ctx.write("condition_shape.json", j.dump(2) + "\n");
  for (const auto& f : table.fits) std::cout << f.quantity << " slope " << f.slope << "\n";
  return kExitOk;
}

int cmd_linear(const Options& o, Context& ctx) {
  json info;
  const auto u0 = initial_field(o, info);
  const double omega = parse_number(o.omega);
  std::vector<double> times = geometric_schedule(o.first_snapshot, o.T, o.snapshots);
  const auto ev = linear_solution_series(
      u0, omega, times, {lp::BesovParams(-1.0, 1.0, 1.0), lp::BesovParams(1.0, 1.0, 1.0)});
  std::ostringstream os;
  os.precision(17);
  os << "t,energy,fb_minus1,fb_plus1\n";
  std::vector<lp::TimedValue> plus;
  double sup = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    os << times[k] << ',' << energy(ev.snapshots[k]) << ',' << ev.norms[k][0].aggregate << ','
       << ev.norms[k][1].aggregate << '\n';
    plus.push_back({times[k], ev.norms[k][1].aggregate});
    sup = std::max(sup, ev.norms[k][0].aggregate);
    if (o.write_fields) {
      fs::create_directories(ctx.dir / "fields");
      char name[64];
      std::snprintf(name, sizeof name, "fields/linear_%04zu.nscf", k);
      io::write_snapshot((ctx.dir / name).string(), ev.snapshots[k], times[k]);
      ctx.outputs.push_back(name);
    }
  }
  write_csv(ctx, "linear.csv", os.str());
  json j;
  j["field"] = info;
  j["omega"] = omega;
  const double initial = ev.norms.front()[0].aggregate;
  j["sup_fb_minus1"] = sup;
  j["int_fb_plus1"] = lp::spacetime_fb_norm(plus, 1.0);
  j["observed_constant"] =
      initial > 0.0 ? (sup + lp::spacetime_fb_norm(plus, 1.0)) / initial : 0.0;
  ctx.write("linear.json", j.dump(2) + "\n");
  return kExitOk;
}

int cmd_bounds(const Options& o, Context& ctx) {
  json info;
  const auto u0 = initial_field(o, info);
  json arr = json::array();
  bool all = true;
  for (double omega : parse_number_list(o.omega)) {
    for (double t : parse_number_list(o.times)) {
      const auto rep = pointwise_bound_check(u0, omega, t);
      all = all && rep.passed();
      arr.push_back(json::parse(rep.to_json()));
      std::cout << "omega " << omega << " t " << t << (rep.passed() ? " pass" : " FAIL") << "\n";
    }
  }
  json j;
  j["field"] = info;
  j["passed"] = all;
  j["reports"] = arr;
  ctx.write("bounds.json", j.dump(2) + "\n");
  return kExitOk;
}

int cmd_conditions(const Options& o, Context& ctx) {
  json info;
  const auto u0 = initial_field(o, info);
  cond::ConditionParams prm;
  prm.C = o.C;
  prm.delta = o.delta;
  prm.t_max = o.t_max;
  prm.rel_tol = o.rel_tol;
  prm.max_evaluations = o.budget;
  prm.proof_route = o.proof_route;
  prm.workers = o.workers;
  require(o.kind == "theorem" || o.kind == "corollary" || o.kind == "both",
          "--kind must be theorem, corollary or both");
  json j;
  j["field"] = info;
  j["lattice"] = lattice_json(u0.lattice);
  if (o.kind != "corollary") {
    json arr = json::array();
    for (double omega : parse_number_list(o.omega)) {
      const auto rep = cond::theorem_condition(u0, omega, prm);
      arr.push_back(json::parse(rep.to_json()));
      std::cout << "theorem omega " << omega << " lhs " << rep.lhs << (rep.passed ? " <= " : " > ")
                << prm.delta << "\n";
    }
    j["theorem"] = arr;
  }
  if (o.kind != "theorem") {
    const auto rep = cond::corollary_condition(u0, prm);
    j["corollary"] = json::parse(rep.to_json());
    std::cout << "corollary lhs " << rep.lhs << (rep.passed ? " <= " : " > ") << prm.delta << "\n";
  }
  j["transport"] = [&] {
    const auto t = cond::transport_decomposition_check(u0);
    json r;
    r["residual"] = t.residual;
    r["predicted"] = t.predicted;
    r["divergence_free"] = t.divergence_free;
    return r;
  }();
  ctx.write("conditions.json", j.dump(2) + "\n");
  return kExitOk;
}

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  cfg.omega = parse_number(o.omega);
  cfg.T = o.T;
  cfg.dt0 = o.dt;
  cfg.cfl = o.cfl;
  cfg.geometric_snapshots = o.snapshots;
  cfg.first_snapshot = o.first_snapshot;
  cfg.nonlinear = !o.no_nonlinear;
  cfg.dealiasing = o.no_dealias ? Dealiasing::none : Dealiasing::two_thirds;
  cfg.track_linear = o.monitor;
  return cfg;
}

json bootstrap_json(const BootstrapReport& b) {
  json j;
  j["eta"] = b.eta;
  j["T"] = b.T;
  j["gamma"] = b.gamma;
  j["exceeded"] = b.exceeded;
  j["margin"] = b.margin;
  j["degenerate"] = b.degenerate;
  j["final_sum"] = b.times.empty() ? 0.0 : b.sup_minus1.back() + b.int_plus1.back();
  return j;
}

int cmd_solve(const Options& o, Context& ctx) {
  json info;
  const auto u0 = initial_field(o, info);
  const SolverConfig cfg = solver_config(o);
  std::size_t index = 0;
  if (o.write_fields) fs::create_directories(ctx.dir / "fields");
  const auto run = solve(u0, cfg, [&](const RunSample& s, const SpectralVectorField& u,
                                      const SpectralVectorField* U) {
    if (o.write_fields) {
      char name[64];
      std::snprintf(name, sizeof name, "fields/u_%04zu.nscf", index);
      io::write_snapshot((ctx.dir / name).string(), u, s.t);
      ctx.outputs.push_back(name);
      if (U) {
        std::snprintf(name, sizeof name, "fields/U_%04zu.nscf", index);
        io::write_snapshot((ctx.dir / name).string(), *U, s.t);
        ctx.outputs.push_back(name);
      }
    }
    ++index;
  });
  if (run.completed) {
    write_csv(ctx, "run.csv", run.to_csv());
  } else {
    ctx.write("run.csv", run.to_csv());  // flagged finding: non-finite cells allowed
  }
  json j;
  j["field"] = info;
  j["lattice"] = lattice_json(u0.lattice);
  j["steps"] = run.steps;
  j["rejections"] = run.rejections;
  j["completed"] = run.completed;
  j["finding"] = run.finding;
  if (o.monitor && !run.samples.empty()) {
    const auto b = perturbation_monitor(run, o.eta);
    write_csv(ctx, "bootstrap.csv", b.to_csv());
    j["bootstrap"] = bootstrap_json(b);
    std::cout << "gamma " << b.gamma << " of T " << b.T << (b.margin ? " (margin held)" : "") << "\n";
  }
  ctx.write("run.json", j.dump(2) + "\n");
  if (!run.completed) {
    std::cerr << "numerical finding: " << run.finding << "\n";
    return kExitFinding;
  }
  return kExitOk;
}

int cmd_monitor(const Options& o, Context& ctx) {
  require(!o.run_csv.empty(), "monitor needs --run <run.csv>");
  std::ifstream is(o.run_csv);
  require(static_cast<bool>(is), "cannot read run CSV: " + o.run_csv);
  std::string header;
  std::getline(is, header);
  std::vector<std::string> cols;
  {
    std::istringstream hs(header);
    std::string c;
    while (std::getline(hs, c, ',')) cols.push_back(c);
  }
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (cols[i] == name) return i;
    throw ValidationError("run CSV lacks column '" + name +
                          "' (was the run made with --monitor?)");
  };
  const std::size_t ct = col("t"), cm = col("v_fb_minus1"), cp = col("v_fb_plus1");
  RunReport run;
  run.tracked_linear = true;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    require(cells.size() == cols.size(), "run CSV: ragged row");
    RunSample s;
    s.t = parse_number(cells[ct]);
    s.v_fb_minus1 = parse_number(cells[cm]);
    s.v_fb_plus1 = parse_number(cells[cp]);
    run.samples.push_back(s);
  }
  const auto b = perturbation_monitor(run, o.eta);
  write_csv(ctx, "bootstrap.csv", b.to_csv());
  ctx.write("bootstrap.json", bootstrap_json(b).dump(2) + "\n");
  std::cout << "gamma " << b.gamma << " of T " << b.T << "\n";
  return kExitOk;
}

int cmd_selftest(const Options& o, Context& ctx) {
  const auto checks = run_selftest(o.seed);
  bool ok = true;
  std::ostringstream os;
  os << "check,passed,detail\n";
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << c.detail << "\n";
    os << c.name << ',' << (c.passed ? 1 : 0) << ',' << c.detail << '\n';
    ok = ok && c.passed;
  }
  ctx.write("selftest.csv", os.str());
  return ok ? kExitOk : kExitFinding;
}

// ---- option wiring -------------------------------------------------------

void add_field_options(CLI::App* sc, Options& o) {
  sc->add_option("--eps", o.eps, "shape parameter: 1/8, 2^-4, 0.0625")->capture_default_str();
  sc->add_option("--modes", o.modes, "lattice mode counts N1,N2,N3")->capture_default_str();
  sc->add_option("--dxi-h", o.dxi_h, "horizontal frequency spacing (vertical is eps/8)")
      ->capture_default_str();
  sc->add_option("--periods", o.periods, "explicit box periods L1,L2,L3");
  sc->add_option("--snapshot", o.snapshot, "read the initial field from a snapshot file");
  sc->add_flag("--random", o.random, "random band-limited divergence-free field");
  sc->add_option("--random-min", o.random_min, "inner radius of the random field")
      ->capture_default_str();
  sc->add_option("--random-max", o.random_max, "outer radius of the random field")
      ->capture_default_str();
  sc->add_flag("--no-loglog-floor", o.no_floor, "reject eps >= e^-e instead of flooring loglog");
}

void add_condition_options(CLI::App* sc, Options& o) {
  sc->add_option("--C", o.C, "Gronwall constant")->capture_default_str();
  sc->add_option("--delta", o.delta, "smallness threshold")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"Fourier-Besov analysis and simulation of rotating Navier-Stokes flows", "nsc"};
  app.set_version_flag("--version", NSC_VERSION);
  app.set_config("--config", "", "INI configuration file; command-line flags take precedence");
  app.require_subcommand(1);
  app.add_option("--out", o.out_dir, "output directory")->capture_default_str();
  app.add_option("--workers", o.workers, "worker threads for sweeps (0: all cores)")
      ->capture_default_str();
  app.add_option("--seed", o.seed, "random seed")->capture_default_str();

  auto* norms = app.add_subcommand("norms", "Fourier-Besov norm of a field");
  add_field_options(norms, o);
  norms->add_option("--s", o.s, "regularity index")->capture_default_str();
  norms->add_option("--p", o.p, "integrability exponent (number or inf)")->capture_default_str();
  norms->add_option("--r", o.r, "summation exponent (number or inf)")->capture_default_str();

  auto* build = app.add_subcommand("build-data", "build the large initial datum on a lattice");
  add_field_options(build, o);

  auto* sweep = app.add_subcommand("sweep-epsilon", "norm scaling sweep over eps");
  sweep->add_option("--eps", o.eps, "eps list or range, e.g. 2^-4..2^-14")->capture_default_str();
  sweep->add_flag("--no-loglog-floor", o.no_floor, "reject eps >= e^-e");
  add_condition_options(sweep, o);

  auto* linear = app.add_subcommand("linear-evolve", "exact linear evolution");
  add_field_options(linear, o);
  linear->add_option("--omega", o.omega, "Coriolis parameter")->capture_default_str();
  linear->add_option("--T", o.T, "final time")->capture_default_str();
  linear->add_option("--snapshots", o.snapshots, "geometric snapshot count")->capture_default_str();
  linear->add_option("--first-snapshot", o.first_snapshot, "first snapshot time")
      ->capture_default_str();
  linear->add_flag("--write-fields", o.write_fields, "write snapshot files");

  auto* bounds = app.add_subcommand("check-bounds", "pointwise bounds on the linear solution");
  add_field_options(bounds, o);
  bounds->add_option("--omega", o.omega, "Coriolis parameters (list)")->capture_default_str();
  bounds->add_option("--t", o.times, "times (list)")->capture_default_str();

  auto* conds = app.add_subcommand("check-conditions", "global existence conditions");
  add_field_options(conds, o);
  add_condition_options(conds, o);
  conds->add_option("--omega", o.omega, "Coriolis parameters (list)")->capture_default_str();
  conds->add_option("--t-max", o.t_max, "quadrature horizon")->capture_default_str();
  conds->add_option("--rel-tol", o.rel_tol, "quadrature tolerance")->capture_default_str();
  conds->add_option("--budget", o.budget, "quadrature evaluation budget")->capture_default_str();
  conds->add_flag("--proof-route", o.proof_route, "use the proof-route bound in the condition");
  conds->add_option("--kind", o.kind, "theorem, corollary or both")->capture_default_str();

  auto* solvec = app.add_subcommand("solve", "nonlinear time integration");
  add_field_options(solvec, o);
  solvec->add_option("--omega", o.omega, "Coriolis parameter")->capture_default_str();
  solvec->add_option("--T", o.T, "final time")->capture_default_str();
  solvec->add_option("--dt", o.dt, "initial step")->capture_default_str();
  solvec->add_option("--cfl", o.cfl, "CFL safety factor")->capture_default_str();
  solvec->add_option("--snapshots", o.snapshots, "geometric snapshot count")->capture_default_str();
  solvec->add_option("--first-snapshot", o.first_snapshot, "first snapshot time")
      ->capture_default_str();
  solvec->add_flag("--no-nonlinear", o.no_nonlinear, "switch the nonlinearity off");
  solvec->add_flag("--no-dealias", o.no_dealias, "disable the 2/3 rule");
  solvec->add_flag("--monitor", o.monitor, "track U and the bootstrap quantity");
  solvec->add_option("--eta", o.eta, "bootstrap threshold")->capture_default_str();
  solvec->add_flag("--write-fields", o.write_fields, "write snapshot files");

  auto* mon = app.add_subcommand("monitor", "bootstrap monitor from a run CSV");
  mon->add_option("--run", o.run_csv, "run.csv written by solve --monitor");
  mon->add_option("--eta", o.eta, "bootstrap threshold")->capture_default_str();

  auto* self = app.add_subcommand("selftest", "fast invariant suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  Context ctx;
  const auto start = std::chrono::steady_clock::now();
  const std::string started = timestamp_utc();
  int code = kExitOk;
  std::string error;
  try {
    ctx.command = app.get_subcommands().front()->get_name();
    ctx.dir = o.out_dir;
    std::error_code ec;
    fs::create_directories(ctx.dir, ec);
    require(!ec && fs::is_directory(ctx.dir), "output directory not writable: " + o.out_dir);
    {
      std::ofstream probe(ctx.dir / ".nsc_write_probe");
      require(static_cast<bool>(probe), "output directory not writable: " + o.out_dir);
    }
    fs::remove(ctx.dir / ".nsc_write_probe", ec);

    const std::string effective = effective_config(app.config_to_str(true, false), ctx.command);
    ctx.write("config.ini", effective);
    std::string inputs = effective;
    if (!o.snapshot.empty()) inputs += file_bytes(o.snapshot);

    if (norms->parsed()) code = cmd_norms(o, ctx);
    else if (build->parsed()) code = cmd_build_data(o, ctx);
    else if (sweep->parsed()) code = cmd_sweep(o, ctx);
    else if (linear->parsed()) code = cmd_linear(o, ctx);
    else if (bounds->parsed()) code = cmd_bounds(o, ctx);
    else if (conds->parsed()) code = cmd_conditions(o, ctx);
    else if (solvec->parsed()) code = cmd_solve(o, ctx);
    else if (mon->parsed()) code = cmd_monitor(o, ctx);
    else if (self->parsed()) code = cmd_selftest(o, ctx);

    json m;
    m["schema_version"] = kManifestSchema;
    m["tool"] = "nsc";
    m["version"] = NSC_VERSION;
    m["fftw"] = std::string(fftw_version);
    m["kernels"] = std::string(kernels::active().name);
    m["command"] = ctx.command;
    m["inputs_sha256"] = sha256_hex(inputs);
    m["timestamp"] = started;
    m["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    m["exit_code"] = code;
    m["outputs"] = ctx.outputs;
    std::ofstream mf(ctx.dir / "manifest.json");
    mf << m.dump(2) << "\n";
    return code;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalFinding& e) {
    std::cerr << "numerical finding: " << e.what() << "\n";
    return kExitFinding;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args);
}

}  // namespace nsc::cli
