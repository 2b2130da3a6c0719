#include "nsc/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsc/kernels/kernels.hpp"
#include "nsc/smooth.hpp"

namespace nsc::lp {

double cutoff(double rho) { return smooth_fall(rho, kAnnulusInner, kPlateauInner); }

double profile(double rho) { return cutoff(0.5 * rho) - cutoff(rho); }

ActiveBlocks active_blocks(double rho) {
  ActiveBlocks out;
  if (!(rho > 0.0)) return out;
  // psi_hat(2^-j rho) > 0 iff 3/4 < 2^-j rho < 8/3.
  const int j0 = static_cast<int>(std::floor(std::log2(rho))) - 2;
  for (int j = j0; j <= j0 + 4 && out.count < 2; ++j) {
    const double w = profile(std::ldexp(rho, -j));
    if (w > 0.0) {
      out.j[out.count] = j;
      out.w[out.count] = w;
      ++out.count;
    }
  }
  return out;
}

double partition_sum(double rho) {
  const ActiveBlocks b = active_blocks(rho);
  double s = 0.0;
  for (int i = 0; i < b.count; ++i) s += b.w[i];
  return s;
}

DyadicPartition::DyadicPartition(int j_min, int j_max) : j_min_(j_min), j_max_(j_max) {
  require(j_min <= j_max, "dyadic partition: j_min > j_max");
}

DyadicPartition DyadicPartition::covering(double rho_min, double rho_max) {
  require(rho_min > 0.0 && rho_max >= rho_min, "dyadic partition: invalid radius range");
  const int lo = static_cast<int>(std::floor(std::log2(rho_min / kPlateauInner)));
  const int hi = static_cast<int>(std::ceil(std::log2(rho_max / kPlateauOuter)));
  return DyadicPartition(lo, std::max(lo, hi));
}

DyadicPartition DyadicPartition::for_lattice(const FrequencyLattice& lattice) {
  double lo = kInf, hi = 0.0;
  for (double x2 : lattice.xi_squared()) {
    if (x2 <= 0.0) continue;
    lo = std::min(lo, x2);
    hi = std::max(hi, x2);
  }
  return covering(std::sqrt(lo), std::sqrt(hi));
}

double DyadicPartition::weight(int j, double rho) const { return profile(std::ldexp(rho, -j)); }

double DyadicPartition::window_sum(double rho) const {
  const ActiveBlocks b = active_blocks(rho);
  double s = 0.0;
  for (int i = 0; i < b.count; ++i)
    if (contains(b.j[i])) s += b.w[i];
  return s;
}

double DyadicPartition::covered_min() const { return std::ldexp(kPlateauInner, j_min_); }
double DyadicPartition::covered_max() const { return std::ldexp(kPlateauOuter, j_max_); }

BesovParams::BesovParams(double s_, double p_, double r_) : s(s_), p(p_), r(r_) {
  require(std::isfinite(s), "Besov index s must be finite");
  require(p >= 1.0, "Besov integrability p must be >= 1");
  require(r >= 1.0, "Besov summation exponent r must be >= 1");
}

double NormSeries::block(int j) const {
  for (const auto& b : blocks)
    if (b.j == j) return b.value;
  return 0.0;
}

std::string NormSeries::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "j,block_value\n";
  for (const auto& b : blocks) os << b.j << ',' << b.value << '\n';
  os << "aggregate," << aggregate << '\n';
  return os.str();
}

namespace {

// Accumulates sum w^p (or max w for p = inf).
struct PowerSum {
  double p;
  double acc = 0.0;

  void add(double w) {
    if (w <= 0.0) return;
    if (std::isinf(p)) {
      acc = std::max(acc, w);
    } else if (p == 1.0) {
      acc += w;
    } else if (p == 2.0) {
      acc += w * w;
    } else {
      acc += std::pow(w, p);
    }
  }
  double finish(double cell) const {
    if (std::isinf(p)) return acc;
    if (p == 1.0) return acc * cell;
    if (p == 2.0) return std::sqrt(acc * cell);
    return std::pow(acc * cell, 1.0 / p);
  }
};

double ell_r(const std::vector<BlockValue>& v, double r) {
  if (std::isinf(r)) {
    double m = 0.0;
    for (const auto& b : v) m = std::max(m, b.value);
    return m;
  }
  double s = 0.0;
  for (const auto& b : v) s += r == 1.0 ? b.value : std::pow(b.value, r);
  return r == 1.0 ? s : std::pow(s, 1.0 / r);
}

}  // namespace

double lp_norm(const FrequencyLattice& lattice, std::span<const double> magnitude, double p) {
  require(p >= 1.0, "L^p exponent must be >= 1");
  PowerSum acc{p};
  for (double m : magnitude) acc.add(m);
  return acc.finish(lattice.cell_volume());
}

std::vector<double> magnitudes(const SpectralVectorField& u) {
  std::vector<double> mag(u.size());
  const cplx* f[3] = {u.comp[0].data(), u.comp[1].data(), u.comp[2].data()};
  kernels::active().magnitude(u.size(), f, mag.data());
  return mag;
}

std::vector<double> magnitudes(const SpectralScalarField& f) {
  std::vector<double> mag(f.values.size());
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(f.values[k]);
  return mag;
}

double lp_norm(const SpectralVectorField& u, double p) {
  const auto mag = magnitudes(u);
  return lp_norm(u.lattice, mag, p);
}

double lp_norm(const SpectralScalarField& f, double p) {
  const auto mag = magnitudes(f);
  return lp_norm(f.lattice, mag, p);
}

SpectralVectorField dyadic_block(const DyadicPartition& part, int j, const SpectralVectorField& u) {
  require(part.contains(j), "dyadic_block: j = " + std::to_string(j) + " outside partition range");
  SpectralVectorField out = u;
  const auto xi2 = u.lattice.xi_squared();
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double w = xi2[k] > 0.0 ? part.weight(j, std::sqrt(xi2[k])) : 0.0;
    for (auto& c : out.comp) c[k] *= w;
  }
  return out;
}

NormSeries fb_norm(const DyadicPartition& part, const FrequencyLattice& lattice,
                   std::span<const double> magnitude, const BesovParams& prm) {
  require(magnitude.size() == lattice.size(), "fb_norm: magnitude size mismatch");
  std::vector<PowerSum> block(part.count(), PowerSum{prm.p});
  PowerSum missing{prm.p};
  const auto xi2 = lattice.xi_squared();
  for (std::size_t k = 0; k < magnitude.size(); ++k) {
    const double m = magnitude[k];
    if (m == 0.0) continue;
    if (xi2[k] <= 0.0) {
      missing.add(m);
      continue;
    }
    const ActiveBlocks b = active_blocks(std::sqrt(xi2[k]));
    double covered = 0.0;
    for (int i = 0; i < b.count; ++i) {
      if (!part.contains(b.j[i])) continue;
      block[b.j[i] - part.j_min()].add(b.w[i] * m);
      covered += b.w[i];
    }
    const double gap = 1.0 - covered;
    if (gap > 1e-14) missing.add(gap * m);
  }

  NormSeries out;
  out.params = prm;
  const double cell = lattice.cell_volume();
  for (int j = part.j_min(); j <= part.j_max(); ++j) {
    const double lp = block[j - part.j_min()].finish(cell);
    out.blocks.push_back({j, std::pow(2.0, j * prm.s) * lp});
  }
  out.aggregate = ell_r(out.blocks, prm.r);
  out.truncated_mass = missing.finish(cell);
  return out;
}

NormSeries fb_norm(const DyadicPartition& part, const SpectralVectorField& u, const BesovParams& prm) {
  const auto mag = magnitudes(u);
  return fb_norm(part, u.lattice, mag, prm);
}

NormSeries fb_norm(const DyadicPartition& part, const SpectralScalarField& f, const BesovParams& prm) {
  const auto mag = magnitudes(f);
  return fb_norm(part, f.lattice, mag, prm);
}

double spacetime_fb_norm(std::span<const TimedValue> samples, double rho) {
  require(samples.size() >= 2, "spacetime norm needs at least two snapshots");
  require(rho >= 1.0, "time exponent must be >= 1");
  for (std::size_t i = 1; i < samples.size(); ++i)
    require(samples[i].t > samples[i - 1].t, "spacetime norm: snapshot times not increasing");
  if (std::isinf(rho)) {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, s.value);
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double a = std::pow(samples[i - 1].value, rho);
    const double b = std::pow(samples[i].value, rho);
    acc += 0.5 * (a + b) * (samples[i].t - samples[i - 1].t);
  }
  return rho == 1.0 ? acc : std::pow(acc, 1.0 / rho);
}

double spacetime_fb_norm(std::span<const std::pair<double, NormSeries>> snapshots, double rho) {
  std::vector<TimedValue> v;
  v.reserve(snapshots.size());
  for (const auto& [t, series] : snapshots) v.push_back({t, series.aggregate});
  return spacetime_fb_norm(v, rho);
}

AdaptiveTimeIntegral integrate_in_time(const std::function<double(double)>& f, double t_end,
                                       double rel_tol, int max_evaluations) {
  require(t_end > 0.0, "integrate_in_time: t_end must be positive");
  AdaptiveTimeIntegral out;
  int intervals = 16;
  std::vector<double> values(intervals + 1);
  for (int i = 0; i <= intervals; ++i) values[i] = f(t_end * i / intervals);
  out.evaluations = intervals + 1;

  auto trapezoid = [&](const std::vector<double>& v, int n) {
    double s = 0.5 * (v.front() + v.back());
    for (int i = 1; i < n; ++i) s += v[i];
    return s * t_end / n;
  };

  double prev = trapezoid(values, intervals);
  while (true) {
    if (out.evaluations + intervals > max_evaluations) {
      out.value = prev;
      break;
    }
    std::vector<double> refined(2 * intervals + 1);
    for (int i = 0; i <= intervals; ++i) refined[2 * i] = values[i];
    for (int i = 0; i < intervals; ++i)
      refined[2 * i + 1] = f(t_end * (2 * i + 1) / (2.0 * intervals));
    out.evaluations += intervals;
    intervals *= 2;
    values.swap(refined);
    const double cur = trapezoid(values, intervals);
    out.error_estimate = std::abs(cur - prev) / 3.0;
    out.value = cur;
    prev = cur;
    if (out.error_estimate <= rel_tol * std::abs(cur) || cur == 0.0) {
      out.converged = true;
      break;
    }
  }
  out.samples.reserve(values.size());
  for (int i = 0; i <= intervals; ++i) out.samples.push_back({t_end * i / intervals, values[i]});
  return out;
}

}  // namespace nsc::lp
