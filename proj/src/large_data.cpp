#include "nsc/large_data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsc/parallel.hpp"
#include "nsc/smooth.hpp"

namespace nsc::data {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void require_eps(double eps) {
  require(eps > 0.0 && eps <= kEpsMax,
          "shape parameter eps = " + std::to_string(eps) + " outside (0, 1/8]");
}

// Midpoint rule on [a, b] with n nodes.
template <class F>
double midpoint(double a, double b, int n, F&& f) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}

double powp(double x, double p) {
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  return std::pow(x, p);
}

}  // namespace

double ProfileA::strip(double diff) const { return smooth_fall(std::abs(diff), 0.5 * eps, eps); }

double ProfileA::ring(double radius) const {
  return smooth_plateau(radius, kRingOuterLo, kRingInnerLo, kRingInnerHi, kRingOuterHi);
}

double ProfileA::operator()(double xi1, double xi2) const {
  const double s = strip(xi1 - xi2);
  if (s == 0.0) return 0.0;
  return s * ring(std::hypot(xi1, xi2));
}

double ProfileA::lp_norm(double p) const {
  require(p >= 1.0, "profile norm: p must be >= 1");
  // Rotated coordinates s = (xi1 + xi2)/sqrt2, d = (xi1 - xi2)/sqrt2; the
  // integrand is even in both, so integrate one quadrant.
  const double d_max = eps / kSqrt2;
  const double s_lo = std::sqrt(std::max(0.0, kRingOuterLo * kRingOuterLo - d_max * d_max));
  const int nd = std::max(8, static_cast<int>(std::ceil(d_max / spacing)));
  const int ns = std::max(8, static_cast<int>(std::ceil((kRingOuterHi - s_lo) / spacing)));
  if (std::isinf(p)) return 1.0;
  const double v = midpoint(0.0, d_max, nd, [&](double d) {
    const double st = strip(kSqrt2 * d);
    return midpoint(s_lo, kRingOuterHi, ns,
                    [&](double s) { return powp(st * ring(std::hypot(s, d)), p); });
  });
  return std::pow(4.0 * v, 1.0 / p);
}

double ProfileB::operator()(double xi3) const {
  return smooth_plateau(std::abs(xi3), 0.5 * eps, 0.625 * eps, 0.875 * eps, eps);
}

double ProfileB::lp_norm(double p) const {
  require(p >= 1.0, "profile norm: p must be >= 1");
  if (std::isinf(p)) return 1.0;
  const int n = std::max(8, static_cast<int>(std::ceil(0.5 * eps / spacing)));
  const double v = midpoint(0.5 * eps, eps, n, [&](double x) { return powp((*this)(x), p); });
  return std::pow(2.0 * v, 1.0 / p);
}

ProfileA build_profile_a(double eps, double spacing) {
  require_eps(eps);
  require(spacing > 0.0 && spacing <= eps / 8.0,
          "profile resolution too coarse: need spacing <= eps/8 = " + std::to_string(eps / 8.0));
  return {eps, spacing};
}

ProfileB build_profile_b(double eps, double spacing) {
  require_eps(eps);
  require(spacing > 0.0 && spacing <= eps / 8.0,
          "profile resolution too coarse: need spacing <= eps/8 = " + std::to_string(eps / 8.0));
  return {eps, spacing};
}

double loglog(double eps) { return std::log(std::log(1.0 / eps)); }

Amplitude amplitude(double eps, const AmplitudeOptions& opt) {
  require_eps(eps);
  const bool moderate = eps >= std::exp(-std::exp(1.0));
  require(!moderate || opt.floor_loglog,
          "eps = " + std::to_string(eps) + " >= e^{-e} and the loglog floor is disabled");
  const double L = moderate ? std::max(loglog(eps), 0.1) : loglog(eps);
  return {std::sqrt(L) / (eps * eps), L, moderate};
}

double support_min_radius(double) { return kRingOuterLo; }

double support_max_radius(double eps) { return std::hypot(kRingOuterHi, eps); }

FrequencyLattice datum_lattice(double eps, int horizontal_modes, int vertical_modes,
                               double horizontal_spacing) {
  require_eps(eps);
  require(horizontal_spacing > 0.0, "datum lattice: non-positive horizontal spacing");
  const double lh = kTwoPi / horizontal_spacing;
  const double lv = kTwoPi / (eps / 8.0);
  return make_lattice({lh, lh, lv}, {horizontal_modes, horizontal_modes, vertical_modes});
}

LargeDatum build_u0(double eps, const FrequencyLattice& lattice, const AmplitudeOptions& opt) {
  require_eps(eps);
  const double need = eps / 8.0;
  require(lattice.spacing(2) <= need * (1.0 + 1e-12),
          "lattice resolution insufficient: need dxi3 <= " + std::to_string(need) + ", have " +
              std::to_string(lattice.spacing(2)));
  for (int a = 0; a < 2; ++a)
    require(lattice.dealias_cutoff(a) * lattice.spacing(a) >= kRingOuterHi,
            "lattice does not cover the horizontal support: retained |xi_" + std::to_string(a + 1) +
                "| must reach " + std::to_string(kRingOuterHi));
  require(lattice.dealias_cutoff(2) * lattice.spacing(2) >= eps,
          "lattice does not cover the vertical support |xi3| < eps");

  const ProfileA a{eps, need};
  const ProfileB b{eps, need};
  LargeDatum out{eps, amplitude(eps, opt), SpectralVectorField(lattice), kInf, 0.0};
  const double amp = out.amp.value;
  const auto x1 = lattice.xi(0), x2 = lattice.xi(1), x3 = lattice.xi(2);
  const auto xi2 = lattice.xi_squared();
  for (std::size_t k = 0; k < lattice.size(); ++k) {
    const double bv = b(x3[k]);
    if (bv == 0.0) continue;
    const double av = a(x1[k], x2[k]);
    if (av == 0.0) continue;
    const double c = amp * av * bv;
    out.u0.comp[0][k] = cplx{0.0, c * x2[k]};
    out.u0.comp[1][k] = cplx{0.0, -c * x1[k]};
    const double r = std::sqrt(xi2[k]);
    out.support_min_radius = std::min(out.support_min_radius, r);
    out.support_max_radius = std::max(out.support_max_radius, r);
  }
  if (out.support_max_radius == 0.0) out.support_min_radius = 0.0;
  out.u0.real_valued = true;
  out.u0.divergence_free = true;
  return out;
}

namespace {

struct SeparableParts {
  // Horizontal integrals over the strip-ring region.
  double h_mag_1;       // int |xi_h| a
  double h_mag_32;      // int (|xi_h| a)^{3/2}
  double h_diff_32;     // int (|xi1 - xi2| a)^{3/2}
  // Vertical integrals.
  double v_1;           // int b
  double v_32;          // int b^{3/2}
  double v_xi_32;       // int (|xi3| b)^{3/2}
};

SeparableParts separable_parts(double eps, const QuadratureOptions& q) {
  const ProfileA a{eps, eps / 8.0};
  const ProfileB b{eps, eps / 8.0};
  const double d_max = eps / kSqrt2;
  const double s_lo = std::sqrt(std::max(0.0, kRingOuterLo * kRingOuterLo - d_max * d_max));
  SeparableParts out{};
  const double hd = d_max / q.strip_nodes;
  const double hs = (kRingOuterHi - s_lo) / q.radial_nodes;
  for (int i = 0; i < q.strip_nodes; ++i) {
    const double d = (i + 0.5) * hd;
    const double st = a.strip(kSqrt2 * d);
    if (st == 0.0) continue;
    const double diff = kSqrt2 * d;
    for (int m = 0; m < q.radial_nodes; ++m) {
      const double s = s_lo + (m + 0.5) * hs;
      const double r = std::hypot(s, d);
      const double av = st * a.ring(r);
      if (av == 0.0) continue;
      out.h_mag_1 += r * av;
      out.h_mag_32 += std::pow(r * av, 1.5);
      out.h_diff_32 += std::pow(diff * av, 1.5);
    }
  }
  const double cell = 4.0 * hd * hs;  // four quadrants
  out.h_mag_1 *= cell;
  out.h_mag_32 *= cell;
  out.h_diff_32 *= cell;

  const double hv = 0.5 * eps / q.vertical_nodes;
  for (int i = 0; i < q.vertical_nodes; ++i) {
    const double x = 0.5 * eps + (i + 0.5) * hv;
    const double bv = b(x);
    out.v_1 += bv;
    out.v_32 += std::pow(bv, 1.5);
    out.v_xi_32 += std::pow(x * bv, 1.5);
  }
  out.v_1 *= 2.0 * hv;
  out.v_32 *= 2.0 * hv;
  out.v_xi_32 *= 2.0 * hv;
  return out;
}

// Per-block norms on a 3D midpoint grid over one octant of (s, d, xi3).
void tensor_norms(double eps, const QuadratureOptions& q, DatumNorms& out) {
  const ProfileA a{eps, eps / 8.0};
  const ProfileB b{eps, eps / 8.0};
  const auto part = lp::DyadicPartition::covering(out.rho_min, out.rho_max);
  const int nb = part.count();
  std::vector<double> full1(nb), hsum(nb), vert(nb);
  const double d_max = eps / kSqrt2;
  const double s_lo = std::sqrt(std::max(0.0, kRingOuterLo * kRingOuterLo - d_max * d_max));
  const int n = q.tensor_nodes;
  const double hd = d_max / n, hs = (kRingOuterHi - s_lo) / n, hv = 0.5 * eps / n;
  const double amp = out.amp.value;
  double total1 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = (i + 0.5) * hd;
    const double st = a.strip(kSqrt2 * d);
    if (st == 0.0) continue;
    for (int m = 0; m < n; ++m) {
      const double s = s_lo + (m + 0.5) * hs;
      const double rh = std::hypot(s, d);
      const double av = st * a.ring(rh);
      if (av == 0.0) continue;
      for (int l = 0; l < n; ++l) {
        const double x3 = 0.5 * eps + (l + 0.5) * hv;
        const double bv = b(x3);
        if (bv == 0.0) continue;
        const double mag = amp * rh * av * bv;
        const double hmag = amp * kSqrt2 * d * av * bv;
        total1 += mag;
        const lp::ActiveBlocks blk = lp::active_blocks(std::hypot(rh, x3));
        for (int c = 0; c < blk.count; ++c) {
          if (!part.contains(blk.j[c])) continue;
          const int idx = blk.j[c] - part.j_min();
          const double w = blk.w[c];
          full1[idx] += w * mag;
          hsum[idx] += std::pow(w * hmag, 1.5);
          vert[idx] += std::pow(w * x3 * mag, 1.5);
        }
      }
    }
  }
  const double cell = 8.0 * hd * hs * hv;
  out.l1 = total1 * cell;
  out.fb_minus1 = out.fb_plus1 = out.horizontal_sum = out.vertical_derivative = 0.0;
  double on_block = 0.0, off_block = 0.0;
  for (int idx = 0; idx < nb; ++idx) {
    const int j = part.j_min() + idx;
    const double l1 = full1[idx] * cell;
    out.fb_minus1 += std::ldexp(l1, -j);
    out.fb_plus1 += std::ldexp(l1, j);
    out.horizontal_sum += std::ldexp(std::pow(hsum[idx] * cell, 2.0 / 3.0), j);
    out.vertical_derivative += std::ldexp(std::pow(vert[idx] * cell, 2.0 / 3.0), j);
    if (j == 0) {
      on_block = l1;
    } else {
      off_block = std::max(off_block, l1);
    }
  }
  out.off_block_max = on_block > 0.0 ? off_block / on_block : (off_block > 0.0 ? kInf : 0.0);
}

}  // namespace

DatumNorms datum_norms(double eps, const QuadratureOptions& q, const AmplitudeOptions& opt) {
  require_eps(eps);
  require(q.radial_nodes > 0 && q.strip_nodes > 0 && q.vertical_nodes > 0 && q.tensor_nodes > 0,
          "quadrature node counts must be positive");
  DatumNorms out;
  out.eps = eps;
  out.amp = amplitude(eps, opt);
  // Smallest |xi| on the support: |xi_h| >= 11/8 and |xi3| > eps/2.
  out.rho_min = std::hypot(support_min_radius(eps), 0.5 * eps);
  out.rho_max = support_max_radius(eps);
  out.single_block = out.rho_min >= lp::kPlateauInner && out.rho_max <= lp::kPlateauOuter;
  out.third_component = 0.0;

  if (out.single_block && !q.force_tensor) {
    // Every block but j = 0 vanishes identically and psi_hat_0 = 1 on the
    // support, so each Besov norm is an L^p norm that factors.
    const SeparableParts sp = separable_parts(eps, q);
    const double amp = out.amp.value;
    out.l1 = amp * sp.h_mag_1 * sp.v_1;
    out.fb_minus1 = out.l1;
    out.fb_plus1 = out.l1;
    out.horizontal_sum = amp * std::pow(sp.h_diff_32 * sp.v_32, 2.0 / 3.0);
    out.vertical_derivative = amp * std::pow(sp.h_mag_32 * sp.v_xi_32, 2.0 / 3.0);
    out.off_block_max = 0.0;
  } else {
    tensor_norms(eps, q, out);
  }
  return out;
}

ExponentFit fit_log_log(const std::string& name, const std::vector<double>& x,
                        const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "exponent fit needs at least two points");
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, "exponent fit: non-positive value for " + name);
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  require(sxx > 0.0, "exponent fit: degenerate abscissae");
  ExponentFit f;
  f.quantity = name;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

const ExponentFit& ScalingTable::fit(const std::string& quantity) const {
  for (const auto& f : fits)
    if (f.quantity == quantity) return f;
  throw ValidationError("scaling table: no fit named " + quantity);
}

std::string ScalingTable::rows_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "eps,loglog,amplitude,loglog_floored,single_block,rho_min,rho_max,fb_minus1,fb_plus1,l1,"
        "horizontal_sum,vertical_derivative,third_component,condition_group,l1_over_sqrt_loglog,"
        "l1_over_loglog,group_over_sqrt_loglog\n";
  for (const auto& r : rows) {
    const double sq = std::sqrt(r.amp.loglog);
    os << r.eps << ',' << r.amp.loglog << ',' << r.amp.value << ',' << (r.amp.floored ? 1 : 0) << ','
       << (r.single_block ? 1 : 0) << ',' << r.rho_min << ',' << r.rho_max << ',' << r.fb_minus1
       << ',' << r.fb_plus1 << ',' << r.l1 << ',' << r.horizontal_sum << ','
       << r.vertical_derivative << ',' << r.third_component << ',' << r.group() << ','
       << r.l1 / sq << ',' << r.l1 / r.amp.loglog << ',' << r.group() / sq << '\n';
  }
  return os.str();
}

std::string ScalingTable::fits_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "quantity,slope,intercept,r2\n";
  for (const auto& f : fits) os << f.quantity << ',' << f.slope << ',' << f.intercept << ',' << f.r2 << '\n';
  return os.str();
}

ScalingTable norm_scaling_sweep(const std::vector<double>& eps_list, const QuadratureOptions& q,
                                const AmplitudeOptions& opt, int workers) {
  require(!eps_list.empty(), "norm scaling sweep: empty eps list");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    require(eps_list[i] < eps_list[i - 1], "norm scaling sweep: eps list must be strictly decreasing");
  for (double e : eps_list) require_eps(e);

  ScalingTable table;
  table.rows.resize(eps_list.size());
  parallel_for(eps_list.size(), worker_count(workers),
               [&](std::size_t i) { table.rows[i] = datum_norms(eps_list[i], q, opt); });

  if (eps_list.size() >= 2) {
    std::vector<double> x, fm, fp, grp, l1s, l1l;
    for (const auto& r : table.rows) {
      const double sq = std::sqrt(r.amp.loglog);
      x.push_back(r.eps);
      fm.push_back(r.fb_minus1 / sq);
      fp.push_back(r.fb_plus1 / sq);
      grp.push_back(r.group() / sq);
      l1s.push_back(r.l1 / sq);
      l1l.push_back(r.l1 / r.amp.loglog);
    }
    table.fits.push_back(fit_log_log("fb_minus1_over_sqrt_loglog", x, fm));
    table.fits.push_back(fit_log_log("fb_plus1_over_sqrt_loglog", x, fp));
    table.fits.push_back(fit_log_log("condition_group_over_sqrt_loglog", x, grp));
    table.fits.push_back(fit_log_log("l1_over_sqrt_loglog", x, l1s));
    table.fits.push_back(fit_log_log("l1_over_loglog", x, l1l));
  }
  return table;
}

}  // namespace nsc::data
