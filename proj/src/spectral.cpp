#include "nsc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nsc/kernels/kernels.hpp"

namespace nsc {

SpectralTransformer::SpectralTransformer(const FrequencyLattice& lattice)
    : lattice_(lattice), plan_(fft::plan_for(lattice.modes())), work_(lattice.size()) {}

void SpectralTransformer::to_physical_pair(const cplx* a, const double* ca, const cplx* b,
                                           const double* cb, double* out_a, double* out_b) {
  const std::size_t n = lattice_.size();
  kernels::active().pack_pair(n, a, ca, b, cb, work_.data());
  plan_->backward(work_.data());
  const double inv_v = 1.0 / lattice_.box_volume();
  for (std::size_t k = 0; k < n; ++k) {
    out_a[k] = work_[k].real() * inv_v;
    out_b[k] = work_[k].imag() * inv_v;
  }
}

void SpectralTransformer::to_spectral_pair(const double* a, const double* b, cplx* out_a,
                                           cplx* out_b) {
  const std::size_t n = lattice_.size();
  for (std::size_t k = 0; k < n; ++k) work_[k] = {a[k], b[k]};
  plan_->forward(work_.data());
  const double half_s = 0.5 * lattice_.box_volume() / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx z = work_[k];
    const cplx zm = std::conj(work_[lattice_.mirror(k)]);
    const cplx sum = z + zm;
    const cplx diff = z - zm;
    out_a[k] = half_s * sum;
    out_b[k] = half_s * cplx{diff.imag(), -diff.real()};
  }
}

void SpectralTransformer::to_spectral_single(const double* a, cplx* out) {
  const std::size_t n = lattice_.size();
  for (std::size_t k = 0; k < n; ++k) work_[k] = {a[k], 0.0};
  plan_->forward(work_.data());
  const double half_s = 0.5 * lattice_.box_volume() / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = half_s * (work_[k] + std::conj(work_[lattice_.mirror(k)]));
}

PhysicalVectorField to_physical(const SpectralVectorField& u) {
  require(u.real_valued, "to_physical: field is not flagged real-valued");
  SpectralTransformer tr(u.lattice);
  PhysicalVectorField out(u.lattice);
  tr.to_physical_pair(u.comp[0].data(), nullptr, u.comp[1].data(), nullptr, out.comp[0].data(),
                      out.comp[1].data());
  RealArray discard(u.size());
  const ComplexArray zero(u.size(), cplx{});
  tr.to_physical_pair(u.comp[2].data(), nullptr, zero.data(), nullptr, out.comp[2].data(),
                      discard.data());
  return out;
}

SpectralVectorField to_spectral(const PhysicalVectorField& u) {
  SpectralTransformer tr(u.lattice);
  SpectralVectorField out(u.lattice);
  tr.to_spectral_pair(u.comp[0].data(), u.comp[1].data(), out.comp[0].data(), out.comp[1].data());
  tr.to_spectral_single(u.comp[2].data(), out.comp[2].data());
  out.real_valued = true;
  return out;
}

PhysicalScalarField to_physical(const SpectralScalarField& f) {
  require(f.real_valued, "to_physical: field is not flagged real-valued");
  SpectralTransformer tr(f.lattice);
  PhysicalScalarField out(f.lattice);
  RealArray discard(f.lattice.size());
  const ComplexArray zero(f.lattice.size(), cplx{});
  tr.to_physical_pair(f.values.data(), nullptr, zero.data(), nullptr, out.values.data(),
                      discard.data());
  return out;
}

SpectralScalarField to_spectral(const PhysicalScalarField& f) {
  SpectralTransformer tr(f.lattice);
  SpectralScalarField out(f.lattice);
  tr.to_spectral_single(f.values.data(), out.values.data());
  return out;
}

void helmholtz_project_inplace(SpectralVectorField& f) {
  const auto& lat = f.lattice;
  const double* xi[3] = {lat.xi(0).data(), lat.xi(1).data(), lat.xi(2).data()};
  cplx* comps[3] = {f.comp[0].data(), f.comp[1].data(), f.comp[2].data()};
  kernels::active().project(f.size(), xi, lat.inv_xi_squared().data(), comps);
  for (auto& c : f.comp) c[0] = cplx{};
  f.divergence_free = true;
}

SpectralVectorField helmholtz_project(const SpectralVectorField& f) {
  SpectralVectorField out = f;
  helmholtz_project_inplace(out);
  return out;
}

SpectralScalarField divergence(const SpectralVectorField& f) {
  SpectralScalarField out(f.lattice);
  const auto x1 = f.lattice.xi(0), x2 = f.lattice.xi(1), x3 = f.lattice.xi(2);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const cplx dot = x1[k] * f.comp[0][k] + x2[k] * f.comp[1][k] + x3[k] * f.comp[2][k];
    out.values[k] = cplx{-dot.imag(), dot.real()};
  }
  out.real_valued = f.real_valued;
  return out;
}

double divergence_ratio(const SpectralVectorField& f) {
  const auto x1 = f.lattice.xi(0), x2 = f.lattice.xi(1), x3 = f.lattice.xi(2);
  const auto xi2 = f.lattice.xi_squared();
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const cplx dot = x1[k] * f.comp[0][k] + x2[k] * f.comp[1][k] + x3[k] * f.comp[2][k];
    num = std::max(num, std::abs(dot));
    const double mag =
        std::sqrt(std::norm(f.comp[0][k]) + std::norm(f.comp[1][k]) + std::norm(f.comp[2][k]));
    den = std::max(den, std::sqrt(xi2[k]) * mag);
  }
  return den == 0.0 ? 0.0 : num / den;
}

SpectralVectorField coriolis_term(const SpectralVectorField& u, double omega) {
  SpectralVectorField out(u.lattice);
  for (std::size_t k = 0; k < u.size(); ++k) {
    out.comp[0][k] = -omega * u.comp[1][k];
    out.comp[1][k] = omega * u.comp[0][k];
  }
  out.real_valued = u.real_valued;
  return out;
}

void dealias_inplace(SpectralVectorField& u) {
  const auto mask = u.lattice.dealias_mask();
  for (auto& c : u.comp)
    for (std::size_t k = 0; k < c.size(); ++k)
      if (mask[k] == 0.0) c[k] = cplx{};
}

SpectralVectorField dealias(const SpectralVectorField& u) {
  SpectralVectorField out = u;
  dealias_inplace(out);
  return out;
}

double energy(const SpectralVectorField& u) {
  double s = 0.0;
  for (const auto& c : u.comp)
    for (const auto& v : c) s += std::norm(v);
  return 0.5 * s / u.lattice.box_volume();
}

double energy(const PhysicalVectorField& u) {
  double s = 0.0;
  for (const auto& c : u.comp)
    for (double v : c) s += v * v;
  const auto& lat = u.lattice;
  return 0.5 * s * lat.physical_spacing(0) * lat.physical_spacing(1) * lat.physical_spacing(2);
}

double inner_product(const SpectralVectorField& a, const SpectralVectorField& b) {
  require(a.lattice == b.lattice, "inner_product: lattices differ");
  double s = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < a.size(); ++k) s += (std::conj(a.comp[c][k]) * b.comp[c][k]).real();
  return s / a.lattice.box_volume();
}

NonlinearEvaluator::NonlinearEvaluator(const FrequencyLattice& lattice, Dealiasing rule)
    : transformer_(lattice), rule_(rule) {
  if (rule == Dealiasing::two_thirds) {
    for (int a = 0; a < 3; ++a)
      if (lattice.retained_modes(a) < 4)
        throw ValidationError("lattice too small for dealiasing: fewer than 4 retained modes on axis " +
                              std::to_string(a + 1));
  }
  const std::size_t n = lattice.size();
  for (auto& m : masked_) m.resize(n);
  for (auto& p : physical_) p.resize(n);
  for (auto& p : product_) p.resize(n);
}

double NonlinearEvaluator::evaluate(const SpectralVectorField& u, SpectralVectorField& out) {
  const auto& lat = lattice();
  require(u.lattice == lat && out.lattice == lat, "nonlinear_term: lattice mismatch");
  require(u.real_valued, "nonlinear_term: field is not flagged real-valued");
  const std::size_t n = lat.size();

  const auto mask = lat.dealias_mask();
  for (int c = 0; c < 3; ++c) {
    if (rule_ == Dealiasing::two_thirds) {
      for (std::size_t k = 0; k < n; ++k) masked_[c][k] = u.comp[c][k] * mask[k];
    } else {
      std::copy(u.comp[c].begin(), u.comp[c].end(), masked_[c].begin());
    }
  }

  // Twelve real fields: u_i and d_j u_i, transformed two at a time.
  struct Source {
    int comp;
    int axis;  // -1: no derivative
  };
  std::array<Source, 12> src{};
  for (int i = 0; i < 3; ++i) src[i] = {i, -1};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) src[3 + 3 * i + j] = {i, j};
  for (int p = 0; p < 12; p += 2) {
    const Source a = src[p], b = src[p + 1];
    transformer_.to_physical_pair(masked_[a.comp].data(), a.axis < 0 ? nullptr : lat.xi(a.axis).data(),
                                  masked_[b.comp].data(), b.axis < 0 ? nullptr : lat.xi(b.axis).data(),
                                  physical_[p].data(), physical_[p + 1].data());
  }

  const double* uu[3] = {physical_[0].data(), physical_[1].data(), physical_[2].data()};
  const double* grad[9];
  for (int q = 0; q < 9; ++q) grad[q] = physical_[3 + q].data();
  double* prod[3] = {product_[0].data(), product_[1].data(), product_[2].data()};
  kernels::active().advect(n, uu, grad, prod);

  double max_speed2 = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    max_speed2 = std::max(max_speed2, uu[0][k] * uu[0][k] + uu[1][k] * uu[1][k] + uu[2][k] * uu[2][k]);

  transformer_.to_spectral_pair(prod[0], prod[1], out.comp[0].data(), out.comp[1].data());
  transformer_.to_spectral_single(prod[2], out.comp[2].data());
  if (rule_ == Dealiasing::two_thirds) dealias_inplace(out);
  out.real_valued = true;
  out.divergence_free = false;
  return std::sqrt(max_speed2);
}

SpectralVectorField nonlinear_term(const SpectralVectorField& u) {
  NonlinearEvaluator eval(u.lattice);
  SpectralVectorField out(u.lattice);
  eval.evaluate(u, out);
  return out;
}

SpectralVectorField random_field(const FrequencyLattice& lattice, const RandomFieldOptions& opt) {
  SpectralVectorField u(lattice);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto xi2 = lattice.xi_squared();
  const double lo2 = opt.min_radius * opt.min_radius;
  const double hi2 = opt.max_radius * opt.max_radius;
  for (std::size_t k = 0; k < u.size(); ++k) {
    std::array<cplx, 3> v;
    for (auto& c : v) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      c = {re, im};
    }
    const bool in_band = xi2[k] > 0.0 && xi2[k] >= lo2 && xi2[k] <= hi2 &&
                         (!opt.dealiased_support || lattice.retained(k));
    for (int c = 0; c < 3; ++c) u.comp[c][k] = in_band ? v[c] : cplx{};
  }
  symmetrize_hermitian(u);
  if (opt.divergence_free) helmholtz_project_inplace(u);
  return u;
}

}  // namespace nsc
