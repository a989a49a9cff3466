#pragma once

#include <array>
#include <complex>

#include "casimir/mirror.hpp"
#include "casimir/units.hpp"

namespace casimir {

/// Two mirrors a distance q apart. Mirror frequencies and q are given in the
/// configuration's unit system; internal copies are kept in natural units
/// (ħ = c = 1, τ = q).
class CavityConfig {
 public:
  CavityConfig(double q, MirrorModel mirror1, MirrorModel mirror2, Units units = Units::natural());

  /// Separation in the user's length unit.
  double q() const noexcept { return q_; }
  /// Round-trip-half delay q/c in the user's time unit.
  double tau() const noexcept { return q_ / units_.c; }
  const Units& units() const noexcept { return units_; }

  /// Mirror in the user's units (as supplied).
  const MirrorModel& mirror(int i) const { return i == 1 ? user1_ : user2_; }
  /// Mirror rescaled to internal frequency units.
  const MirrorModel& internal_mirror(int i) const { return i == 1 ? m1_ : m2_; }

  bool both_perfect() const noexcept { return m1_.is_perfect() && m2_.is_perfect(); }
  bool both_partial() const noexcept { return !m1_.is_perfect() && !m2_.is_perfect(); }
  bool analytic() const noexcept { return m1_.is_analytic() && m2_.is_analytic(); }
  /// Largest internal frequency both mirrors accept.
  double internal_support() const noexcept;

  CavityConfig with_separation(double q) const;

 private:
  double q_;
  Units units_;
  MirrorModel user1_, user2_;
  MirrorModel m1_, m2_;
};

/// d[ω] = 1 − r₁r₂e^{2iωτ} and its frequency derivative.
struct Denominator {
  std::complex<double> d;
  std::complex<double> d_prime;
};

/// Cavity kernels in internal units. Accept complex frequencies for analytic
/// mirror models, which the contour quadrature relies on.
class CavityKernel {
 public:
  using cplx = std::complex<double>;

  CavityKernel(const MirrorModel& m1, const MirrorModel& m2, double tau)
      : m1_(m1), m2_(m2), tau_(tau) {}
  explicit CavityKernel(const CavityConfig& cfg)
      : CavityKernel(cfg.internal_mirror(1), cfg.internal_mirror(2), cfg.q()) {}

  double tau() const noexcept { return tau_; }
  const MirrorModel& mirror(int i) const { return i == 1 ? m1_ : m2_; }

  cplx r(int i, cplx w) const { return mirror(i).reflectivity(w); }
  cplx r_prime(int i, cplx w) const { return mirror(i).derivative(w); }
  cplx phase(cplx w) const { return std::exp(cplx(0.0, 2.0 * tau_) * w); }

  /// d[ω], cancellation-free near ω = 0 through the reflectivity deficits.
  cplx d(cplx w) const;
  cplx d_prime(cplx w) const;
  /// 1 − d = r₁r₂e^{2iωτ}
  cplx one_minus_d(cplx w) const { return r(1, w) * r(2, w) * phase(w); }

  /// γ^A_ij[ω, ω'].
  cplx gamma_a(int i, int j, cplx w, cplx wp) const;
  /// γ^A_ij[ω, ω] and ∂_ω γ^A_ij[ω, ω'] at ω' = ω (derivative on one slot only).
  cplx gamma_a_diag(int i, int j, cplx w) const;
  cplx gamma_a_diag_slope(int i, int j, cplx w) const;
  /// Γ_ij[ω] = −∂_ω∂_ω' γ^A_ij[ω, ω']|_{ω'=ω}, in closed form.
  cplx gamma_capital(int i, int j, cplx w) const;
  /// Σ_ij Γ_ij = −4iτ d'/d².
  cplx gamma_capital_sum(cplx w) const;

 private:
  const MirrorModel& m1_;
  const MirrorModel& m2_;
  double tau_;
};

Denominator cavity_denominator(const CavityConfig& cfg, double omega);
std::complex<double> gamma_a(const CavityConfig& cfg, int i, int j, double omega, double omega_prime);

}  // namespace casimir
