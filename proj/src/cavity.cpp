#include "casimir/cavity.hpp"

#include <algorithm>
#include <cmath>

#include "casimir/error.hpp"

namespace casimir {

namespace {

using cplx = std::complex<double>;

/// e^{z} − 1 without cancellation for small |z|.
cplx expm1_complex(cplx z) {
  const double a = z.real();
  const double b = z.imag();
  const double s = std::sin(0.5 * b);
  const double cos_m1 = -2.0 * s * s;  // cos b − 1
  return {std::expm1(a) * std::cos(b) + cos_m1, std::exp(a) * std::sin(b)};
}

void check_index(int i, int j) {
  if ((i != 1 && i != 2) || (j != 1 && j != 2)) {
    throw Error(ErrorCode::InvalidArgument, "mirror indices must be 1 or 2");
  }
}

}  // namespace

CavityConfig::CavityConfig(double q, MirrorModel mirror1, MirrorModel mirror2, Units units)
    : q_(q),
      units_(units),
      user1_(std::move(mirror1)),
      user2_(std::move(mirror2)),
      m1_(user1_.rescaled(1.0 / units.c)),
      m2_(user2_.rescaled(1.0 / units.c)) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw Error(ErrorCode::InvalidArgument, "mirror separation q must be positive and finite");
  }
}

double CavityConfig::internal_support() const noexcept {
  return std::min(m1_.support_max(), m2_.support_max());
}

CavityConfig CavityConfig::with_separation(double q) const {
  return CavityConfig(q, user1_, user2_, units_);
}

cplx CavityKernel::d(cplx w) const {
  // r₁r₂e^{2iωτ} = (1+δ₁)(1+δ₂)(1+E), δ = −r − 1, E = e^{2iωτ} − 1
  const cplx d1 = m1_.deficit(w);
  const cplx d2 = m2_.deficit(w);
  const cplx e = expm1_complex(cplx(0.0, 2.0 * tau_) * w);
  return -(d1 + d2 + d1 * d2 + e * (1.0 + d1) * (1.0 + d2));
}

cplx CavityKernel::d_prime(cplx w) const {
  const cplx r1 = r(1, w), r2 = r(2, w);
  return -(r_prime(1, w) * r2 + r1 * r_prime(2, w) + cplx(0.0, 2.0 * tau_) * r1 * r2) * phase(w);
}

cplx CavityKernel::gamma_a(int i, int j, cplx w, cplx wp) const {
  check_index(i, j);
  const cplx den = d(w) * d(wp);
  if (den == 0.0) throw Error(ErrorCode::Pole, "gamma_A evaluated where d[w]d[w'] = 0");
  if (i == j) {
    const int a = i;          // the mirror whose amplitudes are summed plainly
    const int b = 3 - i;      // the mirror carrying the round-trip phase
    return (r(a, w) + r(a, wp)) * (r(b, w) * phase(w) + r(b, wp) * phase(wp)) / den;
  }
  const cplx mixed = std::exp(cplx(0.0, tau_) * (w + wp));
  return -(r(1, w) + r(1, wp)) * (r(2, w) + r(2, wp)) * mixed / den;
}

cplx CavityKernel::gamma_a_diag(int i, int j, cplx w) const {
  check_index(i, j);
  const cplx dd = d(w);
  if (dd == 0.0) throw Error(ErrorCode::Pole, "gamma_A evaluated where d[w] = 0");
  const cplx prod = 4.0 * r(1, w) * r(2, w) * phase(w) / (dd * dd);
  return i == j ? prod : -prod;
}

cplx CavityKernel::gamma_a_diag_slope(int i, int j, cplx w) const {
  check_index(i, j);
  const cplx dd = d(w);
  if (dd == 0.0) throw Error(ErrorCode::Pole, "gamma_A evaluated where d[w] = 0");
  const cplx dp = d_prime(w);
  const cplx e = phase(w);
  const cplx itau(0.0, tau_);
  const cplx d2 = dd * dd;
  const cplx diag = 4.0 * r(1, w) * r(2, w) * e;  // numerator at ω' = ω
  if (i == j) {
    const int a = i;
    const int b = 3 - i;
    const cplx num = 2.0 * r_prime(a, w) * r(b, w) * e +
                     2.0 * r(a, w) * (r_prime(b, w) + 2.0 * itau * r(b, w)) * e;
    return num / d2 - diag * dp / (d2 * dd);
  }
  const cplx num = -2.0 * (r_prime(1, w) * r(2, w) + r(1, w) * r_prime(2, w)) * e -
                   diag * itau;
  return num / d2 + diag * dp / (d2 * dd);
}

cplx CavityKernel::gamma_capital(int i, int j, cplx w) const {
  check_index(i, j);
  const cplx dd = d(w);
  if (dd == 0.0) throw Error(ErrorCode::Pole, "Gamma evaluated where d[w] = 0");
  const cplx dp = d_prime(w);
  const cplx e = phase(w);
  const cplx d2 = dd * dd;
  const cplx d4 = d2 * d2;
  const cplx itau(0.0, tau_);
  if (i == j) {
    const int a = i;
    const int b = 3 - i;
    return -2.0 * r_prime(a, w) * e * (2.0 * itau * r(b, w) + r_prime(b, w)) / d2 -
           4.0 * dp * dp / d4;
  }
  return -4.0 * itau * dp / d2 + 4.0 * tau_ * tau_ * one_minus_d(w) / d2 +
         2.0 * r_prime(1, w) * r_prime(2, w) * e / d2 + 4.0 * dp * dp / d4;
}

cplx CavityKernel::gamma_capital_sum(cplx w) const {
  const cplx dd = d(w);
  if (dd == 0.0) throw Error(ErrorCode::Pole, "Gamma evaluated where d[w] = 0");
  return cplx(0.0, -4.0 * tau_) * d_prime(w) / (dd * dd);
}

Denominator cavity_denominator(const CavityConfig& cfg, double omega) {
  CavityKernel k(cfg);
  const cplx w(cfg.units().frequency_in(omega), 0.0);
  return {k.d(w), k.d_prime(w) / cfg.units().c};
}

cplx gamma_a(const CavityConfig& cfg, int i, int j, double omega, double omega_prime) {
  CavityKernel k(cfg);
  const Units& u = cfg.units();
  return k.gamma_a(i, j, cplx(u.frequency_in(omega), 0.0), cplx(u.frequency_in(omega_prime), 0.0));
}

}  // namespace casimir
