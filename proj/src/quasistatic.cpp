#include "casimir/quasistatic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "casimir/error.hpp"

namespace casimir {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr cplx kI(0.0, 1.0);

// slot of (i, j) in the packed symmetric layout {11, 12, 22}
constexpr int kPairs[3][2] = {{1, 1}, {1, 2}, {2, 2}};

void fill_symmetric(Matrix2& m, double v11, double v12, double v22) {
  m[0][0] = v11;
  m[0][1] = m[1][0] = v12;
  m[1][1] = v22;
}

double sum_of(const Matrix2& m) { return m[0][0] + m[0][1] + m[1][0] + m[1][1]; }

OscillatoryOptions oscillatory_for(const QuadratureSettings& s) {
  OscillatoryOptions o = s.oscillatory;
  o.rel_tol = s.rel_tol;
  return o;
}

void require_partial(const CavityConfig& cfg, const char* what) {
  if (!cfg.both_partial()) {
    throw Error(ErrorCode::UnsupportedModel,
                std::string(what) + " needs two partially transmitting mirrors");
  }
}

double relative_imag(cplx v, double scale) {
  return std::abs(v.imag()) / std::max(std::abs(v.real()), scale);
}

}  // namespace

QuasistaticCoefficients coefficients_perfect(const CavityConfig& cfg) {
  if (!cfg.both_perfect()) {
    throw Error(ErrorCode::UnsupportedModel, "closed-form coefficients need two perfect mirrors");
  }
  const double q = cfg.q();
  const Units& u = cfg.units();
  QuasistaticCoefficients c;
  c.method = CoefficientMethod::ClosedFormPerfect;

  const double k = u.stiffness_out(-kPi / (12.0 * q * q * q));
  fill_symmetric(c.kappa, k, -k, k);
  fill_symmetric(c.lambda, 0.0, 0.0, 0.0);
  const double pref = 1.0 / (12.0 * kPi * q);
  const double mu11 = u.mass_out(-pref * (1.0 + kPi * kPi / 3.0));
  const double mu12 = u.mass_out(-pref * (-1.0 + kPi * kPi / 6.0));
  fill_symmetric(c.mu, mu11, mu12, mu11);

  c.kappa_sum = sum_of(c.kappa);
  c.lambda_sum = 0.0;
  c.mu_sum = sum_of(c.mu);
  c.mu_sum_direct = u.mass_out(-kPi / (12.0 * q));
  return c;
}

CasimirStatics casimir_energy_perfect(double q, const Units& units) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw Error(ErrorCode::InvalidArgument, "mirror separation q must be positive and finite");
  }
  CasimirStatics s;
  s.U = units.energy_out(-kPi / (24.0 * q));
  s.F = units.force_out(kPi / (24.0 * q * q));
  s.E_f = -s.F * q;
  s.delta_m = units.mass_out(-kPi / (12.0 * q));
  return s;
}

CasimirStatics casimir_force_quadrature(const CavityConfig& cfg, const QuadratureSettings& s) {
  const CavityKernel k(cfg);
  const double tau = cfg.q();
  // 1 − 1/d = −r₁r₂e^{2iωτ}/d
  auto up = [&](cplx z) -> cplx { return -z * k.one_minus_d(z) / k.d(z) / (2.0 * kPi); };
  auto down = [&](cplx z) -> cplx { return -z * k.one_minus_d(-z) / k.d(-z) / (2.0 * kPi); };
  auto res = integrate_semi_infinite<cplx>(up, down, tau, cfg.analytic(), cfg.internal_support(),
                                           oscillatory_for(s));
  const double F = res.value.real();
  const double achieved = res.abs_error / std::abs(F);
  if (!res.converged || achieved > std::max(s.rel_tol, 1e-3)) {
    throw AccuracyError(achieved, "Casimir force quadrature did not converge");
  }
  if (relative_imag(res.value, 0.0) > s.residue_tol) {
    throw Error(ErrorCode::Consistency, "Casimir force integral has an imaginary residue of " +
                                            std::to_string(relative_imag(res.value, 0.0)));
  }
  const Units& u = cfg.units();
  CasimirStatics out;
  out.F = u.force_out(F);
  out.E_f = -out.F * cfg.q();
  out.delta_m = u.mass_out(-2.0 * F * cfg.q());
  out.achieved_tolerance = achieved;
  if (cfg.both_perfect()) out.U = out.E_f;
  return out;
}

CasimirStatics casimir_force_partial(const CavityConfig& cfg, const QuadratureSettings& s) {
  require_partial(cfg, "casimir_force_partial");
  return casimir_force_quadrature(cfg, s);
}

cplx gamma_capital(const CavityConfig& cfg, int i, int j, double omega) {
  const CavityKernel k(cfg);
  const double c = cfg.units().c;
  return k.gamma_capital(i, j, cplx(cfg.units().frequency_in(omega), 0.0)) / (c * c);
}

QuasistaticCoefficients coefficients_quadrature(const CavityConfig& cfg,
                                                const QuadratureSettings& s) {
  const CavityKernel k(cfg);
  const double tau = cfg.q();
  using V = CVec<10>;
  // slots: κ{11,12,22}, λ{11,12,22}, μ{11,12,22}, μ from ΣΓ
  auto integrand = [&](cplx z, double sign) -> V {
    const cplx w = sign * z;  // frequency at which the kernels are evaluated
    V v;
    for (int p = 0; p < 3; ++p) {
      const int i = kPairs[p][0], j = kPairs[p][1];
      const cplx g = k.gamma_a_diag(i, j, w);
      const cplx gs = k.gamma_a_diag_slope(i, j, w);
      v[p] = -sign * kI * z * z * g / (4.0 * kPi);
      v[3 + p] = (z * g + sign * z * z * gs) / (4.0 * kPi);
      v[6 + p] = sign * kI * z * z * k.gamma_capital(i, j, w) / (8.0 * kPi);
    }
    v[9] = sign * kI * z * z * k.gamma_capital_sum(w) / (8.0 * kPi);
    return v;
  };
  auto up = [&](cplx z) { return integrand(z, 1.0); };
  auto down = [&](cplx z) { return integrand(z, -1.0); };
  auto res = integrate_semi_infinite<V>(up, down, tau, cfg.analytic(), cfg.internal_support(),
                                        oscillatory_for(s));
  const V& v = res.value;

  const double kscale = std::abs(v[0]);
  const double mscale = std::abs(v[6]);
  QuasistaticCoefficients c;
  c.method = CoefficientMethod::Quadrature;
  c.tail = res.tail;
  c.evaluations = res.evaluations;
  c.achieved_tolerance = res.abs_error / std::max(kscale, mscale);
  for (int p = 0; p < 3; ++p) {
    c.imaginary_residue = std::max({c.imaginary_residue, relative_imag(v[p], kscale),
                                    relative_imag(v[3 + p], kscale * tau),
                                    relative_imag(v[6 + p], mscale)});
  }
  c.imaginary_residue = std::max(c.imaginary_residue, relative_imag(v[9], mscale));

  if (!res.converged) {
    throw AccuracyError(c.achieved_tolerance, "quasistatic coefficient quadrature did not converge");
  }
  if (c.imaginary_residue > s.residue_tol) {
    throw Error(ErrorCode::Consistency, "quasistatic integrals have an imaginary residue of " +
                                            std::to_string(c.imaginary_residue));
  }

  const Units& u = cfg.units();
  fill_symmetric(c.kappa, u.stiffness_out(v[0].real()), u.stiffness_out(v[1].real()),
                 u.stiffness_out(v[2].real()));
  fill_symmetric(c.lambda, u.viscosity_out(v[3].real()), u.viscosity_out(v[4].real()),
                 u.viscosity_out(v[5].real()));
  fill_symmetric(c.mu, u.mass_out(v[6].real()), u.mass_out(v[7].real()), u.mass_out(v[8].real()));
  c.kappa_sum = sum_of(c.kappa);
  c.lambda_sum = sum_of(c.lambda);
  c.mu_sum = sum_of(c.mu);
  c.mu_sum_direct = u.mass_out(v[9].real());
  return c;
}

QuasistaticCoefficients coefficients_partial(const CavityConfig& cfg, const QuadratureSettings& s) {
  require_partial(cfg, "coefficients_partial");
  return coefficients_quadrature(cfg, s);
}

QuasistaticCoefficients coefficients(const CavityConfig& cfg, const QuadratureSettings& s) {
  if (cfg.both_perfect()) return coefficients_perfect(cfg);
  return coefficients_quadrature(cfg, s);
}

MassCorrection global_mass_correction(const CavityConfig& cfg, double gap_tol,
                                      const QuadratureSettings& s) {
  MassCorrection m;
  if (cfg.both_perfect()) {
    const auto c = coefficients_perfect(cfg);
    const auto st = casimir_energy_perfect(cfg.q(), cfg.units());
    m.method = CoefficientMethod::ClosedFormPerfect;
    m.via_gamma = c.mu_sum;
    m.via_force = st.delta_m;
  } else {
    const CavityKernel k(cfg);
    auto up = [&](cplx z) -> cplx { return kI * z * z * k.gamma_capital_sum(z) / (8.0 * kPi); };
    auto down = [&](cplx z) -> cplx { return -kI * z * z * k.gamma_capital_sum(-z) / (8.0 * kPi); };
    auto res = integrate_semi_infinite<cplx>(up, down, cfg.q(), cfg.analytic(),
                                             cfg.internal_support(), oscillatory_for(s));
    if (!res.converged) {
      throw AccuracyError(res.abs_error / std::abs(res.value), "mass correction quadrature did not converge");
    }
    const auto st = casimir_force_quadrature(cfg, s);
    m.method = CoefficientMethod::Quadrature;
    m.via_gamma = cfg.units().mass_out(res.value.real());
    m.via_force = st.delta_m;
    m.achieved_tolerance = std::max(res.abs_error / std::abs(res.value), st.achieved_tolerance);
  }
  m.relative_gap = std::abs(m.via_gamma - m.via_force) / std::abs(m.via_force);
  if (m.relative_gap > gap_tol) {
    throw Error(ErrorCode::Consistency, "global mass correction routes disagree: relative gap " +
                                            std::to_string(m.relative_gap));
  }
  return m;
}

}  // namespace casimir
