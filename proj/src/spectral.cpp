#include "casimir/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "casimir/error.hpp"
#include "casimir/oscillatory.hpp"

namespace casimir {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// t·cot t and t/sin t, with series inside the removable neighbourhood of 0
double t_cot_t(double t, double radius) {
  if (std::abs(t) < radius) {
    const double t2 = t * t;
    return 1.0 - t2 / 3.0 - t2 * t2 / 45.0;
  }
  return t / std::tan(t);
}

double t_over_sin(double t, double radius) {
  if (std::abs(t) < radius) {
    const double t2 = t * t;
    return 1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0;
  }
  return t / std::sin(t);
}

void require_perfect(const CavityConfig& cfg, const char* what) {
  if (!cfg.both_perfect()) {
    throw Error(ErrorCode::UnsupportedModel, std::string(what) + " needs two perfect mirrors");
  }
}

int nearest_index(double x) { return static_cast<int>(std::lround(x / kPi)); }

[[noreturn]] void throw_pole(int m, double x) {
  throw PoleError(m, "susceptibility diverges at omega*tau = " + std::to_string(m) +
                         "*pi (requested omega*tau = " + std::to_string(x) + ")");
}

// Dispersive parts ξ̃₁₁ and ξ̃₁₂ in internal units. x = ωτ.
//   ξ̃₁₁ = −N cot x,  ξ̃₁₂ = N / sin x,  N = x(x² − π²)/(12πτ³)
struct PerfectDispersive {
  double d11, d12;
};

PerfectDispersive perfect_dispersive(double x, double tau, const SpectralOptions& opt) {
  const double scale = 1.0 / (12.0 * kPi * tau * tau * tau);
  const int m = nearest_index(x);
  const double t = x - m * kPi;
  if (std::abs(m) >= 2 && std::abs(t) < opt.exclusion_radius) throw_pole(m, x);

  if (m == 0 && std::abs(t) < opt.series_radius) {
    const double c = (x * x - kPi * kPi) * scale;
    return {-c * t_cot_t(x, opt.series_radius), c * t_over_sin(x, opt.series_radius)};
  }
  if (std::abs(m) == 1 && std::abs(t) < opt.series_radius) {
    // x² − π² = (x − mπ)(x + mπ); cot x = cot t, sin x = −sin t
    const double c = x * (x + m * kPi) * scale;
    return {-c * t_cot_t(t, opt.series_radius), -c * t_over_sin(t, opt.series_radius)};
  }
  const double n = x * (x * x - kPi * kPi) * scale;
  return {-n / std::tan(x), n / std::sin(x)};
}

// Compound dispersive part 2N tan(x/2), internal units
double compound_dispersive(double x, double tau, const SpectralOptions& opt) {
  const double scale = 1.0 / (12.0 * kPi * tau * tau * tau);
  const int m = nearest_index(x);
  const double t = x - m * kPi;
  const bool odd = (m % 2) != 0;
  if (odd && std::abs(m) >= 3 && std::abs(t) < opt.exclusion_radius) throw_pole(m, x);
  if (std::abs(m) == 1 && std::abs(t) < opt.series_radius) {
    // tan(x/2) = −cot(t/2), and t·cot(t/2) = 2·s(t/2)
    const double c = x * (x + m * kPi) * scale;
    return -4.0 * c * t_cot_t(0.5 * t, opt.series_radius);
  }
  return 2.0 * x * (x * x - kPi * kPi) * scale * std::tan(0.5 * x);
}

}  // namespace

SusceptibilityMatrix chi_perfect(const CavityConfig& cfg, double omega, const SpectralOptions& opt) {
  require_perfect(cfg, "chi_perfect");
  if (!std::isfinite(omega)) throw Error(ErrorCode::InvalidArgument, "omega must be finite");
  const Units& u = cfg.units();
  const double tau = cfg.q();
  const double w = u.frequency_in(omega);
  const auto disp = perfect_dispersive(w * tau, tau, opt);
  const double xi11 = w * w * w / (12.0 * kPi);

  SusceptibilityMatrix s;
  s.omega = omega;
  s.dispersive = {{{u.stiffness_out(disp.d11), u.stiffness_out(disp.d12)},
                   {u.stiffness_out(disp.d12), u.stiffness_out(disp.d11)}}};
  s.dissipative = {{{u.stiffness_out(xi11), 0.0}, {0.0, u.stiffness_out(xi11)}}};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) s.chi[i][j] = {s.dispersive[i][j], s.dissipative[i][j]};
  }
  return s;
}

CompoundSusceptibility chi_compound_perfect(const CavityConfig& cfg, double omega,
                                            const SpectralOptions& opt) {
  require_perfect(cfg, "chi_compound_perfect");
  if (!std::isfinite(omega)) throw Error(ErrorCode::InvalidArgument, "omega must be finite");
  const Units& u = cfg.units();
  const double tau = cfg.q();
  const double w = u.frequency_in(omega);
  CompoundSusceptibility c;
  c.omega = omega;
  c.dispersive = u.stiffness_out(compound_dispersive(w * tau, tau, opt));
  c.dissipative = u.stiffness_out(w * w * w / (6.0 * kPi));
  c.chi = {c.dispersive, c.dissipative};
  return c;
}

std::vector<int> perfect_poles(const CavityConfig& cfg, double omega_min, double omega_max,
                               bool compound) {
  const double x0 = cfg.units().frequency_in(omega_min) * cfg.q();
  const double x1 = cfg.units().frequency_in(omega_max) * cfg.q();
  std::vector<int> out;
  for (int m = static_cast<int>(std::ceil(x0 / kPi)); m * kPi <= x1; ++m) {
    if (std::abs(m) < 2) continue;
    if (compound && m % 2 == 0) continue;
    if (compound && std::abs(m) < 3) continue;
    out.push_back(m);
  }
  return out;
}

ChiAResult chi_A_matrix(const CavityConfig& cfg, double omega, const QuadratureSettings& s) {
  if (cfg.both_perfect() || !cfg.both_partial()) {
    throw Error(ErrorCode::UnsupportedModel,
                "chi_A needs two partially transmitting mirrors (the integral has no decaying tail otherwise)");
  }
  if (!std::isfinite(omega)) throw Error(ErrorCode::InvalidArgument, "omega must be finite");
  // χ(−ω) = conj χ(ω) for a real response kernel
  if (omega < 0.0) {
    ChiAResult r = chi_A_matrix(cfg, -omega, s);
    r.omega = omega;
    for (auto& row : r.chi) {
      for (auto& v : row) v = std::conj(v);
    }
    r.sum = std::conj(r.sum);
    return r;
  }

  const CavityKernel k(cfg);
  const double w = cfg.units().frequency_in(omega);
  const cplx pref(0.0, 1.0 / (4.0 * kPi));
  constexpr int pairs[3][2] = {{1, 1}, {1, 2}, {2, 2}};
  using V = CVec<3>;
  auto up = [&](cplx z) {
    V v;
    for (int p = 0; p < 3; ++p) v[p] = pref * z * (w + z) * k.gamma_a(pairs[p][0], pairs[p][1], z, w + z);
    return v;
  };
  auto down = [&](cplx z) {
    V v;
    for (int p = 0; p < 3; ++p) v[p] = pref * z * (w - z) * k.gamma_a(pairs[p][0], pairs[p][1], -z, w - z);
    return v;
  };
  OscillatoryOptions o = s.oscillatory;
  o.rel_tol = s.rel_tol;
  std::vector<double> cuts;
  if (w > 0.0) cuts.push_back(w);
  auto res = integrate_semi_infinite<V>(up, down, cfg.q(), cfg.analytic(), cfg.internal_support(), o, cuts);

  ChiAResult r;
  r.omega = omega;
  const double c = cfg.units().stiffness_out(1.0);
  r.chi[0][0] = c * res.value[0];
  r.chi[0][1] = r.chi[1][0] = c * res.value[1];
  r.chi[1][1] = c * res.value[2];
  r.sum = r.chi[0][0] + 2.0 * r.chi[0][1] + r.chi[1][1];
  r.evaluations = res.evaluations;
  r.achieved_tolerance = res.abs_error / std::max(magnitude(res.value), 1e-300);
  if (!res.converged) throw AccuracyError(r.achieved_tolerance, "chi_A quadrature did not converge");
  return r;
}

cplx chi_A(const CavityConfig& cfg, int i, int j, double omega, const QuadratureSettings& s) {
  if ((i != 1 && i != 2) || (j != 1 && j != 2)) {
    throw Error(ErrorCode::InvalidArgument, "mirror indices must be 1 or 2");
  }
  return chi_A_matrix(cfg, omega, s).chi[i - 1][j - 1];
}

double fluctuation_spectrum(const CavityConfig& cfg, int i, int j, double omega) {
  if ((i != 1 && i != 2) || (j != 1 && j != 2)) {
    throw Error(ErrorCode::InvalidArgument, "mirror indices must be 1 or 2");
  }
  if (!cfg.both_perfect()) {
    throw Error(ErrorCode::UnsupportedModel,
                "the dissipative susceptibility is available in closed form for perfect mirrors only");
  }
  if (!(omega > 0.0)) return 0.0;
  if (i != j) return 0.0;
  const Units& u = cfg.units();
  const double w = u.frequency_in(omega);
  return 2.0 * u.hbar * u.stiffness_out(w * w * w / (12.0 * kPi));
}

}  // namespace casimir
