// extern "C" wrappers around the C++ core. Each entry point funnels its body
// through `guard`, which turns exceptions into status codes and records the
// message in thread-local storage.

#include "casimir/casimir_c.h"

#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "casimir/cavity.hpp"
#include "casimir/error.hpp"
#include "casimir/mirror.hpp"
#include "casimir/quasistatic.hpp"
#include "casimir/rigid_body.hpp"
#include "casimir/spectral.hpp"
#include "casimir/time_domain.hpp"

struct casimir_mirror {
  casimir::MirrorModel model;
};
struct casimir_cavity {
  casimir::CavityConfig config;
};
struct casimir_trajectory {
  casimir::Trajectory trajectory;
};
struct casimir_force {
  casimir::ForceRecord record;
};
struct casimir_trace {
  casimir::RigidBodyTrace trace;
};

namespace {

thread_local std::string t_last_error;
thread_local int t_pole_index = 0;
thread_local double t_achieved = 0.0;

casimir_status to_status(casimir::ErrorCode code) {
  using casimir::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return CASIMIR_ERR_INVALID_ARGUMENT;
    case ErrorCode::Range: return CASIMIR_ERR_RANGE;
    case ErrorCode::UnsupportedModel: return CASIMIR_ERR_UNSUPPORTED_MODEL;
    case ErrorCode::Pole: return CASIMIR_ERR_POLE;
    case ErrorCode::Accuracy: return CASIMIR_ERR_ACCURACY;
    case ErrorCode::Consistency: return CASIMIR_ERR_CONSISTENCY;
    case ErrorCode::Precondition: return CASIMIR_ERR_PRECONDITION;
    case ErrorCode::Degenerate: return CASIMIR_ERR_DEGENERATE;
    case ErrorCode::Io: return CASIMIR_ERR_IO;
  }
  return CASIMIR_ERR_INTERNAL;
}

template <class F>
casimir_status guard(F&& body) {
  t_last_error.clear();
  try {
    body();
    return CASIMIR_OK;
  } catch (const casimir::PoleError& e) {
    t_last_error = e.what();
    t_pole_index = e.resonance_index();
    return CASIMIR_ERR_POLE;
  } catch (const casimir::AccuracyError& e) {
    t_last_error = e.what();
    t_achieved = e.achieved();
    return CASIMIR_ERR_ACCURACY;
  } catch (const casimir::Error& e) {
    t_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
  } catch (const std::exception& e) {
    t_last_error = e.what();
  } catch (...) {
    t_last_error = "unknown failure";
  }
  return CASIMIR_ERR_INTERNAL;
}

template <class T>
void require(const T* p, const char* name) {
  if (p == nullptr) {
    throw casimir::Error(casimir::ErrorCode::InvalidArgument, std::string(name) + " must not be NULL");
  }
}

casimir::Units units_of(casimir_units u) {
  if (u == CASIMIR_UNITS_NATURAL) return casimir::Units::natural();
  if (u == CASIMIR_UNITS_SI) return casimir::Units::si();
  throw casimir::Error(casimir::ErrorCode::InvalidArgument, "unknown unit system");
}

casimir::QuadratureSettings settings_of(const casimir_quadrature_settings* s) {
  casimir::QuadratureSettings out;
  if (s == nullptr) return out;
  if (!(s->rel_tol > 0.0) || !(s->residue_tol > 0.0)) {
    throw casimir::Error(casimir::ErrorCode::InvalidArgument, "quadrature tolerances must be positive");
  }
  out.rel_tol = s->rel_tol;
  out.residue_tol = s->residue_tol;
  switch (s->tail) {
    case CASIMIR_TAIL_AUTO: out.oscillatory.tail = casimir::TailMethod::Auto; break;
    case CASIMIR_TAIL_COMPLEX_RAY: out.oscillatory.tail = casimir::TailMethod::ComplexRay; break;
    case CASIMIR_TAIL_RICHARDSON: out.oscillatory.tail = casimir::TailMethod::Richardson; break;
    default: throw casimir::Error(casimir::ErrorCode::InvalidArgument, "unknown tail method");
  }
  return out;
}

void copy_matrix(const casimir::Matrix2& m, double out[2][2]) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out[i][j] = m[i][j];
  }
}

void export_coefficients(const casimir::QuasistaticCoefficients& c, casimir_coefficients* out) {
  copy_matrix(c.kappa, out->kappa);
  copy_matrix(c.lambda, out->lambda);
  copy_matrix(c.mu, out->mu);
  out->kappa_sum = c.kappa_sum;
  out->lambda_sum = c.lambda_sum;
  out->mu_sum = c.mu_sum;
  out->mu_sum_direct = c.mu_sum_direct;
  out->achieved_tolerance = c.achieved_tolerance;
  out->imaginary_residue = c.imaginary_residue;
  out->evaluations = c.evaluations;
  out->method = c.method == casimir::CoefficientMethod::ClosedFormPerfect ? CASIMIR_METHOD_CLOSED_FORM
                                                                          : CASIMIR_METHOD_QUADRATURE;
}

casimir::QuasistaticCoefficients import_coefficients(const casimir_coefficients* in) {
  casimir::QuasistaticCoefficients c;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      c.kappa[i][j] = in->kappa[i][j];
      c.lambda[i][j] = in->lambda[i][j];
      c.mu[i][j] = in->mu[i][j];
    }
  }
  c.kappa_sum = in->kappa_sum;
  c.lambda_sum = in->lambda_sum;
  c.mu_sum = in->mu_sum;
  return c;
}

void export_statics(const casimir::CasimirStatics& s, casimir_statics* out) {
  out->F = s.F;
  out->has_U = s.U.has_value() ? 1 : 0;
  out->U = s.U.value_or(0.0);
  out->E_f = s.E_f;
  out->delta_m = s.delta_m;
  out->achieved_tolerance = s.achieved_tolerance;
}

void export_pair(std::complex<double> v, double out[2]) {
  out[0] = v.real();
  out[1] = v.imag();
}

casimir::Motion import_motion(const casimir_motion* m) {
  if (m == nullptr) return casimir::Motion::rest();
  switch (m->kind) {
    case CASIMIR_MOTION_REST: return casimir::Motion::rest();
    case CASIMIR_MOTION_POLYNOMIAL: return casimir::Motion::polynomial(m->velocity, m->acceleration, m->t_on, m->ramp);
    case CASIMIR_MOTION_SINUSOID: return casimir::Motion::sinusoid(m->amplitude, m->omega, m->phase, m->t_on, m->ramp);
    case CASIMIR_MOTION_PULSE: return casimir::Motion::gaussian_pulse(m->amplitude, m->center, m->width);
  }
  throw casimir::Error(casimir::ErrorCode::InvalidArgument, "unknown motion kind");
}

casimir::RigidBodyState import_state(const casimir_rigid_state* s) {
  casimir::RigidBodyState r;
  r.t = s->t;
  r.q1 = s->q1;
  r.q2 = s->q2;
  r.v = s->v;
  r.e1 = s->e1;
  r.e2 = s->e2;
  r.E_f = s->E_f;
  r.F = s->F;
  r.c = s->c;
  return r;
}

}  // namespace

extern "C" {

const char* casimir_version(void) { return "1.0.0"; }

const char* casimir_status_string(casimir_status status) {
  switch (status) {
    case CASIMIR_OK: return "ok";
    case CASIMIR_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CASIMIR_ERR_RANGE: return "out of range";
    case CASIMIR_ERR_UNSUPPORTED_MODEL: return "unsupported model";
    case CASIMIR_ERR_POLE: return "pole";
    case CASIMIR_ERR_ACCURACY: return "accuracy";
    case CASIMIR_ERR_CONSISTENCY: return "consistency";
    case CASIMIR_ERR_PRECONDITION: return "precondition";
    case CASIMIR_ERR_DEGENERATE: return "degenerate";
    case CASIMIR_ERR_IO: return "i/o";
    case CASIMIR_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* casimir_last_error(void) { return t_last_error.c_str(); }
int casimir_last_pole_index(void) { return t_pole_index; }
double casimir_last_achieved(void) { return t_achieved; }

// ---- mirrors

casimir_status casimir_mirror_perfect(casimir_mirror** out) {
  return guard([&] {
    require(out, "out");
    *out = new casimir_mirror{casimir::MirrorModel::perfect()};
  });
}

casimir_status casimir_mirror_lorentzian(double cutoff, casimir_mirror** out) {
  return guard([&] {
    require(out, "out");
    *out = new casimir_mirror{casimir::MirrorModel::lorentzian(cutoff)};
  });
}

casimir_status casimir_mirror_tabulated(const double* omega, const double* re, const double* im, size_t n,
                                        casimir_mirror** out) {
  return guard([&] {
    require(out, "out");
    require(omega, "omega");
    require(re, "re");
    require(im, "im");
    std::vector<double> w(omega, omega + n);
    std::vector<casimir::cd> r(n);
    for (size_t k = 0; k < n; ++k) r[k] = {re[k], im[k]};
    *out = new casimir_mirror{casimir::MirrorModel::tabulated(std::move(w), std::move(r))};
  });
}

casimir_status casimir_mirror_from_csv(const char* path, casimir_mirror** out) {
  return guard([&] {
    require(out, "out");
    require(path, "path");
    *out = new casimir_mirror{casimir::MirrorModel::from_csv(path)};
  });
}

void casimir_mirror_free(casimir_mirror* mirror) { delete mirror; }

casimir_status casimir_mirror_kind_of(const casimir_mirror* mirror, casimir_mirror_kind* kind) {
  return guard([&] {
    require(mirror, "mirror");
    require(kind, "kind");
    switch (mirror->model.kind()) {
      case casimir::MirrorKind::Perfect: *kind = CASIMIR_MIRROR_PERFECT; break;
      case casimir::MirrorKind::Lorentzian: *kind = CASIMIR_MIRROR_LORENTZIAN; break;
      case casimir::MirrorKind::Tabulated: *kind = CASIMIR_MIRROR_TABULATED; break;
    }
  });
}

casimir_status casimir_mirror_describe(const casimir_mirror* mirror, char* buffer, size_t size, size_t* needed) {
  return guard([&] {
    require(mirror, "mirror");
    const std::string d = mirror->model.describe();
    if (needed != nullptr) *needed = d.size();
    if (buffer != nullptr && size > 0) {
      const size_t n = std::min(size - 1, d.size());
      std::memcpy(buffer, d.data(), n);
      buffer[n] = '\0';
    }
  });
}

casimir_status casimir_mirror_reflectivity(const casimir_mirror* mirror, double omega, double* re, double* im) {
  return guard([&] {
    require(mirror, "mirror");
    const auto r = mirror->model.reflectivity(omega);
    if (re) *re = r.real();
    if (im) *im = r.imag();
  });
}

casimir_status casimir_mirror_derivative(const casimir_mirror* mirror, double omega, double* re, double* im) {
  return guard([&] {
    require(mirror, "mirror");
    const auto r = mirror->model.derivative(omega);
    if (re) *re = r.real();
    if (im) *im = r.imag();
  });
}

casimir_status casimir_mirror_transmission(const casimir_mirror* mirror, double omega, double* re, double* im,
                                           int* supported) {
  return guard([&] {
    require(mirror, "mirror");
    const auto s = mirror->model.transmission(omega);
    if (re) *re = s.value.real();
    if (im) *im = s.value.imag();
    if (supported) *supported = s.supported ? 1 : 0;
  });
}

void casimir_physicality_defaults(casimir_physicality_tolerances* tol) {
  if (tol == nullptr) return;
  const casimir::PhysicalityTolerances d;
  *tol = {d.bound, d.symmetry, d.transparency, d.kramers_kronig};
}

casimir_status casimir_mirror_verify(const casimir_mirror* mirror, const double* grid, size_t n,
                                     const casimir_physicality_tolerances* tol, casimir_physicality_report* report) {
  return guard([&] {
    require(mirror, "mirror");
    require(grid, "grid");
    require(report, "report");
    casimir::PhysicalityTolerances t;
    if (tol != nullptr) t = {tol->bound, tol->symmetry, tol->transparency, tol->kramers_kronig};
    const auto r = casimir::verify_physicality(mirror->model, std::span<const double>(grid, n), t);
    *report = {r.exempt ? 1 : 0,    r.transparent ? 1 : 0, r.max_bound_excess, r.max_symmetry_residual,
               r.transparency_tail, r.kk_residual,         r.kk_residual_coarse, r.passes ? 1 : 0};
  });
}

// ---- cavity

casimir_status casimir_cavity_create(double q, const casimir_mirror* mirror1, const casimir_mirror* mirror2,
                                     casimir_units units, casimir_cavity** out) {
  return guard([&] {
    require(out, "out");
    require(mirror1, "mirror1");
    require(mirror2, "mirror2");
    *out = new casimir_cavity{casimir::CavityConfig(q, mirror1->model, mirror2->model, units_of(units))};
  });
}

casimir_status casimir_cavity_with_separation(const casimir_cavity* cavity, double q, casimir_cavity** out) {
  return guard([&] {
    require(cavity, "cavity");
    require(out, "out");
    *out = new casimir_cavity{cavity->config.with_separation(q)};
  });
}

void casimir_cavity_free(casimir_cavity* cavity) { delete cavity; }

casimir_status casimir_cavity_info(const casimir_cavity* cavity, double* q, double* tau, casimir_units* units) {
  return guard([&] {
    require(cavity, "cavity");
    if (q) *q = cavity->config.q();
    if (tau) *tau = cavity->config.tau();
    if (units) {
      *units = cavity->config.units().system == casimir::UnitSystem::SI ? CASIMIR_UNITS_SI : CASIMIR_UNITS_NATURAL;
    }
  });
}

casimir_status casimir_cavity_constants(const casimir_cavity* cavity, double* hbar, double* c) {
  return guard([&] {
    require(cavity, "cavity");
    if (hbar) *hbar = cavity->config.units().hbar;
    if (c) *c = cavity->config.units().c;
  });
}

void casimir_quadrature_defaults(casimir_quadrature_settings* settings) {
  if (settings == nullptr) return;
  const casimir::QuadratureSettings d;
  *settings = {d.rel_tol, d.residue_tol, CASIMIR_TAIL_AUTO};
}

// ---- quasistatic

casimir_status casimir_coefficients_perfect(const casimir_cavity* cavity, casimir_coefficients* out) {
  return guard([&] {
    require(cavity, "cavity");
    require(out, "out");
    export_coefficients(casimir::coefficients_perfect(cavity->config), out);
  });
}

casimir_status casimir_coefficients_partial(const casimir_cavity* cavity, const casimir_quadrature_settings* settings,
                                            casimir_coefficients* out) {
  return guard([&] {
    require(cavity, "cavity");
    require(out, "out");
    export_coefficients(casimir::coefficients_partial(cavity->config, settings_of(settings)), out);
  });
}

casimir_status casimir_coefficients_compute(const casimir_cavity* cavity, const casimir_quadrature_settings* settings,
                                            casimir_coefficients* out) {
  return guard([&] {
    require(cavity, "cavity");
    require(out, "out");
    export_coefficients(casimir::coefficients(cavity->config, settings_of(settings)), out);
  });
}

casimir_status casimir_energy_perfect(double q, casimir_units units, casimir_statics* out) {
  return guard([&] {
    require(out, "out");
    export_statics(casimir::casimir_energy_perfect(q, units_of(units)), out);
  });
}

casimir_status casimir_force_partial(const casimir_cavity* cavity, const casimir_quadrature_settings* settings,
                                     casimir_statics* out) {
  return guard([&] {
    require(cavity, "cavity");
    require(out, "out");
    export_statics(casimir::casimir_force_partial(cavity->config, settings_of(settings)), out);
  });
}

casimir_status casimir_statics_compute(const casimir_cavity* cavity, const casimir_quadrature_settings* settings,
                                       casimir_statics* out) {
  return guard([&] {
    require(cavity, "cavity");
    require(out, "out");
    const auto& cfg = cavity->config;
    if (cfg.both_perfect()) {
      export_statics(casimir::casimir_energy_perfect(cfg.q(), cfg.units()), out);
    } else {
      export_statics(casimir::casimir_force_quadrature(cfg, settings_of(settings)), out);
    }
  });
}

casimir_status casimir_global_mass_correction(const casimir_cavity* cavity, double gap_tol,
                                              const casimir_quadrature_settings* settings,
                                              casimir_mass_correction* out) {
  return guard([&] {
    require(cavity, "cavity");
    require(out, "out");
    const auto m = casimir::global_mass_correction(cavity->config, gap_tol, settings_of(settings));
    *out = {m.via_gamma, m.via_force, m.relative_gap, m.achieved_tolerance,
            m.method == casimir::CoefficientMethod::ClosedFormPerfect ? CASIMIR_METHOD_CLOSED_FORM
                                                                      : CASIMIR_METHOD_QUADRATURE};
  });
}

// ---- spectral

casimir_status casimir_denominator(const casimir_cavity* cavity, double omega, double d[2], double d_prime[2]) {
  return guard([&] {
    require(cavity, "cavity");
    const auto r = casimir::cavity_denominator(cavity->config, omega);
    if (d) export_pair(r.d, d);
    if (d_prime) export_pair(r.d_prime, d_prime);
  });
}

casimir_status casimir_gamma_a(const casimir_cavity* cavity, int i, int j, double omega, double omega_prime,
                               double out[2]) {
  return guard([&] {
    require(cavity, "cavity");
    require(out, "out");
    export_pair(casimir::gamma_a(cavity->config, i, j, omega, omega_prime), out);
  });
}

casimir_status casimir_gamma_capital(const casimir_cavity* cavity, int i, int j, double omega, double out[2]) {
  return guard([&] {
    require(cavity, "cavity");
    require(out, "out");
    export_pair(casimir::gamma_capital(cavity->config, i, j, omega), out);
  });
}

namespace {
casimir::SpectralOptions spectral_options(double exclusion_radius) {
  casimir::SpectralOptions o;
  if (exclusion_radius > 0.0) o.exclusion_radius = exclusion_radius;
  return o;
}
}  // namespace

casimir_status casimir_chi_perfect(const casimir_cavity* cavity, double omega, double exclusion_radius,
                                   casimir_susceptibility* out) {
  return guard([&] {
    require(cavity, "cavity");
    require(out, "out");
    const auto s = casimir::chi_perfect(cavity->config, omega, spectral_options(exclusion_radius));
    out->omega = s.omega;
    copy_matrix(s.dispersive, out->re);
    copy_matrix(s.dissipative, out->im);
  });
}

casimir_status casimir_chi_compound_perfect(const casimir_cavity* cavity, double omega, double exclusion_radius,
                                            double* dispersive, double* dissipative) {
  return guard([&] {
    require(cavity, "cavity");
    const auto s = casimir::chi_compound_perfect(cavity->config, omega, spectral_options(exclusion_radius));
    if (dispersive) *dispersive = s.dispersive;
    if (dissipative) *dissipative = s.dissipative;
  });
}

casimir_status casimir_perfect_poles(const casimir_cavity* cavity, double omega_min, double omega_max, int compound,
                                     int* indices, size_t capacity, size_t* count) {
  return guard([&] {
    require(cavity, "cavity");
    const auto p = casimir::perfect_poles(cavity->config, omega_min, omega_max, compound != 0);
    if (count) *count = p.size();
    if (indices) {
      for (size_t k = 0; k < std::min(capacity, p.size()); ++k) indices[k] = p[k];
    }
  });
}

casimir_status casimir_chi_a(const casimir_cavity* cavity, double omega, const casimir_quadrature_settings* settings,
                             casimir_susceptibility* out, double sum[2], double* achieved_tolerance) {
  return guard([&] {
    require(cavity, "cavity");
    const auto r = casimir::chi_A_matrix(cavity->config, omega, settings_of(settings));
    if (out) {
      out->omega = r.omega;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          out->re[i][j] = r.chi[i][j].real();
          out->im[i][j] = r.chi[i][j].imag();
        }
      }
    }
    if (sum) export_pair(r.sum, sum);
    if (achieved_tolerance) *achieved_tolerance = r.achieved_tolerance;
  });
}

casimir_status casimir_fluctuation_spectrum(const casimir_cavity* cavity, int i, int j, double omega, double* out) {
  return guard([&] {
    require(cavity, "cavity");
    require(out, "out");
    *out = casimir::fluctuation_spectrum(cavity->config, i, j, omega);
  });
}

// ---- trajectories and forces

casimir_status casimir_trajectory_analytic(double t0, double dt, size_t samples, const casimir_motion* mirror1,
                                           const casimir_motion* mirror2, casimir_trajectory** out) {
  return guard([&] {
    require(out, "out");
    *out = new casimir_trajectory{
        casimir::Trajectory::analytic(t0, dt, samples, import_motion(mirror1), import_motion(mirror2))};
  });
}

casimir_status casimir_trajectory_tabulated(double t0, double dt, const double* dq1, const double* dq2,
                                            size_t samples, casimir_trajectory** out) {
  return guard([&] {
    require(out, "out");
    require(dq1, "dq1");
    require(dq2, "dq2");
    *out = new casimir_trajectory{casimir::Trajectory::tabulated(
        t0, dt, std::vector<double>(dq1, dq1 + samples), std::vector<double>(dq2, dq2 + samples))};
  });
}

casimir_status casimir_trajectory_from_csv(const char* path, casimir_trajectory** out) {
  return guard([&] {
    require(out, "out");
    require(path, "path");
    *out = new casimir_trajectory{casimir::Trajectory::from_csv(path)};
  });
}

void casimir_trajectory_free(casimir_trajectory* trajectory) { delete trajectory; }

size_t casimir_trajectory_size(const casimir_trajectory* trajectory) {
  return trajectory == nullptr ? 0 : trajectory->trajectory.size();
}

casimir_status casimir_trajectory_samples(const casimir_trajectory* trajectory, double* t, double* dq1, double* dq2) {
  return guard([&] {
    require(trajectory, "trajectory");
    const auto& tr = trajectory->trajectory;
    for (size_t k = 0; k < tr.size(); ++k) {
      if (t) t[k] = tr.time(k);
      if (dq1) dq1[k] = tr.samples(1)[k];
      if (dq2) dq2[k] = tr.samples(2)[k];
    }
  });
}

casimir_status casimir_spectral_energy_fraction(const casimir_trajectory* trajectory, double omega_max,
                                                double* fraction) {
  return guard([&] {
    require(trajectory, "trajectory");
    require(fraction, "fraction");
    *fraction = casimir::spectral_energy_fraction(trajectory->trajectory, omega_max);
  });
}

casimir_status casimir_force_perfect(const casimir_trajectory* trajectory, const casimir_cavity* cavity,
                                     double displacement_bound, casimir_force** out) {
  return guard([&] {
    require(trajectory, "trajectory");
    require(cavity, "cavity");
    require(out, "out");
    casimir::TimeDomainOptions opt;
    if (displacement_bound > 0.0) opt.displacement_bound = displacement_bound;
    *out = new casimir_force{casimir::motional_force_perfect(trajectory->trajectory, cavity->config, opt)};
  });
}

casimir_status casimir_force_spectral_perfect(const casimir_trajectory* trajectory, const casimir_cavity* cavity,
                                              int exclude_poles, casimir_force** out) {
  return guard([&] {
    require(trajectory, "trajectory");
    require(cavity, "cavity");
    require(out, "out");
    casimir::SpectralForceOptions opt;
    opt.exclude_poles = exclude_poles != 0;
    *out = new casimir_force{
        casimir::motional_force_spectral(trajectory->trajectory, casimir::perfect_source(cavity->config), opt)};
  });
}

casimir_status casimir_force_spectral_quasistatic(const casimir_trajectory* trajectory,
                                                  const casimir_coefficients* coefficients, casimir_force** out) {
  return guard([&] {
    require(trajectory, "trajectory");
    require(coefficients, "coefficients");
    require(out, "out");
    *out = new casimir_force{casimir::motional_force_spectral(
        trajectory->trajectory, casimir::quasistatic_source(import_coefficients(coefficients)))};
  });
}

casimir_status casimir_force_quasistatic(const casimir_trajectory* trajectory, const casimir_coefficients* coefficients,
                                         double tau, casimir_force** out) {
  return guard([&] {
    require(trajectory, "trajectory");
    require(coefficients, "coefficients");
    require(out, "out");
    *out = new casimir_force{
        casimir::quasistatic_force(trajectory->trajectory, import_coefficients(coefficients), tau)};
  });
}

casimir_status casimir_force_single(const casimir_trajectory* trajectory, int mirror, casimir_units units,
                                    casimir_force** out) {
  return guard([&] {
    require(trajectory, "trajectory");
    require(out, "out");
    *out = new casimir_force{casimir::motional_force_single(trajectory->trajectory, mirror, units_of(units))};
  });
}

void casimir_force_free(casimir_force* force) { delete force; }

size_t casimir_force_size(const casimir_force* force) { return force == nullptr ? 0 : force->record.t.size(); }

casimir_status casimir_force_data(const casimir_force* force, double* t, double* dF1, double* dF2, double* dF_total) {
  return guard([&] {
    require(force, "force");
    const auto& r = force->record;
    const size_t n = r.t.size();
    if (t) std::copy(r.t.begin(), r.t.end(), t);
    if (dF1) std::copy(r.dF1.begin(), r.dF1.begin() + static_cast<std::ptrdiff_t>(n), dF1);
    if (dF2) std::copy(r.dF2.begin(), r.dF2.begin() + static_cast<std::ptrdiff_t>(n), dF2);
    if (dF_total) std::copy(r.dF_total.begin(), r.dF_total.begin() + static_cast<std::ptrdiff_t>(n), dF_total);
  });
}

size_t casimir_force_message_count(const casimir_force* force, int kind) {
  if (force == nullptr) return 0;
  return kind == 0 ? force->record.warnings.size() : force->record.annotations.size();
}

const char* casimir_force_message(const casimir_force* force, int kind, size_t index) {
  if (force == nullptr) return nullptr;
  const auto& v = kind == 0 ? force->record.warnings : force->record.annotations;
  return index < v.size() ? v[index].c_str() : nullptr;
}

// ---- rigid body

double casimir_mass_correction_of(double E_f, double F, double q, double c) {
  return casimir::mass_correction(E_f, F, q, c);
}

casimir_status casimir_rigid_cavity_at_rest(double q, double m1, double m2, double F, double E_f, casimir_units units,
                                            casimir_rigid_state* out) {
  return guard([&] {
    require(out, "out");
    const auto s = casimir::cavity_at_rest(q, m1, m2, F, E_f, units_of(units));
    *out = {s.t, s.q1, s.q2, s.v, s.e1, s.e2, s.E_f, s.F, s.c};
  });
}

casimir_status casimir_center_of_inertia(const casimir_rigid_state* state, double* Q) {
  return guard([&] {
    require(state, "state");
    require(Q, "Q");
    *Q = casimir::center_of_inertia(import_state(state));
  });
}

casimir_status casimir_simulate_accelerated_cavity(const casimir_rigid_state* initial, double a, double duration,
                                                   double dt, double v_over_c_bound, double energy_tolerance,
                                                   casimir_trace** out) {
  return guard([&] {
    require(initial, "initial");
    require(out, "out");
    casimir::RigidBodyOptions opt;
    if (v_over_c_bound > 0.0) opt.v_over_c_bound = v_over_c_bound;
    if (energy_tolerance > 0.0) opt.energy_tolerance = energy_tolerance;
    *out = new casimir_trace{casimir::simulate_accelerated_cavity(import_state(initial), a, duration, dt, opt)};
  });
}

void casimir_trace_free(casimir_trace* trace) { delete trace; }

size_t casimir_trace_size(const casimir_trace* trace) { return trace == nullptr ? 0 : trace->trace.rows.size(); }

casimir_status casimir_trace_rows(const casimir_trace* trace, casimir_trace_row* rows) {
  return guard([&] {
    require(trace, "trace");
    require(rows, "rows");
    size_t k = 0;
    for (const auto& r : trace->trace.rows) rows[k++] = {r.t, r.q1, r.q2, r.v, r.e1, r.e2, r.E, r.P, r.Q, r.residual};
  });
}

casimir_status casimir_trace_summary_of(const casimir_trace* trace, casimir_trace_summary* out) {
  return guard([&] {
    require(trace, "trace");
    require(out, "out");
    const auto& t = trace->trace;
    *out = {t.max_relative_residual, t.max_energy_drift, t.inertial_mass, t.expected_mass, t.mass_relative_gap};
  });
}

}  // extern "C"
