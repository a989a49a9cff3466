/*
 * C interface to the cavity motional-response library.
 *
 * Objects are opaque handles created by *_create / constructor functions and
 * released by the matching *_free. Every fallible call returns a
 * casimir_status; on failure the message, and for pole and accuracy failures
 * the extra detail, can be read back on the same thread.
 *
 * Quantities are in the unit system chosen when the cavity was created:
 * natural units (hbar = c = 1, lengths in the user's unit) or SI.
 */
#ifndef CASIMIR_C_H
#define CASIMIR_C_H

#include <stddef.h>

#if defined(_WIN32)
#define CASIMIR_API __declspec(dllexport)
#else
#define CASIMIR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum casimir_status {
  CASIMIR_OK = 0,
  CASIMIR_ERR_INVALID_ARGUMENT = 1,
  CASIMIR_ERR_RANGE = 2,
  CASIMIR_ERR_UNSUPPORTED_MODEL = 3,
  CASIMIR_ERR_POLE = 4,
  CASIMIR_ERR_ACCURACY = 5,
  CASIMIR_ERR_CONSISTENCY = 6,
  CASIMIR_ERR_PRECONDITION = 7,
  CASIMIR_ERR_DEGENERATE = 8,
  CASIMIR_ERR_IO = 9,
  CASIMIR_ERR_INTERNAL = 10
} casimir_status;

typedef enum casimir_units { CASIMIR_UNITS_NATURAL = 0, CASIMIR_UNITS_SI = 1 } casimir_units;

typedef struct casimir_mirror casimir_mirror;
typedef struct casimir_cavity casimir_cavity;
typedef struct casimir_trajectory casimir_trajectory;
typedef struct casimir_force casimir_force;
typedef struct casimir_trace casimir_trace;

CASIMIR_API const char* casimir_version(void);
CASIMIR_API const char* casimir_status_string(casimir_status status);

/* Message of the last failed call on this thread ("" if none). */
CASIMIR_API const char* casimir_last_error(void);
/* Resonance index m (omega*tau = m*pi) of the last CASIMIR_ERR_POLE. */
CASIMIR_API int casimir_last_pole_index(void);
/* Achieved relative accuracy attached to the last CASIMIR_ERR_ACCURACY. */
CASIMIR_API double casimir_last_achieved(void);

/* ---- mirrors ------------------------------------------------------------ */

typedef enum casimir_mirror_kind {
  CASIMIR_MIRROR_PERFECT = 0,
  CASIMIR_MIRROR_LORENTZIAN = 1,
  CASIMIR_MIRROR_TABULATED = 2
} casimir_mirror_kind;

CASIMIR_API casimir_status casimir_mirror_perfect(casimir_mirror** out);
CASIMIR_API casimir_status casimir_mirror_lorentzian(double cutoff, casimir_mirror** out);
/* Samples at omega[k] >= 0, strictly increasing; r = re + i*im. */
CASIMIR_API casimir_status casimir_mirror_tabulated(const double* omega, const double* re, const double* im,
                                                    size_t n, casimir_mirror** out);
/* CSV file with header omega,re_r,im_r. */
CASIMIR_API casimir_status casimir_mirror_from_csv(const char* path, casimir_mirror** out);
CASIMIR_API void casimir_mirror_free(casimir_mirror* mirror);

CASIMIR_API casimir_status casimir_mirror_kind_of(const casimir_mirror* mirror, casimir_mirror_kind* kind);
/* Writes a NUL-terminated description; *needed receives the full length. */
CASIMIR_API casimir_status casimir_mirror_describe(const casimir_mirror* mirror, char* buffer, size_t size,
                                                   size_t* needed);
CASIMIR_API casimir_status casimir_mirror_reflectivity(const casimir_mirror* mirror, double omega, double* re,
                                                       double* im);
CASIMIR_API casimir_status casimir_mirror_derivative(const casimir_mirror* mirror, double omega, double* re,
                                                     double* im);
/* s = 1 + r; *supported is 0 for a perfect mirror. */
CASIMIR_API casimir_status casimir_mirror_transmission(const casimir_mirror* mirror, double omega, double* re,
                                                       double* im, int* supported);

typedef struct casimir_physicality_tolerances {
  double bound;
  double symmetry;
  double transparency;
  double kramers_kronig;
} casimir_physicality_tolerances;

typedef struct casimir_physicality_report {
  int exempt;
  int transparent;
  double max_bound_excess;
  double max_symmetry_residual;
  double transparency_tail;
  double kk_residual;
  double kk_residual_coarse;
  int passes;
} casimir_physicality_report;

CASIMIR_API void casimir_physicality_defaults(casimir_physicality_tolerances* tol);
/* tol may be NULL for the defaults. */
CASIMIR_API casimir_status casimir_mirror_verify(const casimir_mirror* mirror, const double* grid, size_t n,
                                                 const casimir_physicality_tolerances* tol,
                                                 casimir_physicality_report* report);

/* ---- cavity ------------------------------------------------------------- */

/* Copies both mirrors; they may be freed afterwards. Mirror frequencies are
 * read in the chosen unit system. */
CASIMIR_API casimir_status casimir_cavity_create(double q, const casimir_mirror* mirror1,
                                                 const casimir_mirror* mirror2, casimir_units units,
                                                 casimir_cavity** out);
CASIMIR_API casimir_status casimir_cavity_with_separation(const casimir_cavity* cavity, double q,
                                                          casimir_cavity** out);
CASIMIR_API void casimir_cavity_free(casimir_cavity* cavity);
CASIMIR_API casimir_status casimir_cavity_info(const casimir_cavity* cavity, double* q, double* tau,
                                               casimir_units* units);
/* hbar and c of the cavity's unit system. */
CASIMIR_API casimir_status casimir_cavity_constants(const casimir_cavity* cavity, double* hbar, double* c);

typedef enum casimir_tail {
  CASIMIR_TAIL_AUTO = 0,
  CASIMIR_TAIL_COMPLEX_RAY = 1,
  CASIMIR_TAIL_RICHARDSON = 2
} casimir_tail;

typedef struct casimir_quadrature_settings {
  double rel_tol;     /* relative tolerance of the adaptive quadrature */
  double residue_tol; /* limit on |Im I|/|I| for physically real integrals */
  casimir_tail tail;
} casimir_quadrature_settings;

CASIMIR_API void casimir_quadrature_defaults(casimir_quadrature_settings* settings);

/* ---- quasistatic coefficients and statics ------------------------------- */

typedef enum casimir_method { CASIMIR_METHOD_CLOSED_FORM = 0, CASIMIR_METHOD_QUADRATURE = 1 } casimir_method;

typedef struct casimir_coefficients {
  double kappa[2][2];
  double lambda[2][2];
  double mu[2][2];
  double kappa_sum;
  double lambda_sum;
  double mu_sum;
  double mu_sum_direct;
  double achieved_tolerance;
  double imaginary_residue;
  int evaluations;
  casimir_method method;
} casimir_coefficients;

typedef struct casimir_statics {
  double F;
  double U;
  int has_U;
  double E_f;
  double delta_m;
  double achieved_tolerance;
} casimir_statics;

typedef struct casimir_mass_correction {
  double via_gamma;
  double via_force;
  double relative_gap;
  double achieved_tolerance;
  casimir_method method;
} casimir_mass_correction;

/* settings may be NULL for the defaults in all calls below. */
CASIMIR_API casimir_status casimir_coefficients_perfect(const casimir_cavity* cavity, casimir_coefficients* out);
CASIMIR_API casimir_status casimir_coefficients_partial(const casimir_cavity* cavity,
                                                        const casimir_quadrature_settings* settings,
                                                        casimir_coefficients* out);
/* Closed form for perfect mirrors, quadrature otherwise. */
CASIMIR_API casimir_status casimir_coefficients_compute(const casimir_cavity* cavity,
                                                        const casimir_quadrature_settings* settings,
                                                        casimir_coefficients* out);

CASIMIR_API casimir_status casimir_energy_perfect(double q, casimir_units units, casimir_statics* out);
CASIMIR_API casimir_status casimir_force_partial(const casimir_cavity* cavity,
                                                 const casimir_quadrature_settings* settings, casimir_statics* out);
/* Closed form for perfect mirrors, quadrature otherwise. */
CASIMIR_API casimir_status casimir_statics_compute(const casimir_cavity* cavity,
                                                   const casimir_quadrature_settings* settings, casimir_statics* out);

CASIMIR_API casimir_status casimir_global_mass_correction(const casimir_cavity* cavity, double gap_tol,
                                                          const casimir_quadrature_settings* settings,
                                                          casimir_mass_correction* out);

/* ---- spectral response -------------------------------------------------- */

/* d[omega] and d'[omega] as (re, im) pairs. */
CASIMIR_API casimir_status casimir_denominator(const casimir_cavity* cavity, double omega, double d[2],
                                               double d_prime[2]);
CASIMIR_API casimir_status casimir_gamma_a(const casimir_cavity* cavity, int i, int j, double omega,
                                           double omega_prime, double out[2]);
CASIMIR_API casimir_status casimir_gamma_capital(const casimir_cavity* cavity, int i, int j, double omega,
                                                 double out[2]);

typedef struct casimir_susceptibility {
  double omega;
  double re[2][2]; /* dispersive part */
  double im[2][2]; /* dissipative part */
} casimir_susceptibility;

/* exclusion_radius <= 0 selects the default (in units of omega*tau). */
CASIMIR_API casimir_status casimir_chi_perfect(const casimir_cavity* cavity, double omega, double exclusion_radius,
                                               casimir_susceptibility* out);
CASIMIR_API casimir_status casimir_chi_compound_perfect(const casimir_cavity* cavity, double omega,
                                                        double exclusion_radius, double* dispersive,
                                                        double* dissipative);
/* Resonance indices inside [omega_min, omega_max]; *count receives the total
 * even when it exceeds capacity. */
CASIMIR_API casimir_status casimir_perfect_poles(const casimir_cavity* cavity, double omega_min, double omega_max,
                                                 int compound, int* indices, size_t capacity, size_t* count);
/* Antisymmetric part for partially transmitting mirrors. sum may be NULL. */
CASIMIR_API casimir_status casimir_chi_a(const casimir_cavity* cavity, double omega,
                                         const casimir_quadrature_settings* settings, casimir_susceptibility* out,
                                         double sum[2], double* achieved_tolerance);
CASIMIR_API casimir_status casimir_fluctuation_spectrum(const casimir_cavity* cavity, int i, int j, double omega,
                                                        double* out);

/* ---- trajectories and motional forces ----------------------------------- */

typedef enum casimir_motion_kind {
  CASIMIR_MOTION_REST = 0,
  CASIMIR_MOTION_POLYNOMIAL = 1,
  CASIMIR_MOTION_SINUSOID = 2,
  CASIMIR_MOTION_PULSE = 3
} casimir_motion_kind;

/* Polynomial: v*s + a*s^2/2, sinusoid: amplitude*sin(omega*s + phase), both
 * with s = t - t_on and switched on smoothly over `ramp`. Pulse: Gaussian of
 * the given amplitude, center and width. */
typedef struct casimir_motion {
  casimir_motion_kind kind;
  double t_on;
  double ramp;
  double velocity;
  double acceleration;
  double amplitude;
  double omega;
  double phase;
  double center;
  double width;
} casimir_motion;

CASIMIR_API casimir_status casimir_trajectory_analytic(double t0, double dt, size_t samples,
                                                       const casimir_motion* mirror1, const casimir_motion* mirror2,
                                                       casimir_trajectory** out);
CASIMIR_API casimir_status casimir_trajectory_tabulated(double t0, double dt, const double* dq1, const double* dq2,
                                                        size_t samples, casimir_trajectory** out);
CASIMIR_API casimir_status casimir_trajectory_from_csv(const char* path, casimir_trajectory** out);
CASIMIR_API void casimir_trajectory_free(casimir_trajectory* trajectory);
CASIMIR_API size_t casimir_trajectory_size(const casimir_trajectory* trajectory);
/* Each output array holds casimir_trajectory_size() values; any may be NULL. */
CASIMIR_API casimir_status casimir_trajectory_samples(const casimir_trajectory* trajectory, double* t, double* dq1,
                                                      double* dq2);
CASIMIR_API casimir_status casimir_spectral_energy_fraction(const casimir_trajectory* trajectory, double omega_max,
                                                            double* fraction);

CASIMIR_API casimir_status casimir_force_perfect(const casimir_trajectory* trajectory, const casimir_cavity* cavity,
                                                 double displacement_bound, casimir_force** out);
CASIMIR_API casimir_status casimir_force_spectral_perfect(const casimir_trajectory* trajectory,
                                                          const casimir_cavity* cavity, int exclude_poles,
                                                          casimir_force** out);
CASIMIR_API casimir_status casimir_force_spectral_quasistatic(const casimir_trajectory* trajectory,
                                                              const casimir_coefficients* coefficients,
                                                              casimir_force** out);
CASIMIR_API casimir_status casimir_force_quasistatic(const casimir_trajectory* trajectory,
                                                     const casimir_coefficients* coefficients, double tau,
                                                     casimir_force** out);
CASIMIR_API casimir_status casimir_force_single(const casimir_trajectory* trajectory, int mirror,
                                                casimir_units units, casimir_force** out);
CASIMIR_API void casimir_force_free(casimir_force* force);
CASIMIR_API size_t casimir_force_size(const casimir_force* force);
CASIMIR_API casimir_status casimir_force_data(const casimir_force* force, double* t, double* dF1, double* dF2,
                                              double* dF_total);
/* kind 0: warnings, kind 1: annotations. */
CASIMIR_API size_t casimir_force_message_count(const casimir_force* force, int kind);
CASIMIR_API const char* casimir_force_message(const casimir_force* force, int kind, size_t index);

/* ---- rigid body --------------------------------------------------------- */

typedef struct casimir_rigid_state {
  double t;
  double q1, q2;
  double v;
  double e1, e2;
  double E_f;
  double F;
  double c;
} casimir_rigid_state;

typedef struct casimir_trace_row {
  double t, q1, q2, v, e1, e2, E, P, Q;
  double residual;
} casimir_trace_row;

typedef struct casimir_trace_summary {
  double max_relative_residual;
  double max_energy_drift;
  double inertial_mass;
  double expected_mass;
  double mass_relative_gap;
} casimir_trace_summary;

CASIMIR_API double casimir_mass_correction_of(double E_f, double F, double q, double c);
CASIMIR_API casimir_status casimir_rigid_cavity_at_rest(double q, double m1, double m2, double F, double E_f,
                                                        casimir_units units, casimir_rigid_state* out);
CASIMIR_API casimir_status casimir_center_of_inertia(const casimir_rigid_state* state, double* Q);
/* v_over_c_bound and energy_tolerance <= 0 select the defaults. */
CASIMIR_API casimir_status casimir_simulate_accelerated_cavity(const casimir_rigid_state* initial, double a,
                                                               double duration, double dt, double v_over_c_bound,
                                                               double energy_tolerance, casimir_trace** out);
CASIMIR_API void casimir_trace_free(casimir_trace* trace);
CASIMIR_API size_t casimir_trace_size(const casimir_trace* trace);
CASIMIR_API casimir_status casimir_trace_rows(const casimir_trace* trace, casimir_trace_row* rows);
CASIMIR_API casimir_status casimir_trace_summary_of(const casimir_trace* trace, casimir_trace_summary* out);

#ifdef __cplusplus
}
#endif

#endif /* CASIMIR_C_H */
