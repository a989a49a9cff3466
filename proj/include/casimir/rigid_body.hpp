#pragma once

#include <vector>

#include "casimir/units.hpp"

namespace casimir {

/// Two mirrors held a fixed distance apart by the static Casimir stress,
/// with the field energy E_f stored between them. Energies, forces and
/// positions are in the user's units; `c` comes from the unit system.
struct RigidBodyState {
  double t = 0.0;
  double q1 = 0.0, q2 = 1.0;
  double v = 0.0;  // common velocity q₁' = q₂'
  double e1 = 0.0, e2 = 0.0;
  double E_f = 0.0;
  double F = 0.0;  // force on mirror 1 is +F, on mirror 2 is −F
  double c = 1.0;

  double separation() const { return q2 - q1; }
  double energy() const { return e1 + e2 + E_f; }
  /// p_i = e_i v/c².
  double momentum1() const { return e1 * v / (c * c); }
  double momentum2() const { return e2 * v / (c * c); }
  /// c²P = e₁q₁' + e₂q₂' + (E_f − Fq)(q₁' + q₂')/2.
  double momentum() const;
  double mass_correction() const;
};

/// δm = (E_f − Fq)/c².
double mass_correction(double E_f, double F, double q, double c = 1.0);

/// Q = [e₁q₁ + e₂q₂ + E_f(q₁ + q₂)/2]/E. Throws ErrorCode::Degenerate when E = 0.
double center_of_inertia(const RigidBodyState& s);

/// Mirrors at ±q/2 at rest with energies m_i c², field energy E_f and stress F.
RigidBodyState cavity_at_rest(double q, double m1, double m2, double F, double E_f,
                              const Units& units = Units::natural());

struct TraceRow {
  double t, q1, q2, v, e1, e2, E, P, Q;
  double residual;  // c²P − EQ', with Q' from finite differences of Q along the trace
};

struct RigidBodyOptions {
  double v_over_c_bound = 1e-3;
  /// Allowed relative drift of the total energy E.
  double energy_tolerance = 1e-10;
};

struct RigidBodyTrace {
  std::vector<TraceRow> rows;
  /// max |c²P − EQ'| / max |c²P| over interior rows.
  double max_relative_residual = 0.0;
  double max_energy_drift = 0.0;
  /// (dP/dt)/a from finite differences of P, averaged over interior rows,
  /// and its largest deviation from m_total + δm.
  double inertial_mass = 0.0;
  double expected_mass = 0.0;
  double mass_relative_gap = 0.0;
};

/// RK4 integration of e₁' = F v, e₂' = −F v, q_i' = v under the prescribed
/// common velocity v(t) = v(0) + a t.
RigidBodyTrace simulate_accelerated_cavity(const RigidBodyState& initial, double a, double duration,
                                           double dt, const RigidBodyOptions& opt = {});

}  // namespace casimir
