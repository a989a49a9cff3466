#include "casimir/rigid_body.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "casimir/error.hpp"

namespace casimir {

double RigidBodyState::momentum() const {
  const double qprime_sum = 2.0 * v;
  return (e1 * v + e2 * v + 0.5 * (E_f - F * separation()) * qprime_sum) / (c * c);
}

double RigidBodyState::mass_correction() const { return casimir::mass_correction(E_f, F, separation(), c); }

double mass_correction(double E_f, double F, double q, double c) { return (E_f - F * q) / (c * c); }

double center_of_inertia(const RigidBodyState& s) {
  const double E = s.energy();
  if (E == 0.0) throw Error(ErrorCode::Degenerate, "center of inertia undefined for zero total energy");
  return (s.e1 * s.q1 + s.e2 * s.q2 + 0.5 * s.E_f * (s.q1 + s.q2)) / E;
}

RigidBodyState cavity_at_rest(double q, double m1, double m2, double F, double E_f, const Units& units) {
  if (!(q > 0.0)) throw Error(ErrorCode::InvalidArgument, "separation must be positive");
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "mirror masses must be positive");
  RigidBodyState s;
  s.c = units.c;
  s.q1 = -0.5 * q;
  s.q2 = 0.5 * q;
  s.e1 = m1 * units.c * units.c;
  s.e2 = m2 * units.c * units.c;
  s.F = F;
  s.E_f = E_f;
  return s;
}

namespace {

// y = (q1, q2, e1, e2)
using Y = std::array<double, 4>;

Y rate(const RigidBodyState& base, double v) { return {v, v, base.F * v, -base.F * v}; }

// 4th-order centred first derivative of a sampled series at interior index k
double centred_slope(const std::vector<TraceRow>& rows, std::size_t k, double h, double TraceRow::*field) {
  return (rows[k - 2].*field - 8.0 * (rows[k - 1].*field) + 8.0 * (rows[k + 1].*field) - rows[k + 2].*field) /
         (12.0 * h);
}

}  // namespace

RigidBodyTrace simulate_accelerated_cavity(const RigidBodyState& initial, double a, double duration,
                                           double dt, const RigidBodyOptions& opt) {
  if (!(dt > 0.0) || !(duration > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::InvalidArgument, "simulation needs dt > 0, duration > 0 and a finite acceleration");
  }
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  if (steps < 4) throw Error(ErrorCode::InvalidArgument, "simulation needs at least 4 steps");
  const double c = initial.c;
  const double t0 = initial.t;
  const double v0 = initial.v;
  auto velocity = [&](double t) { return v0 + a * (t - t0); };

  RigidBodyState s = initial;
  const double E0 = s.energy();
  RigidBodyTrace trace;
  trace.rows.reserve(steps + 1);

  auto record = [&](const RigidBodyState& st) {
    const double vc = std::abs(st.v) / c;
    if (vc > opt.v_over_c_bound) {
      throw Error(ErrorCode::Range, "|v|/c = " + std::to_string(vc) + " exceeds the linear-response bound");
    }
    const double drift = std::abs(st.energy() - E0) / std::abs(E0);
    trace.max_energy_drift = std::max(trace.max_energy_drift, drift);
    if (drift > opt.energy_tolerance) {
      throw AccuracyError(drift, "total energy drifted beyond the integrator tolerance");
    }
    trace.rows.push_back({st.t, st.q1, st.q2, st.v, st.e1, st.e2, st.energy(), st.momentum(),
                          center_of_inertia(st), 0.0});
  };

  s.v = velocity(s.t);
  record(s);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = t0 + dt * static_cast<double>(n);
    const Y y{s.q1, s.q2, s.e1, s.e2};
    const Y k1 = rate(s, velocity(t));
    const Y k2 = rate(s, velocity(t + 0.5 * dt));
    const Y k3 = rate(s, velocity(t + 0.5 * dt));
    const Y k4 = rate(s, velocity(t + dt));
    Y next = y;
    for (int i = 0; i < 4; ++i) next[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    s.q1 = next[0];
    s.q2 = next[1];
    s.e1 = next[2];
    s.e2 = next[3];
    s.t = t0 + dt * static_cast<double>(n + 1);
    s.v = velocity(s.t);
    record(s);
  }

  // c²P − EQ' and (dP/dt)/a on interior rows
  auto& rows = trace.rows;
  double p_scale = 0.0;
  for (const auto& r : rows) p_scale = std::max(p_scale, std::abs(c * c * r.P));
  double worst = 0.0;
  double mass_sum = 0.0;
  std::size_t mass_count = 0;
  trace.expected_mass = (initial.e1 + initial.e2) / (c * c) + initial.mass_correction();
  for (std::size_t k = 2; k + 2 < rows.size(); ++k) {
    const double q_prime = centred_slope(rows, k, dt, &TraceRow::Q);
    rows[k].residual = c * c * rows[k].P - rows[k].E * q_prime;
    worst = std::max(worst, std::abs(rows[k].residual));
    if (a != 0.0) {
      const double m = centred_slope(rows, k, dt, &TraceRow::P) / a;
      mass_sum += m;
      ++mass_count;
      trace.mass_relative_gap =
          std::max(trace.mass_relative_gap, std::abs(m - trace.expected_mass) / std::abs(trace.expected_mass));
    }
  }
  trace.max_relative_residual = p_scale > 0.0 ? worst / p_scale : worst;
  trace.inertial_mass = mass_count > 0 ? mass_sum / static_cast<double>(mass_count) : 0.0;
  return trace;
}

}  // namespace casimir
