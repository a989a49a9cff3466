#include "casimir/time_domain.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>

#include "casimir/error.hpp"
#include "jet.hpp"

namespace casimir {

namespace {

using cplx = std::complex<double>;
using J = detail::Jet<4>;
constexpr double kPi = std::numbers::pi;

// C^∞ step from 0 (s ≤ 0) to 1 (s ≥ 1)
J smooth_step(const J& s) {
  if (s.c[0] <= 0.0) return J{};
  if (s.c[0] >= 1.0) return J::constant(1.0);
  const J one = J::constant(1.0);
  const J f0 = detail::exp(-1.0 * (one / s));
  const J f1 = detail::exp(-1.0 * (one / (one - s)));
  return f0 / (f0 + f1);
}

// Finite-difference weights for the `order`-th derivative at 0 from nodes
// at integer offsets (Fornberg's recursion).
std::vector<double> fd_weights(int order, const std::vector<int>& offsets) {
  const std::size_t n = offsets.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = offsets[0];
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min<int>(static_cast<int>(i), order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = offsets[i];
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = offsets[i] - offsets[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][order];
  return w;
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Forward real DFT (FFTW sign convention, e^{−2πijk/M}) of x zero-padded to m.
std::vector<cplx> real_dft(const std::vector<double>& x, std::size_t m) {
  std::vector<double> in(m, 0.0);
  std::copy(x.begin(), x.end(), in.begin());
  std::vector<cplx> out(m / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), in.data(),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

// Inverse of real_dft, normalised, truncated to n samples.
std::vector<double> inverse_real_dft(std::vector<cplx> spec, std::size_t m, std::size_t n) {
  std::vector<double> out(m);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(m), reinterpret_cast<fftw_complex*>(spec.data()),
                                out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  out.resize(n);
  for (double& v : out) v /= static_cast<double>(m);
  return out;
}

std::size_t padded_length(std::size_t n, int padding) {
  std::size_t m = 1;
  const std::size_t target = n * static_cast<std::size_t>(std::max(1, padding));
  while (m < target) m <<= 1;
  return m;
}

void check_mirror(int mirror) {
  if (mirror != 1 && mirror != 2) throw Error(ErrorCode::InvalidArgument, "mirror index must be 1 or 2");
}

void check_grid(double t0, double dt) {
  if (!std::isfinite(t0) || !(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidArgument, "trajectory needs finite t0 and dt > 0");
  }
}

ForceRecord empty_record(const Trajectory& traj) {
  ForceRecord r;
  const std::size_t n = traj.size();
  r.t.resize(n);
  for (std::size_t k = 0; k < n; ++k) r.t[k] = traj.time(k);
  r.dF1.assign(n, 0.0);
  r.dF2.assign(n, 0.0);
  r.dF_total.assign(n, 0.0);
  return r;
}

void finish_total(ForceRecord& r) {
  for (std::size_t k = 0; k < r.t.size(); ++k) r.dF_total[k] = r.dF1[k] + r.dF2[k];
}

void check_at_rest(const Trajectory& traj, const TimeDomainOptions& opt) {
  const double scale = traj.max_displacement();
  if (scale == 0.0) return;
  for (int m = 1; m <= 2; ++m) {
    const auto& x = traj.samples(m);
    for (std::size_t k = 0; k < std::min<std::size_t>(4, x.size()); ++k) {
      if (std::abs(x[k]) > opt.rest_tolerance * scale) {
        throw Error(ErrorCode::Precondition, "trajectory is not at rest at its first samples");
      }
    }
    for (const Motion& mo : traj.motions(m)) {
      const bool windowed = mo.kind == Motion::Kind::Polynomial || mo.kind == Motion::Kind::Sinusoid;
      if (windowed && mo.t_on < traj.t0()) {
        throw Error(ErrorCode::Precondition, "analytic motion switches on before the trajectory start");
      }
      if (mo.kind == Motion::Kind::GaussianPulse && mo.center - traj.t0() < 7.5 * mo.width) {
        throw Error(ErrorCode::Precondition, "Gaussian pulse is not at rest at the trajectory start");
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Motion

Motion Motion::polynomial(double velocity, double acceleration, double t_on, double ramp) {
  if (!(ramp > 0.0)) throw Error(ErrorCode::InvalidArgument, "ramp duration must be positive");
  Motion m;
  m.kind = Kind::Polynomial;
  m.velocity = velocity;
  m.acceleration = acceleration;
  m.t_on = t_on;
  m.ramp = ramp;
  return m;
}

Motion Motion::sinusoid(double amplitude, double omega, double phase, double t_on, double ramp) {
  if (!(ramp > 0.0)) throw Error(ErrorCode::InvalidArgument, "ramp duration must be positive");
  Motion m;
  m.kind = Kind::Sinusoid;
  m.amplitude = amplitude;
  m.omega = omega;
  m.phase = phase;
  m.t_on = t_on;
  m.ramp = ramp;
  return m;
}

Motion Motion::gaussian_pulse(double amplitude, double center, double width) {
  if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "pulse width must be positive");
  Motion m;
  m.kind = Kind::GaussianPulse;
  m.amplitude = amplitude;
  m.center = center;
  m.width = width;
  return m;
}

std::array<double, 5> Motion::derivatives(double t) const {
  std::array<double, 5> out{};
  if (kind == Kind::Rest) return out;
  const J T = J::variable(t);
  J x;
  if (kind == Kind::GaussianPulse) {
    const J u = (1.0 / width) * (T - J::constant(center));
    x = amplitude * detail::exp(-0.5 * (u * u));
  } else {
    const J s = T - J::constant(t_on);
    const J window = smooth_step((1.0 / ramp) * s);
    if (window.c[0] == 0.0 && window.c[1] == 0.0) return out;
    J shape;
    if (kind == Kind::Polynomial) {
      shape = velocity * s + (0.5 * acceleration) * (s * s);
    } else {
      J sn, cs;
      detail::sincos(phase + omega * s, sn, cs);
      shape = amplitude * sn;
    }
    x = window * shape;
  }
  for (std::size_t n = 0; n < 5; ++n) out[n] = x.derivative(n);
  return out;
}

// ---------------------------------------------------------------------------
// Trajectory

Trajectory Trajectory::analytic(double t0, double dt, std::size_t samples, Motion m1, Motion m2) {
  check_grid(t0, dt);
  Trajectory tr;
  tr.t0_ = t0;
  tr.dt_ = dt;
  tr.analytic_ = true;
  tr.motion_[0] = {m1};
  tr.motion_[1] = {m2};
  for (int m = 0; m < 2; ++m) {
    tr.dq_[m].resize(samples);
    for (std::size_t k = 0; k < samples; ++k) tr.dq_[m][k] = tr.motion_[m][0].derivative(0, tr.time(k));
  }
  return tr;
}

Trajectory Trajectory::tabulated(double t0, double dt, std::vector<double> dq1, std::vector<double> dq2) {
  check_grid(t0, dt);
  if (dq1.size() != dq2.size()) throw Error(ErrorCode::InvalidArgument, "dq1 and dq2 must have equal length");
  if (dq1.size() < 5) throw Error(ErrorCode::InvalidArgument, "tabulated trajectory needs at least 5 samples");
  for (const auto* v : {&dq1, &dq2}) {
    for (double x : *v) {
      if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "trajectory samples must be finite");
    }
  }
  Trajectory tr;
  tr.t0_ = t0;
  tr.dt_ = dt;
  tr.dq_[0] = std::move(dq1);
  tr.dq_[1] = std::move(dq2);
  return tr;
}

Trajectory Trajectory::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open trajectory file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Io, "empty trajectory file '" + path + "'");
  line.erase(std::remove_if(line.begin(), line.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); }),
             line.end());
  if (line != "t,dq1,dq2") throw Error(ErrorCode::Io, "trajectory file must start with header t,dq1,dq2");
  std::vector<double> t, a, b;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    double x, y, z;
    if (!(is >> x >> y >> z)) throw Error(ErrorCode::Io, "malformed trajectory row " + std::to_string(row));
    t.push_back(x);
    a.push_back(y);
    b.push_back(z);
  }
  if (t.size() < 5) throw Error(ErrorCode::Io, "trajectory file needs at least 5 rows");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (std::abs(t[k] - (t.front() + dt * static_cast<double>(k))) > 1e-9 * std::max(std::abs(dt), std::abs(t[k]))) {
      throw Error(ErrorCode::Io, "trajectory file is not uniformly sampled");
    }
  }
  return tabulated(t.front(), dt, std::move(a), std::move(b));
}

std::string Trajectory::kind_name() const {
  if (!analytic_) return "tabulated";
  std::string out;
  for (int m = 0; m < 2; ++m) {
    for (const Motion& mo : motion_[m]) {
      const char* k = "rest";
      switch (mo.kind) {
        case Motion::Kind::Rest: k = "rest"; break;
        case Motion::Kind::Polynomial: k = "polynomial"; break;
        case Motion::Kind::Sinusoid: k = "sinusoid"; break;
        case Motion::Kind::GaussianPulse: k = "pulse"; break;
      }
      if (mo.kind == Motion::Kind::Rest) continue;
      if (out.find(k) == std::string::npos) out += (out.empty() ? "" : "+") + std::string(k);
    }
  }
  return out.empty() ? "rest" : out;
}

double Trajectory::derivative(int mirror, int order, std::size_t k) const {
  check_mirror(mirror);
  if (order < 0 || order > 4) throw Error(ErrorCode::InvalidArgument, "derivative order must be 0..4");
  if (k >= size()) throw Error(ErrorCode::Range, "sample index outside the trajectory");
  if (analytic_) return derivative_at(mirror, order, time(k));
  const auto& x = dq_[mirror - 1];
  if (order == 0) return x[k];
  // 5-point centred stencil; samples before the start are zero (at rest),
  // the far end closes with a one-sided stencil
  const long n = static_cast<long>(size());
  long first = static_cast<long>(k) - 2;
  if (first + 4 > n - 1) first = n - 5;
  std::vector<int> offsets(5);
  for (int i = 0; i < 5; ++i) offsets[i] = static_cast<int>(first + i - static_cast<long>(k));
  const auto w = fd_weights(order, offsets);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) {
    const long idx = first + i;
    if (idx >= 0) s += w[i] * x[static_cast<std::size_t>(idx)];
  }
  return s / std::pow(dt_, order);
}

double Trajectory::derivative_at(int mirror, int order, double t) const {
  check_mirror(mirror);
  if (analytic_) {
    double s = 0.0;
    for (const Motion& mo : motion_[mirror - 1]) s += mo.derivative(order, t);
    return s;
  }
  if (t < t0_) return 0.0;
  const double pos = (t - t0_) / dt_;
  const double idx = std::round(pos);
  if (std::abs(pos - idx) > 1e-9 * std::max(1.0, pos)) {
    throw Error(ErrorCode::Precondition, "tabulated trajectory evaluated between samples");
  }
  return derivative(mirror, order, static_cast<std::size_t>(idx));
}

double Trajectory::max_displacement() const {
  double m = 0.0;
  for (const auto& v : dq_) {
    for (double x : v) m = std::max(m, std::abs(x));
  }
  return m;
}

Trajectory Trajectory::operator+(const Trajectory& o) const {
  if (o.size() != size() || o.t0_ != t0_ || o.dt_ != dt_) {
    throw Error(ErrorCode::InvalidArgument, "superposed trajectories must share the time grid");
  }
  Trajectory r = *this;
  r.analytic_ = analytic_ && o.analytic_;
  for (int m = 0; m < 2; ++m) {
    for (std::size_t k = 0; k < size(); ++k) r.dq_[m][k] += o.dq_[m][k];
    if (r.analytic_) {
      r.motion_[m].insert(r.motion_[m].end(), o.motion_[m].begin(), o.motion_[m].end());
    } else {
      r.motion_[m].clear();
    }
  }
  return r;
}

Trajectory Trajectory::only(int mirror) const {
  check_mirror(mirror);
  Trajectory r = *this;
  const int other = 2 - mirror;  // zero-based index of the other mirror
  r.motion_[other].clear();
  std::fill(r.dq_[other].begin(), r.dq_[other].end(), 0.0);
  return r;
}

// ---------------------------------------------------------------------------
// Forces

ForceRecord motional_force_perfect(const Trajectory& traj, const CavityConfig& cfg,
                                   const TimeDomainOptions& opt) {
  if (!cfg.both_perfect()) {
    throw Error(ErrorCode::UnsupportedModel, "the delay-series force needs two perfect mirrors");
  }
  check_at_rest(traj, opt);
  if (traj.max_displacement() > opt.displacement_bound * cfg.q()) {
    throw Error(ErrorCode::Precondition, "displacements exceed the linear-response bound max|dq|/q");
  }
  const Units& u = cfg.units();
  const double tau = cfg.tau();
  const double c = u.c;
  const double a3 = u.force_out(1.0 / (6.0 * kPi)) / (c * c * c);
  const double a1 = u.force_out(kPi / (6.0 * cfg.q() * cfg.q())) / c;

  ForceRecord r = empty_record(traj);
  const std::size_t n = traj.size();

  if (traj.is_analytic()) {
    for (std::size_t k = 0; k < n; ++k) {
      const double t = traj.time(k);
      double f[2] = {0.0, 0.0};
      for (int target = 1; target <= 2; ++target) {
        double s3 = 0.0, s1 = 0.0;
        for (long j = 0;; ++j) {
          const double tj = t - static_cast<double>(j) * tau;
          if (tj < traj.t0()) break;
          const int src = (j % 2 == 0) ? target : 3 - target;
          const double sign = (j % 2 == 0) ? 1.0 : -1.0;
          double d1 = 0.0, d3 = 0.0;
          for (const Motion& mo : traj.motions(src)) {
            const auto d = mo.derivatives(tj);
            d1 += d[1];
            d3 += d[3];
          }
          s3 += sign * d3;
          s1 += sign * (j == 0 ? 0.5 : 1.0) * d1;
        }
        f[target - 1] = a3 * s3 + a1 * s1;
      }
      r.dF1[k] = f[0];
      r.dF2[k] = f[1];
    }
  } else {
    const double ratio = tau / traj.dt();
    const long steps = std::lround(ratio);
    if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio) {
      throw Error(ErrorCode::Precondition, "tabulated trajectories need dt = tau/N for an integer N");
    }
    std::vector<double> d1[2], d3[2];
    for (int m = 0; m < 2; ++m) {
      d1[m].resize(n);
      d3[m].resize(n);
      for (std::size_t k = 0; k < n; ++k) {
        d1[m][k] = traj.derivative(m + 1, 1, k);
        d3[m][k] = traj.derivative(m + 1, 3, k);
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (int target = 0; target < 2; ++target) {
        double s3 = 0.0, s1 = 0.0;
        for (long j = 0; static_cast<long>(k) - j * steps >= 0; ++j) {
          const std::size_t idx = k - static_cast<std::size_t>(j * steps);
          const int src = (j % 2 == 0) ? target : 1 - target;
          const double sign = (j % 2 == 0) ? 1.0 : -1.0;
          s3 += sign * d3[src][idx];
          s1 += sign * (j == 0 ? 0.5 : 1.0) * d1[src][idx];
        }
        (target == 0 ? r.dF1 : r.dF2)[k] = a3 * s3 + a1 * s1;
      }
    }
  }
  finish_total(r);
  return r;
}

ForceRecord motional_force_single(const Trajectory& traj, int mirror, const Units& units) {
  check_mirror(mirror);
  const double c = units.c;
  const double a3 = units.force_out(1.0 / (6.0 * kPi)) / (c * c * c);
  ForceRecord r = empty_record(traj);
  auto& f = mirror == 1 ? r.dF1 : r.dF2;
  for (std::size_t k = 0; k < traj.size(); ++k) f[k] = a3 * traj.derivative(mirror, 3, k);
  finish_total(r);
  return r;
}

SusceptibilitySource perfect_source(const CavityConfig& cfg, const SpectralOptions& opt) {
  if (!cfg.both_perfect()) {
    throw Error(ErrorCode::UnsupportedModel, "perfect_source needs two perfect mirrors");
  }
  return [cfg, opt](double omega) { return chi_perfect(cfg, omega, opt).chi; };
}

SusceptibilitySource quasistatic_source(const QuasistaticCoefficients& c) {
  return [c](double omega) {
    ComplexMatrix2 m;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        m[i][j] = cplx(-c.kappa[i][j] + omega * omega * c.mu[i][j], omega * c.lambda[i][j]);
      }
    }
    return m;
  };
}

ForceRecord motional_force_spectral(const Trajectory& traj, const SusceptibilitySource& chi,
                                    const SpectralForceOptions& opt) {
  ForceRecord r = empty_record(traj);
  const std::size_t n = traj.size();
  if (n == 0) return r;
  const std::size_t m = padded_length(n, opt.padding);
  const auto q1 = real_dft(traj.samples(1), m);
  const auto q2 = real_dft(traj.samples(2), m);
  std::vector<cplx> g1(q1.size()), g2(q1.size());
  const double dw = 2.0 * kPi / (static_cast<double>(m) * traj.dt());
  for (std::size_t k = 0; k < q1.size(); ++k) {
    const double w = dw * static_cast<double>(k);
    ComplexMatrix2 x;
    try {
      x = chi(w);
    } catch (const PoleError& e) {
      if (!opt.exclude_poles) throw;
      std::ostringstream os;
      os.precision(17);
      os << "excluded omega=" << w << " (resonance m=" << e.resonance_index() << ")";
      r.annotations.push_back(os.str());
      g1[k] = g2[k] = 0.0;
      continue;
    }
    // the forward transform carries e^{−iωt}, so it samples conj(δq[ω])
    g1[k] = std::conj(x[0][0]) * q1[k] + std::conj(x[0][1]) * q2[k];
    g2[k] = std::conj(x[1][0]) * q1[k] + std::conj(x[1][1]) * q2[k];
  }
  r.dF1 = inverse_real_dft(std::move(g1), m, n);
  r.dF2 = inverse_real_dft(std::move(g2), m, n);
  finish_total(r);

  const double scale = traj.max_displacement();
  for (int mi = 1; mi <= 2; ++mi) {
    if (scale > 0.0 && std::abs(traj.samples(mi).back()) > 1e-6 * scale) {
      r.warnings.push_back("trajectory is not at rest at its end; periodic wrap-around affects the result");
      break;
    }
  }
  return r;
}

double spectral_energy_fraction(const Trajectory& traj, double omega_max) {
  const std::size_t n = traj.size();
  if (n == 0) return 1.0;
  const std::size_t m = padded_length(n, 2);
  const auto q1 = real_dft(traj.samples(1), m);
  const auto q2 = real_dft(traj.samples(2), m);
  const double dw = 2.0 * kPi / (static_cast<double>(m) * traj.dt());
  double below = 0.0, total = 0.0;
  for (std::size_t k = 0; k < q1.size(); ++k) {
    const double e = std::norm(q1[k]) + std::norm(q2[k]);
    total += e;
    if (dw * static_cast<double>(k) <= omega_max) below += e;
  }
  return total > 0.0 ? below / total : 1.0;
}

ForceRecord quasistatic_force(const Trajectory& traj, const QuasistaticCoefficients& c, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  ForceRecord r = empty_record(traj);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    double d[2][3];
    for (int j = 0; j < 2; ++j) {
      for (int o = 0; o < 3; ++o) d[j][o] = traj.derivative(j + 1, o, k);
    }
    for (int i = 0; i < 2; ++i) {
      double f = 0.0;
      for (int j = 0; j < 2; ++j) {
        f -= c.kappa[i][j] * d[j][0] + c.lambda[i][j] * d[j][1] + c.mu[i][j] * d[j][2];
      }
      (i == 0 ? r.dF1 : r.dF2)[k] = f;
    }
  }
  finish_total(r);
  const double frac = spectral_energy_fraction(traj, 0.2 / tau);
  if (frac < 0.99) {
    std::ostringstream os;
    os << "only " << frac * 100.0 << "% of the trajectory's spectral energy lies below omega*tau = 0.2";
    r.warnings.push_back(os.str());
  }
  return r;
}

}  // namespace casimir
