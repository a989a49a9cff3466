#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "casimir/cavity.hpp"
#include "casimir/quasistatic.hpp"
#include "casimir/spectral.hpp"

namespace casimir {

/// Analytic displacement of one mirror, switched on smoothly at `t_on`.
///
/// The displacement is ψ((t − t_on)/ramp)·shape(t), where ψ is the C^∞
/// transition from 0 to 1 built from e^{−1/s}. Before `t_on` the mirror is
/// exactly at rest, together with all its derivatives.
struct Motion {
  enum class Kind { Rest, Polynomial, Sinusoid, GaussianPulse };

  Kind kind = Kind::Rest;
  double t_on = 0.0;
  double ramp = 1.0;
  // Polynomial: v·s + a·s²/2 with s = t − t_on
  double velocity = 0.0;
  double acceleration = 0.0;
  // Sinusoid: amplitude·sin(omega·s + phase)
  // GaussianPulse: amplitude·exp(−(t − center)²/(2 width²))
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  double center = 0.0;
  double width = 1.0;

  static Motion rest() { return {}; }
  static Motion polynomial(double velocity, double acceleration, double t_on, double ramp);
  static Motion sinusoid(double amplitude, double omega, double phase, double t_on, double ramp);
  static Motion gaussian_pulse(double amplitude, double center, double width);

  /// Displacement and its first `order` (≤ 4) derivatives at t.
  std::array<double, 5> derivatives(double t) const;
  double derivative(int order, double t) const { return derivatives(t)[static_cast<std::size_t>(order)]; }
};

/// Uniformly sampled displacements of both mirrors, in the user's units.
class Trajectory {
 public:
  static Trajectory analytic(double t0, double dt, std::size_t samples, Motion m1, Motion m2);
  static Trajectory tabulated(double t0, double dt, std::vector<double> dq1, std::vector<double> dq2);
  /// CSV with header `t,dq1,dq2` and uniform t.
  static Trajectory from_csv(const std::string& path);

  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return dt_; }
  std::size_t size() const noexcept { return dq_[0].size(); }
  double time(std::size_t k) const noexcept { return t0_ + dt_ * static_cast<double>(k); }
  bool is_analytic() const noexcept { return analytic_; }
  /// Superposed analytic motions of one mirror (empty for tabulated data).
  const std::vector<Motion>& motions(int mirror) const { return motion_[mirror - 1]; }
  const std::vector<double>& samples(int mirror) const { return dq_[mirror - 1]; }
  std::string kind_name() const;

  /// order-th derivative of mirror's displacement at sample k: analytic when
  /// the trajectory was built from Motion, otherwise a 5-point stencil.
  double derivative(int mirror, int order, std::size_t k) const;
  /// Same at an arbitrary time. Tabulated trajectories require t on the grid.
  double derivative_at(int mirror, int order, double t) const;

  /// Largest |dq| over both mirrors.
  double max_displacement() const;

  /// Superposition on the same time grid.
  Trajectory operator+(const Trajectory& o) const;
  /// Superposition with the other mirror's motion removed.
  Trajectory only(int mirror) const;

 private:
  double t0_ = 0.0;
  double dt_ = 1.0;
  bool analytic_ = false;
  std::array<std::vector<Motion>, 2> motion_{};
  std::array<std::vector<double>, 2> dq_;
};

/// δF₁, δF₂ and their sum on the trajectory's time grid. Positive forces
/// point toward increasing coordinate.
struct ForceRecord {
  std::vector<double> t;
  std::vector<double> dF1, dF2, dF_total;
  std::vector<std::string> warnings;
  std::vector<std::string> annotations;
};

struct TimeDomainOptions {
  /// Linear-response bound on max|δq|/q.
  double displacement_bound = 1e-3;
  /// Relative size below which the first samples count as "at rest".
  double rest_tolerance = 1e-12;
};

/// Perfect mirrors: the delay series for δF₁ and its mirror exchange for δF₂.
/// Analytic trajectories are differentiated exactly at every delayed time;
/// tabulated ones need dt = τ/N for an integer N.
ForceRecord motional_force_perfect(const Trajectory& traj, const CavityConfig& cfg,
                                   const TimeDomainOptions& opt = {});

/// Mirror alone in vacuum, δF = (ħ/6πc²)δq‴ for the chosen mirror.
ForceRecord motional_force_single(const Trajectory& traj, int mirror, const Units& units = Units::natural());

/// χ_ij[ω] in user units; may throw PoleError at resonances.
using SusceptibilitySource = std::function<ComplexMatrix2(double omega)>;
SusceptibilitySource perfect_source(const CavityConfig& cfg, const SpectralOptions& opt = {});
SusceptibilitySource quasistatic_source(const QuasistaticCoefficients& c);

struct SpectralForceOptions {
  bool exclude_poles = true;
  /// Zero padding: the FFT length is at least `padding` times the sample count.
  int padding = 2;
};

/// δF_i[ω] = Σ_j χ_ij[ω]δq_j[ω] on a zero-padded DFT grid.
ForceRecord motional_force_spectral(const Trajectory& traj, const SusceptibilitySource& chi,
                                    const SpectralForceOptions& opt = {});

/// δF_i = −Σ_j(κ_ij δq_j + λ_ij δq_j' + μ_ij δq_j''). Adds a warning when
/// less than 99% of the spectral energy lies below ωτ = 0.2.
ForceRecord quasistatic_force(const Trajectory& traj, const QuasistaticCoefficients& c, double tau);

/// Fraction of Σ|δq̂|² (both mirrors, ω ≥ 0) at angular frequencies ≤ omega_max.
double spectral_energy_fraction(const Trajectory& traj, double omega_max);

}  // namespace casimir
