#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace casimir {

using cd = std::complex<double>;

enum class MirrorKind { Perfect, Lorentzian, Tabulated };

/// Reflection amplitude r[ω] of a lossless point scatterer.
///
/// Perfect mirrors use r ≡ −1, so the cavity denominator
/// d[ω] = 1 − r₁r₂e^{2iωτ} has its zeros at ωτ = mπ. The default partial
/// mirror is the single-pole model r[ω] = −1/(1 − iω/Ω): causal (pole at
/// ω = −iΩ), bounded by one and transparent at high frequency. Tabulated
/// models are sampled on ω ≥ 0 and extended to ω < 0 through
/// r[−ω] = conj(r[ω]).
///
/// Frequencies are stored in whatever unit the caller chose; the cavity
/// rescales copies of its mirrors into internal units.
class MirrorModel {
 public:
  static MirrorModel perfect(std::string label = "perfect");
  static MirrorModel lorentzian(double cutoff, std::string label = {});
  /// Samples must be strictly increasing with omega[0] >= 0. An omega[0] == 0
  /// sample must be real.
  static MirrorModel tabulated(std::vector<double> omega, std::vector<cd> r,
                               std::string label = "tabulated");
  /// CSV with header `omega,re_r,im_r`.
  static MirrorModel from_csv(const std::string& path);

  MirrorKind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }
  double cutoff() const noexcept { return cutoff_; }
  bool is_perfect() const noexcept { return kind_ == MirrorKind::Perfect; }
  /// Perfect and Lorentzian models can be continued into the complex plane.
  bool is_analytic() const noexcept { return kind_ != MirrorKind::Tabulated; }
  /// Largest |ω| at which the model can be evaluated.
  double support_max() const noexcept;
  std::span<const double> grid() const noexcept { return omega_; }
  std::span<const cd> samples() const noexcept { return r_; }

  cd reflectivity(double omega) const;
  cd reflectivity(cd omega) const;
  cd derivative(double omega) const;
  cd derivative(cd omega) const;
  /// δ = −r − 1, evaluated without cancellation for analytic kinds. Lets
  /// callers form 1 − r₁r₂e^{2iωτ} accurately near ω = 0 where r → −1.
  cd deficit(double omega) const;
  cd deficit(cd omega) const;

  struct Transmission {
    cd value;
    bool supported;
  };
  /// s = 1 + r. Perfect mirrors report {0, false}.
  Transmission transmission(double omega) const;

  /// Copy with every frequency multiplied by `factor` (unit conversion).
  MirrorModel rescaled(double factor) const;

  std::string describe() const;

 private:
  MirrorModel() = default;
  void require_in_grid(double abs_omega) const;
  cd interpolate(double abs_omega) const;
  cd interpolate_derivative(double abs_omega) const;

  MirrorKind kind_ = MirrorKind::Perfect;
  std::string label_;
  double cutoff_ = 0.0;
  std::vector<double> omega_;
  std::vector<cd> r_;
  std::vector<cd> dr_;  // node derivatives for tabulated models
};

struct PhysicalityTolerances {
  double bound = 1e-12;
  double symmetry = 1e-12;
  double transparency = 1e-2;
  double kramers_kronig = 1e-3;
};

struct PhysicalityReport {
  bool exempt = false;       // perfect mirror: constant amplitude
  bool transparent = true;
  double max_bound_excess = 0.0;
  double max_symmetry_residual = 0.0;
  double transparency_tail = 0.0;
  double kk_residual = 0.0;         // on the full grid
  double kk_residual_coarse = 0.0;  // on every other grid point
  bool passes = false;
};

/// Checks |r| ≤ 1, reality symmetry, the high-frequency tail and causality.
/// Causality is tested by comparing Im r on the grid with the discrete
/// principal-value Hilbert transform of Re r.
PhysicalityReport verify_physicality(const MirrorModel& model, std::span<const double> grid,
                                     const PhysicalityTolerances& tol = {});

}  // namespace casimir
