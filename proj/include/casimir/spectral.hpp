#pragma once

#include <array>
#include <complex>
#include <vector>

#include "casimir/cavity.hpp"
#include "casimir/quasistatic.hpp"

namespace casimir {

using ComplexMatrix2 = std::array<std::array<std::complex<double>, 2>, 2>;

/// χ_ij[ω] = ξ̃_ij[ω] + iξ_ij[ω].
struct SusceptibilityMatrix {
  double omega = 0.0;
  ComplexMatrix2 chi{};
  Matrix2 dispersive{};
  Matrix2 dissipative{};
};

/// Response of the compound system, χ = Σ_ij χ_ij.
struct CompoundSusceptibility {
  double omega = 0.0;
  std::complex<double> chi;
  double dispersive = 0.0;
  double dissipative = 0.0;
};

struct SpectralOptions {
  /// Half-width, in units of ωτ, of the excluded neighbourhood of a pole.
  double exclusion_radius = 1e-6;
  /// Radius, in units of ωτ, inside which removable points use a series.
  double series_radius = 1e-3;
};

/// Perfect mirrors, closed form. Throws PoleError near ωτ = mπ, |m| ≥ 2.
SusceptibilityMatrix chi_perfect(const CavityConfig& cfg, double omega, const SpectralOptions& opt = {});

/// Perfect mirrors, compound system. Throws PoleError near odd m with |m| ≥ 3.
CompoundSusceptibility chi_compound_perfect(const CavityConfig& cfg, double omega,
                                            const SpectralOptions& opt = {});

/// Resonance indices m with ωτ = mπ inside [omega_min, omega_max] where the
/// matrix (compound = false) or the compound response (compound = true) diverges.
std::vector<int> perfect_poles(const CavityConfig& cfg, double omega_min, double omega_max, bool compound);

/// Antisymmetric part χ^A of the motional susceptibility for partially
/// transmitting mirrors, by semi-infinite quadrature.
struct ChiAResult {
  double omega = 0.0;
  ComplexMatrix2 chi{};
  std::complex<double> sum;  // Σ_ij χ^A_ij
  double achieved_tolerance = 0.0;
  int evaluations = 0;
};

ChiAResult chi_A_matrix(const CavityConfig& cfg, double omega, const QuadratureSettings& s = {});
std::complex<double> chi_A(const CavityConfig& cfg, int i, int j, double omega,
                           const QuadratureSettings& s = {});

/// C_ij[ω] = 2ħθ(ω)ξ_ij[ω], with θ(0) = 0. Needs the dissipative part ξ_ij,
/// which is available in closed form for perfect mirrors only.
double fluctuation_spectrum(const CavityConfig& cfg, int i, int j, double omega);

}  // namespace casimir
