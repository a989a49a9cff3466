#pragma once

#include <array>
#include <complex>
#include <optional>

#include "casimir/cavity.hpp"
#include "casimir/oscillatory.hpp"

namespace casimir {

using Matrix2 = std::array<std::array<double, 2>, 2>;

enum class CoefficientMethod { ClosedFormPerfect, Quadrature };

/// κ_ij, λ_ij, μ_ij in the configuration's units, with their sums over i, j.
struct QuasistaticCoefficients {
  Matrix2 kappa{};
  Matrix2 lambda{};
  Matrix2 mu{};
  double kappa_sum = 0.0;
  double lambda_sum = 0.0;
  double mu_sum = 0.0;
  /// μ from the summed kernel Σ_ij Γ_ij (quadrature path only; equals mu_sum
  /// up to quadrature error).
  double mu_sum_direct = 0.0;
  /// Largest quadrature error estimate relative to |κ₁₁| or |μ₁₁|.
  double achieved_tolerance = 0.0;
  /// Largest |Im| of a physically real integral, relative to its scale.
  double imaginary_residue = 0.0;
  int evaluations = 0;
  CoefficientMethod method = CoefficientMethod::ClosedFormPerfect;
  TailMethod tail = TailMethod::ComplexRay;
};

struct CasimirStatics {
  double F = 0.0;
  std::optional<double> U;  // perfect mirrors only
  double E_f = 0.0;
  double delta_m = 0.0;
  double achieved_tolerance = 0.0;
};

struct QuadratureSettings {
  double rel_tol = 1e-12;
  /// Limit on |Im I|/|I| for physically real integrals.
  double residue_tol = 1e-8;
  OscillatoryOptions oscillatory{};
};

QuasistaticCoefficients coefficients_perfect(const CavityConfig& cfg);
CasimirStatics casimir_energy_perfect(double q, const Units& units = Units::natural());

/// Mean force by quadrature. Requires both mirrors partially transmitting.
CasimirStatics casimir_force_partial(const CavityConfig& cfg, const QuadratureSettings& s = {});
/// Same integral without the model check. For perfect mirrors the complex-ray
/// tail yields the Abel-regularised value, which matches the closed form.
CasimirStatics casimir_force_quadrature(const CavityConfig& cfg, const QuadratureSettings& s = {});

/// Γ_ij[ω] in the configuration's units (ω in the user's frequency unit).
std::complex<double> gamma_capital(const CavityConfig& cfg, int i, int j, double omega);

/// κ, λ, μ by one vector quadrature pass. Requires both mirrors partially transmitting.
QuasistaticCoefficients coefficients_partial(const CavityConfig& cfg, const QuadratureSettings& s = {});
QuasistaticCoefficients coefficients_quadrature(const CavityConfig& cfg, const QuadratureSettings& s = {});

/// Closed form for perfect mirrors, quadrature otherwise.
QuasistaticCoefficients coefficients(const CavityConfig& cfg, const QuadratureSettings& s = {});

struct MassCorrection {
  double via_gamma = 0.0;  // ∫ω²(Γ[ω] − Γ[−ω]) with Γ = Σ_ij Γ_ij
  double via_force = 0.0;  // −2Fq/c²
  double relative_gap = 0.0;
  double achieved_tolerance = 0.0;
  CoefficientMethod method = CoefficientMethod::ClosedFormPerfect;
};

/// Global inertia correction μ computed two ways. Throws ErrorCode::Consistency
/// when the two routes differ by more than `gap_tol` relative.
MassCorrection global_mass_correction(const CavityConfig& cfg, double gap_tol = 1e-6,
                                      const QuadratureSettings& s = {});

}  // namespace casimir
