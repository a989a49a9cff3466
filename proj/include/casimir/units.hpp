#pragma once

#include <string_view>

namespace casimir {

enum class UnitSystem { Natural, SI };

/// Conversion between a user-facing unit system and the internal one.
///
/// Internally every computation runs with ħ = c = 1: lengths keep the user's
/// length unit, times are measured as c·t and angular frequencies as ω/c.
/// Results are rescaled by the appropriate powers of ħ and c on the way out,
/// so in natural units all conversions are the identity.
struct Units {
  UnitSystem system = UnitSystem::Natural;
  double hbar = 1.0;
  double c = 1.0;

  static Units natural() { return {}; }
  static Units si() { return {UnitSystem::SI, 1.054571817e-34, 299792458.0}; }

  double frequency_in(double omega) const { return omega / c; }
  double frequency_out(double omega) const { return omega * c; }
  double time_in(double t) const { return t * c; }
  double time_out(double t) const { return t / c; }

  // force, stiffness, susceptibility and energy all carry one power of ħc
  double force_out(double f) const { return f * hbar * c; }
  double stiffness_out(double k) const { return k * hbar * c; }
  double energy_out(double e) const { return e * hbar * c; }
  double viscosity_out(double l) const { return l * hbar; }
  double mass_out(double m) const { return m * hbar / c; }
  /// d[ω] is dimensionless, d'[ω] is a time.
  double delay_out(double t) const { return t / c; }
};

std::string_view to_string(UnitSystem u) noexcept;

}  // namespace casimir
