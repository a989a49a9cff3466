#pragma once

// Static Casimir force between two mirrors from the imaginary-frequency
// (Wick-rotated) formula, natural units:
//
//   F(τ) = (1/π) ∫₀^∞ dξ ξ ρ(ξ) e^{−2ξτ} / (1 − ρ(ξ) e^{−2ξτ}),  ρ = r₁(iξ) r₂(iξ).
//
// On the imaginary axis the integrand is real, positive and exponentially
// decaying, so a plain exp-sinh rule converges without any of the
// oscillatory machinery the library needs on the real axis.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

/// ∫₀^∞ f(x) dx by the exp-sinh substitution x = exp(π/2 sinh t).
inline double exp_sinh(const std::function<double(double)>& f, double h = 1.0 / 64.0, double tmax = 4.5) {
  double acc = 0.0;
  for (double t = -tmax; t <= tmax; t += h) {
    const double x = std::exp(0.5 * std::numbers::pi * std::sinh(t));
    const double dx = 0.5 * std::numbers::pi * std::cosh(t) * x;
    const double v = f(x) * dx;
    if (std::isfinite(v)) acc += v;
  }
  return acc * h;
}

/// Reflection product on the imaginary axis for Lorentzian mirrors
/// (cutoff <= 0 stands for a perfect mirror).
inline double rho(double cutoff1, double cutoff2, double xi) {
  auto r = [xi](double c) { return c <= 0.0 ? -1.0 : -c / (c + xi); };
  return r(cutoff1) * r(cutoff2);
}

inline double force(double cutoff1, double cutoff2, double tau) {
  return exp_sinh([&](double xi) {
           const double e = rho(cutoff1, cutoff2, xi) * std::exp(-2.0 * xi * tau);
           return xi * e / (1.0 - e);
         }) /
         std::numbers::pi;
}

/// dF/dτ, differentiating under the integral sign.
inline double force_slope(double cutoff1, double cutoff2, double tau) {
  return exp_sinh([&](double xi) {
           const double e = rho(cutoff1, cutoff2, xi) * std::exp(-2.0 * xi * tau);
           return -2.0 * xi * xi * e / ((1.0 - e) * (1.0 - e));
         }) /
         std::numbers::pi;
}

}  // namespace oracle
