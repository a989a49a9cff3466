#include <doctest.h>

#include <cmath>
#include <numbers>

#include "casimir/error.hpp"
#include "casimir/quasistatic.hpp"
#include "oracles/imaginary_axis.hpp"

using namespace casimir;
using std::numbers::pi;

namespace {

CavityConfig lorentz_cavity(double c1, double c2, double q = 1.0) {
  return {q, MirrorModel::lorentzian(c1), MirrorModel::lorentzian(c2)};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("perfect mirrors: closed-form coefficients") {
  const CavityConfig cfg(1.0, MirrorModel::perfect(), MirrorModel::perfect());
  const auto c = coefficients(cfg);
  CHECK(c.method == CoefficientMethod::ClosedFormPerfect);
  CHECK(c.kappa[0][0] == doctest::Approx(-pi / 12.0).epsilon(1e-15));
  CHECK(c.kappa[0][1] == doctest::Approx(pi / 12.0).epsilon(1e-15));
  CHECK(c.mu[0][0] == doctest::Approx(-0.11379228644836571).epsilon(1e-13));
  CHECK(c.mu[0][1] == doctest::Approx(-0.017107407451209016).epsilon(1e-13));
  CHECK(c.mu[1][1] == c.mu[0][0]);
  CHECK(c.mu[1][0] == c.mu[0][1]);
  for (auto& row : c.lambda) {
    for (double v : row) CHECK(v == 0.0);
  }
  CHECK(c.kappa_sum == 0.0);
  CHECK(c.mu_sum == doctest::Approx(-pi / 12.0).epsilon(1e-13));
}

TEST_CASE("perfect mirrors: coefficients scale with the separation") {
  const double q = 2.5;
  const auto c1 = coefficients_perfect({1.0, MirrorModel::perfect(), MirrorModel::perfect()});
  const auto cq = coefficients_perfect({q, MirrorModel::perfect(), MirrorModel::perfect()});
  CHECK(cq.kappa[0][0] == doctest::Approx(c1.kappa[0][0] / (q * q * q)).epsilon(1e-14));
  CHECK(cq.mu[0][1] == doctest::Approx(c1.mu[0][1] / q).epsilon(1e-14));
}

TEST_CASE("perfect mirrors: energy, force and mass correction") {
  const auto s = casimir_energy_perfect(1.0);
  CHECK(s.F == doctest::Approx(pi / 24.0).epsilon(1e-15));
  REQUIRE(s.U.has_value());
  CHECK(*s.U == doctest::Approx(-pi / 24.0).epsilon(1e-15));
  CHECK(s.E_f == doctest::Approx(-pi / 24.0).epsilon(1e-15));
  CHECK(s.delta_m == doctest::Approx(-pi / 12.0).epsilon(1e-15));
  // μc² = 2U
  const auto c = coefficients_perfect({1.0, MirrorModel::perfect(), MirrorModel::perfect()});
  CHECK(rel(c.mu_sum, 2.0 * *s.U) < 1e-12);

  const double q = 1e-6;
  const Units si = Units::si();
  const auto s_si = casimir_energy_perfect(q, si);
  CHECK(s_si.F == doctest::Approx(pi * si.hbar * si.c / (24.0 * q * q)).epsilon(1e-14));
  CHECK(*s_si.U == doctest::Approx(-pi * si.hbar * si.c / (24.0 * q)).epsilon(1e-14));
  CHECK(s_si.delta_m == doctest::Approx(-2.0 * s_si.F * q / (si.c * si.c)).epsilon(1e-14));
  CHECK(code_of([] { casimir_energy_perfect(0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("perfect quadrature path reproduces the closed form") {
  const CavityConfig cfg(1.0, MirrorModel::perfect(), MirrorModel::perfect());
  const auto s = casimir_force_quadrature(cfg);
  CHECK(rel(s.F, pi / 24.0) < 1e-9);
}

TEST_CASE("lorentzian force and stiffness against the imaginary-axis formula") {
  SUBCASE("reference point") {
    CHECK(oracle::force(2.0, 2.0, 1.0) == doctest::Approx(0.0643218155827).epsilon(1e-10));
    CHECK(oracle::force_slope(2.0, 2.0, 1.0) == doctest::Approx(-0.0941464919741153).epsilon(1e-10));
  }
  for (auto [c1, c2, q] : {std::tuple{2.0, 2.0, 1.0}, {1.0, 10.0, 1.0}, {30.0, 30.0, 0.5}, {5.0, 0.7, 2.0}}) {
    CAPTURE(c1);
    CAPTURE(c2);
    CAPTURE(q);
    const auto cfg = lorentz_cavity(c1, c2, q);
    const auto s = casimir_force_partial(cfg);
    const auto co = coefficients_partial(cfg);
    // the oracle works in units of τ; F ∝ 1/τ² and κ ∝ 1/τ³ at fixed Ωτ
    const double F = oracle::force(c1 * q, c2 * q, 1.0) / (q * q);
    const double k = oracle::force_slope(c1 * q, c2 * q, 1.0) / (q * q * q);
    CHECK(rel(s.F, F) < 1e-9);
    CHECK(rel(co.kappa[0][0], k) < 1e-9);
    CHECK(rel(co.kappa[0][1], -k) < 1e-9);
    CHECK(std::abs(co.kappa_sum) < 1e-10 * std::abs(k));
    CHECK(std::abs(co.lambda_sum) < 1e-8 * std::abs(k) * q);
    CHECK(co.achieved_tolerance < 1e-8);
    CHECK(co.imaginary_residue < 1e-8);
    CHECK(co.method == CoefficientMethod::Quadrature);
  }
}

TEST_CASE("stiffness equals the finite-difference force slope") {
  for (double cutoff : {3.0, 40.0}) {
    const auto cfg = lorentz_cavity(cutoff, cutoff);
    const double h = 1e-4;
    const double fd = (casimir_force_partial(cfg.with_separation(1.0 + h)).F -
                       casimir_force_partial(cfg.with_separation(1.0 - h)).F) /
                      (2.0 * h);
    CHECK(rel(coefficients(cfg).kappa[0][0], fd) < 1e-5);
  }
}

TEST_CASE("inertia correction equals -2Fq/c^2 for lorentzian mirrors") {
  for (double cutoff : {1.0, 10.0, 100.0}) {
    const auto cfg = lorentz_cavity(cutoff, cutoff);
    const auto co = coefficients(cfg);
    const auto s = casimir_force_partial(cfg);
    CHECK(rel(co.mu_sum, -2.0 * s.F) < 1e-6);
    CHECK(rel(co.mu_sum_direct, co.mu_sum) < 1e-6);
    const auto mc = global_mass_correction(cfg);
    CHECK(mc.relative_gap < 1e-6);
    CHECK(mc.method == CoefficientMethod::Quadrature);
    CHECK(co.mu_sum < 0.0);
  }
}

TEST_CASE("lorentzian coefficients approach the perfect limit monotonically") {
  double last = 1e300;
  for (double cutoff : {10.0, 100.0, 1000.0}) {
    const double gap = std::abs(coefficients(lorentz_cavity(cutoff, cutoff)).mu_sum + pi / 12.0);
    CHECK(gap < last);
    last = gap;
  }
  const auto co = coefficients(lorentz_cavity(1000.0, 1000.0));
  CHECK(co.mu[0][0] == doctest::Approx(-0.1137927).epsilon(1e-2));
  CHECK(co.mu[0][1] == doctest::Approx(-0.0171075).epsilon(2e-2));
}

TEST_CASE("viscosity sums to zero although the entries do not") {
  const double c = 4.0, tau = 1.0;
  const auto co = coefficients(lorentz_cavity(c, c, tau));
  // boundary term at ω = 0 of the total-derivative integrand
  const double tau_e = tau + 1.0 / c;
  CHECK(co.lambda[0][0] == doctest::Approx(1.0 / (4.0 * pi * tau_e * tau_e)).epsilon(1e-8));
  CHECK(co.lambda[0][1] == doctest::Approx(-co.lambda[0][0]).epsilon(1e-10));
  CHECK(std::abs(co.lambda_sum) < 1e-10);
}

TEST_CASE("mixed perfect/lorentzian configurations go through quadrature") {
  const CavityConfig cfg(1.0, MirrorModel::perfect(), MirrorModel::lorentzian(3.0));
  const auto co = coefficients(cfg);
  CHECK(co.method == CoefficientMethod::Quadrature);
  CHECK(rel(co.kappa[0][0], oracle::force_slope(0.0, 3.0, 1.0)) < 1e-8);
  CHECK(rel(casimir_force_quadrature(cfg).F, oracle::force(0.0, 3.0, 1.0)) < 1e-8);
  CHECK(code_of([&] { coefficients_partial(cfg); }) == ErrorCode::UnsupportedModel);
  CHECK(code_of([&] { casimir_force_partial(cfg); }) == ErrorCode::UnsupportedModel);
  CHECK(code_of([] { coefficients_perfect(lorentz_cavity(1, 1)); }) == ErrorCode::UnsupportedModel);
}

TEST_CASE("SI units rescale quadrature results") {
  const double q = 1e-6;
  const Units si = Units::si();
  const double cutoff_natural = 10.0;  // Ωτ
  const CavityConfig cfg(q, MirrorModel::lorentzian(cutoff_natural * si.c / q),
                         MirrorModel::lorentzian(cutoff_natural * si.c / q), si);
  const auto s = casimir_force_partial(cfg);
  const double F = oracle::force(cutoff_natural, cutoff_natural, 1.0) * si.hbar * si.c / (q * q);
  CHECK(rel(s.F, F) < 1e-9);
  const auto mc = global_mass_correction(cfg);
  CHECK(mc.via_force == doctest::Approx(-2.0 * F * q / (si.c * si.c)).epsilon(1e-9));
}

TEST_CASE("invalid configurations") {
  CHECK(code_of([] { CavityConfig(0.0, MirrorModel::perfect(), MirrorModel::perfect()); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { CavityConfig(-1.0, MirrorModel::perfect(), MirrorModel::perfect()); }) ==
        ErrorCode::InvalidArgument);
  QuadratureSettings tight;
  tight.rel_tol = 1e-30;
  tight.oscillatory.max_intervals = 8;
  const auto cfg = lorentz_cavity(2.0, 2.0);
  CHECK(code_of([&] { coefficients(cfg, tight); }) == ErrorCode::Accuracy);
  try {
    coefficients(cfg, tight);
  } catch (const AccuracyError& e) {
    CHECK(e.achieved() > 0.0);
  }
}
