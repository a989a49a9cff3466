#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "casimir/error.hpp"
#include "casimir/spectral.hpp"
#include "casimir/time_domain.hpp"

using namespace casimir;
using std::numbers::pi;

namespace {

const CavityConfig kPerfect(1.0, MirrorModel::perfect(), MirrorModel::perfect());

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

double max_abs(const std::vector<double>& v, std::size_t from = 0) {
  double m = 0.0;
  for (std::size_t k = from; k < v.size(); ++k) m = std::max(m, std::abs(v[k]));
  return m;
}

std::size_t index_at(const Trajectory& tr, double t) {
  return static_cast<std::size_t>(std::lround((t - tr.t0()) / tr.dt()));
}

}  // namespace

TEST_CASE("motion derivatives agree with finite differences of the lower order") {
  const Motion motions[] = {
      Motion::gaussian_pulse(1e-3, 5.0, 0.8),
      Motion::sinusoid(2e-4, 1.7, 0.3, 1.0, 3.0),
      Motion::polynomial(1e-4, 3e-5, 0.5, 2.0),
  };
  for (const Motion& m : motions) {
    for (double t : {1.7, 2.6, 3.9, 5.2, 7.0}) {
      const double h = 1e-4;
      const auto p = m.derivatives(t + h), n = m.derivatives(t - h), c = m.derivatives(t);
      for (int k = 1; k <= 4; ++k) {
        const double fd = (p[k - 1] - n[k - 1]) / (2.0 * h);
        CHECK(std::abs(c[k] - fd) <= 1e-6 * (std::abs(c[k]) + 1e-6 * std::abs(m.amplitude + m.velocity)));
      }
    }
  }
}

TEST_CASE("motion shapes") {
  const auto g = Motion::gaussian_pulse(2.0, 1.0, 0.5);
  CHECK(g.derivative(0, 1.0) == doctest::Approx(2.0));
  CHECK(g.derivative(0, 1.5) == doctest::Approx(2.0 * std::exp(-0.5)).epsilon(1e-15));
  CHECK(g.derivative(1, 1.5) == doctest::Approx(-2.0 * 2.0 * std::exp(-0.5)).epsilon(1e-14));

  // before the switch-on time everything vanishes; after the ramp the bare shape remains
  const auto p = Motion::polynomial(0.3, 0.2, 2.0, 1.0);
  for (double v : p.derivatives(1.99)) CHECK(v == 0.0);
  const auto after = p.derivatives(5.0);
  CHECK(after[0] == doctest::Approx(0.3 * 3.0 + 0.1 * 9.0).epsilon(1e-15));
  CHECK(after[1] == doctest::Approx(0.3 + 0.2 * 3.0).epsilon(1e-15));
  CHECK(after[2] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(after[3] == 0.0);

  const auto s = Motion::sinusoid(1.0, 2.0, 0.0, 0.0, 0.5);
  CHECK(s.derivative(2, 3.0) == doctest::Approx(-4.0 * std::sin(6.0)).epsilon(1e-14));
  CHECK(Motion::rest().derivative(3, 1.0) == 0.0);
  CHECK(code_of([] { Motion::gaussian_pulse(1.0, 0.0, 0.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { Motion::polynomial(1.0, 0.0, 0.0, -1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("stencil derivatives of sampled data track the analytic ones") {
  const auto m = Motion::gaussian_pulse(1e-4, 10.0, 1.5);
  const double dt = 0.02;
  const auto an = Trajectory::analytic(0.0, dt, 1001, m, Motion::rest());
  const auto tab = Trajectory::tabulated(0.0, dt, an.samples(1), an.samples(2));
  CHECK_FALSE(tab.is_analytic());
  for (std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{300}, std::size_t{500}, std::size_t{999},
                        std::size_t{1000}}) {
    for (int order = 1; order <= 3; ++order) {
      const double want = an.derivative(1, order, k);
      CHECK(std::abs(tab.derivative(1, order, k) - want) < 2e-5 * std::pow(1.5, -order) * 1e-4 * 10.0);
    }
  }
  CHECK(tab.derivative_at(1, 2, 10.0) == doctest::Approx(an.derivative_at(1, 2, 10.0)).epsilon(1e-5));
  CHECK(code_of([&] { tab.derivative_at(1, 1, 0.011); }) == ErrorCode::Precondition);
  CHECK(code_of([&] { tab.derivative(1, 5, 0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { tab.derivative(1, 1, 5000); }) == ErrorCode::Range);
}

TEST_CASE("trajectory CSV round trip and validation") {
  const char* path = "trajectory_roundtrip.csv";
  {
    std::ofstream f(path);
    f << "t,dq1,dq2\n";
    for (int k = 0; k < 8; ++k) f << 0.25 * k << ',' << (k > 3 ? 1e-6 * k : 0.0) << ',' << 0.0 << '\n';
  }
  const auto tr = Trajectory::from_csv(path);
  CHECK(tr.size() == 8);
  CHECK(tr.dt() == doctest::Approx(0.25));
  CHECK(tr.samples(1)[5] == doctest::Approx(5e-6));
  CHECK(tr.kind_name() == "tabulated");
  {
    std::ofstream f(path);
    f << "t,dq1,dq2\n0,0,0\n0.1,0,0\n0.3,0,0\n0.4,0,0\n0.5,0,0\n";
  }
  CHECK(code_of([&] { Trajectory::from_csv(path); }) == ErrorCode::Io);
  {
    std::ofstream f(path);
    f << "time,x,y\n0,0,0\n";
  }
  CHECK(code_of([&] { Trajectory::from_csv(path); }) == ErrorCode::Io);
  std::remove(path);
  CHECK(code_of([] { Trajectory::from_csv("no/such/file.csv"); }) == ErrorCode::Io);
  CHECK(code_of([] { Trajectory::tabulated(0.0, 0.1, {0, 0, 0}, {0, 0, 0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { Trajectory::tabulated(0.0, 0.0, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("delay series preconditions") {
  SUBCASE("not at rest") {
    std::vector<double> x(64, 1e-6);
    const auto tr = Trajectory::tabulated(0.0, 0.125, x, std::vector<double>(64, 0.0));
    CHECK(code_of([&] { motional_force_perfect(tr, kPerfect); }) == ErrorCode::Precondition);
  }
  SUBCASE("pulse too close to the start") {
    const auto tr = Trajectory::analytic(0.0, 0.125, 64, Motion::gaussian_pulse(1e-6, 1.0, 1.0), Motion::rest());
    CHECK(code_of([&] { motional_force_perfect(tr, kPerfect); }) == ErrorCode::Precondition);
  }
  SUBCASE("displacement bound") {
    const auto tr = Trajectory::analytic(0.0, 0.125, 256, Motion::gaussian_pulse(1e-2, 16.0, 2.0), Motion::rest());
    CHECK(code_of([&] { motional_force_perfect(tr, kPerfect); }) == ErrorCode::Precondition);
    TimeDomainOptions loose;
    loose.displacement_bound = 0.1;
    CHECK_NOTHROW(motional_force_perfect(tr, kPerfect, loose));
  }
  SUBCASE("tabulated step must divide the delay") {
    const auto an = Trajectory::analytic(0.0, 0.3, 256, Motion::gaussian_pulse(1e-6, 30.0, 3.0), Motion::rest());
    const auto tab = Trajectory::tabulated(0.0, 0.3, an.samples(1), an.samples(2));
    CHECK(code_of([&] { motional_force_perfect(tab, kPerfect); }) == ErrorCode::Precondition);
  }
  SUBCASE("model") {
    const CavityConfig lor(1.0, MirrorModel::lorentzian(2.0), MirrorModel::lorentzian(2.0));
    const auto tr = Trajectory::analytic(0.0, 0.125, 64, Motion::rest(), Motion::rest());
    CHECK(code_of([&] { motional_force_perfect(tr, lor); }) == ErrorCode::UnsupportedModel);
  }
}

TEST_CASE("mirrors at rest feel no motional force") {
  const auto tr = Trajectory::analytic(0.0, 0.125, 200, Motion::rest(), Motion::rest());
  const auto f = motional_force_perfect(tr, kPerfect);
  CHECK(max_abs(f.dF_total) == 0.0);
}

TEST_CASE("steady sinusoidal motion reproduces the compound susceptibility") {
  // both mirrors oscillate together: δF_total = A(ξ̃ sin ωt − ξ cos ωt)
  const double A = 1e-6, w = 1.3, t_on = 0.0, ramp = 60.0;
  const auto m = Motion::sinusoid(A, w, 0.0, t_on, ramp);
  const double dt = 0.125;
  const auto tr = Trajectory::analytic(0.0, dt, 800, m, m);
  const auto f = motional_force_perfect(tr, kPerfect);
  const auto chi = chi_compound_perfect(kPerfect, w);
  double worst = 0.0;
  for (std::size_t k = index_at(tr, 70.0); k < tr.size(); ++k) {
    const double s = tr.time(k) - t_on;
    const double want = A * (chi.dispersive * std::sin(w * s) - chi.dissipative * std::cos(w * s));
    worst = std::max(worst, std::abs(f.dF_total[k] - want));
  }
  CHECK(worst < 1e-6 * A * std::abs(chi.chi));
}

TEST_CASE("uniform acceleration gives -mu a after the switch-on") {
  const double a = 2e-7, ramp = 40.0;
  const auto m = Motion::polynomial(0.0, a, 0.0, ramp);
  const auto tr = Trajectory::analytic(0.0, 0.125, 480, m, m);
  const auto f = motional_force_perfect(tr, kPerfect);
  const double mu = coefficients_perfect(kPerfect).mu_sum;
  for (std::size_t k = index_at(tr, 42.0); k < tr.size(); ++k) {
    CHECK(f.dF_total[k] == doctest::Approx(-mu * a).epsilon(1e-9));
  }
  // the quasistatic expansion is exact here
  const auto qs = quasistatic_force(tr, coefficients_perfect(kPerfect), 1.0);
  CHECK(qs.dF_total.back() == doctest::Approx(-mu * a).epsilon(1e-12));
}

TEST_CASE("a lone mirror radiates only through the third derivative") {
  const auto pulse = Motion::gaussian_pulse(1e-6, 20.0, 2.0);
  const auto tr = Trajectory::analytic(0.0, 0.125, 320, pulse, Motion::rest());
  const auto f = motional_force_single(tr, 1);
  for (std::size_t k = 0; k < tr.size(); k += 17) {
    CHECK(f.dF1[k] == doctest::Approx(pulse.derivative(3, tr.time(k)) / (6.0 * pi)).epsilon(1e-14));
    CHECK(f.dF2[k] == 0.0);
  }
  const double scale = max_abs(f.dF1);
  for (const Motion& m : {Motion::polynomial(1e-5, 0.0, 0.0, 5.0), Motion::polynomial(0.0, 1e-6, 0.0, 5.0)}) {
    const auto g = motional_force_single(Trajectory::analytic(0.0, 0.125, 320, m, Motion::rest()), 1);
    CHECK(max_abs(g.dF1, index_at(tr, 5.0) + 1) <= 1e-10 * scale);
  }
  const auto si = motional_force_single(tr, 2, Units::si());
  CHECK(max_abs(si.dF2) == 0.0);
}

TEST_CASE("delay-series force is linear, causal and time-shift covariant") {
  const auto p1 = Motion::gaussian_pulse(1e-6, 12.0, 1.5);
  const auto p2 = Motion::gaussian_pulse(-4e-7, 21.0, 2.5);
  const double dt = 0.125;
  const auto a = Trajectory::analytic(0.0, dt, 400, p1, Motion::rest());
  const auto b = Trajectory::analytic(0.0, dt, 400, Motion::rest(), p2);
  const auto fa = motional_force_perfect(a, kPerfect), fb = motional_force_perfect(b, kPerfect);
  const auto fab = motional_force_perfect(a + b, kPerfect);
  const double scale = max_abs(fa.dF_total) + max_abs(fb.dF_total);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(std::abs(fab.dF1[k] - fa.dF1[k] - fb.dF1[k]) <= 1e-13 * scale);
    CHECK(std::abs(fab.dF2[k] - fa.dF2[k] - fb.dF2[k]) <= 1e-13 * scale);
  }

  // a motion that differs only after t = 30 leaves the force before 30 unchanged
  const auto c = Trajectory::analytic(0.0, dt, 400, p1, Motion::rest()) +
                 Trajectory::analytic(0.0, dt, 400, Motion::rest(), Motion::gaussian_pulse(1e-6, 45.0, 1.0));
  const auto fc = motional_force_perfect(c, kPerfect);
  for (std::size_t k = 0; k < index_at(a, 30.0); ++k) CHECK(std::abs(fc.dF1[k] - fa.dF1[k]) <= 1e-13 * scale);

  // shifting the pulse by 16 samples shifts the force by the same amount
  auto shifted = p1;
  shifted.center += 16 * dt;
  const auto fs = motional_force_perfect(Trajectory::analytic(0.0, dt, 400, shifted, Motion::rest()), kPerfect);
  for (std::size_t k = 16; k < 400; ++k) CHECK(std::abs(fs.dF2[k] - fa.dF2[k - 16]) <= 1e-11 * scale);
}

TEST_CASE("tabulated delay series matches the analytic one") {
  const auto p = Motion::gaussian_pulse(1e-6, 16.0, 2.0);
  const auto an = Trajectory::analytic(0.0, 1.0 / 32.0, 1600, p, Motion::rest());
  const auto tab = Trajectory::tabulated(an.t0(), an.dt(), an.samples(1), an.samples(2));
  const auto fa = motional_force_perfect(an, kPerfect), ft = motional_force_perfect(tab, kPerfect);
  const double scale = max_abs(fa.dF1);
  for (std::size_t k = 0; k < an.size(); ++k) CHECK(std::abs(ft.dF1[k] - fa.dF1[k]) <= 1e-4 * scale);
}

TEST_CASE("quasistatic force tracks the delay series at low frequency") {
  // ωτ = 0.05: corrections to the quasistatic expansion start at O((ωτ)³)
  const double w = 0.05, ramp = 300.0;
  const auto m = Motion::sinusoid(1e-6, w, 0.0, 0.0, ramp);
  const auto tr = Trajectory::analytic(0.0, 0.5, 1400, m, Motion::rest());
  const auto exact = motional_force_perfect(tr, kPerfect);
  const auto qs = quasistatic_force(tr, coefficients_perfect(kPerfect), 1.0);
  CHECK(qs.warnings.empty());
  const std::size_t from = index_at(tr, ramp + 20.0);
  double worst = 0.0;
  for (std::size_t k = from; k < tr.size(); ++k) worst = std::max(worst, std::abs(qs.dF1[k] - exact.dF1[k]));
  CHECK(worst <= 1e-2 * max_abs(exact.dF1, from));
}

TEST_CASE("quasistatic force warns about high-frequency content") {
  const auto tr = Trajectory::analytic(0.0, 0.125, 400, Motion::gaussian_pulse(1e-6, 25.0, 0.3), Motion::rest());
  CHECK(spectral_energy_fraction(tr, 0.2) < 0.99);
  const auto qs = quasistatic_force(tr, coefficients_perfect(kPerfect), 1.0);
  CHECK_FALSE(qs.warnings.empty());
  const auto slow = Trajectory::analytic(0.0, 1.0, 2000, Motion::gaussian_pulse(1e-6, 1000.0, 100.0), Motion::rest());
  CHECK(spectral_energy_fraction(slow, 0.2) > 0.99);
}

TEST_CASE("frequency-domain force agrees with the delay series for a smooth pulse") {
  const double dt = 0.125;
  const auto p = Motion::gaussian_pulse(1e-6, 32.0, 2.0);
  const auto tr = Trajectory::analytic(0.0, dt, 512, p, Motion::rest());
  const auto delay = motional_force_perfect(tr, kPerfect);
  SpectralForceOptions opt;
  opt.padding = 8;
  const auto freq = motional_force_spectral(tr, perfect_source(kPerfect), opt);
  const double scale = max_abs(delay.dF_total);
  double worst = 0.0;
  for (std::size_t k = index_at(tr, 16.0); k < tr.size(); ++k) {
    worst = std::max(worst, std::abs(freq.dF1[k] - delay.dF1[k]));
    worst = std::max(worst, std::abs(freq.dF2[k] - delay.dF2[k]));
  }
  CHECK(worst <= 1e-4 * scale);
  CHECK_FALSE(freq.annotations.empty());
}

TEST_CASE("frequency-domain force with the quasistatic source equals the time-domain expansion") {
  const CavityConfig lor(1.0, MirrorModel::lorentzian(10.0), MirrorModel::lorentzian(10.0));
  const auto co = coefficients(lor);
  const auto tr = Trajectory::analytic(0.0, 0.25, 1024, Motion::gaussian_pulse(1e-6, 128.0, 16.0),
                                       Motion::gaussian_pulse(5e-7, 120.0, 12.0));
  const auto td = quasistatic_force(tr, co, 1.0);
  SpectralForceOptions opt;
  opt.padding = 4;
  const auto fd = motional_force_spectral(tr, quasistatic_source(co), opt);
  const double scale = max_abs(td.dF1);
  for (std::size_t k = 0; k < tr.size(); k += 7) CHECK(std::abs(fd.dF1[k] - td.dF1[k]) <= 1e-8 * scale);
}
