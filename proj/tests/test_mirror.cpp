#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <vector>

#include "casimir/error.hpp"
#include "casimir/mirror.hpp"
#include "oracles/cauchy.hpp"
#include "oracles/transfer_matrix.hpp"

using casimir::cd;
using casimir::ErrorCode;
using casimir::MirrorModel;

namespace {

bool close(cd a, cd b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const casimir::Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  return g;
}

}  // namespace

TEST_CASE("perfect mirror reflects with r = -1 and no slope") {
  const auto m = MirrorModel::perfect();
  for (double w : {-3.0, 0.0, 0.7, 1e6}) {
    CHECK(m.reflectivity(w) == cd(-1.0, 0.0));
    CHECK(m.derivative(w) == cd(0.0, 0.0));
  }
  const auto s = m.transmission(1.0);
  CHECK_FALSE(s.supported);
  CHECK(s.value == cd(0.0, 0.0));
  CHECK(m.describe() == "perfect");
}

TEST_CASE("lorentzian amplitudes at reference frequencies") {
  const double cutoff = 3.0;
  const auto m = MirrorModel::lorentzian(cutoff);
  CHECK(close(m.reflectivity(0.0), {-1.0, 0.0}, 1e-15));
  CHECK(close(m.reflectivity(cutoff), {-0.5, -0.5}, 1e-15));
  CHECK(close(m.derivative(0.0), {0.0, -1.0 / cutoff}, 1e-15));
  CHECK(close(MirrorModel::lorentzian(2.0).derivative(2.0), {0.25, 0.0}, 1e-15));
  CHECK(close(m.transmission(0.0).value, {0.0, 0.0}, 1e-15));
  CHECK(close(m.transmission(cutoff).value, {0.5, -0.5}, 1e-15));
  CHECK(std::abs(m.transmission(1e9).value - 1.0) < 1e-8);
}

TEST_CASE("lorentzian matches an independently written pole form, also off the real axis") {
  for (double cutoff : {0.5, 2.0, 40.0}) {
    const auto m = MirrorModel::lorentzian(cutoff);
    for (cd w : {cd(0.3, 0.0), cd(-2.0, 0.0), cd(1.0, 0.5), cd(7.0, 3.0)}) {
      CHECK(close(m.reflectivity(w), oracle::lorentzian_r(cutoff, w), 1e-14));
    }
  }
}

TEST_CASE("lorentzian derivative agrees with a Cauchy-contour derivative") {
  const auto m = MirrorModel::lorentzian(1.7);
  for (double w : {-4.0, 0.0, 0.2, 1.7, 25.0}) {
    const cd want = oracle::cauchy_derivative([&](cd z) { return oracle::lorentzian_r(1.7, z); }, cd(w, 0.0), 1, 0.3);
    CHECK(close(m.derivative(w), want, 1e-12));
  }
}

TEST_CASE("lorentzian derivative agrees with central finite differences") {
  const auto m = MirrorModel::lorentzian(5.0);
  for (double w : {-3.0, 0.4, 5.0, 60.0}) {
    const double h = 1e-5 * std::max(1.0, std::abs(w));
    const cd fd = (m.reflectivity(w + h) - m.reflectivity(w - h)) / (2.0 * h);
    CHECK(std::abs(m.derivative(w) - fd) <= 1e-6 * std::abs(m.derivative(w)));
  }
}

TEST_CASE("lorentzian is unitary, bounded and reality-symmetric on a grid") {
  const auto m = MirrorModel::lorentzian(0.8);
  for (double w : linear_grid(-50.0, 50.0, 1001)) {
    const cd r = m.reflectivity(w);
    const cd s = m.transmission(w).value;
    CHECK(std::norm(r) + std::norm(s) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r) <= 1.0 + 1e-12);
    CHECK(std::abs(m.reflectivity(-w) - std::conj(r)) <= 1e-12);
  }
}

TEST_CASE("invalid lorentzian cutoffs are rejected") {
  CHECK(code_of([] { MirrorModel::lorentzian(0.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { MirrorModel::lorentzian(-1.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { MirrorModel::lorentzian(std::nan("")); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("tabulated model interpolates samples and mirrors negative frequencies") {
  std::vector<double> w = {0.0, 1.0, 2.0, 4.0};
  std::vector<cd> r = {{-1.0, 0.0}, {-0.5, -0.5}, {-0.2, -0.4}, {-0.05, -0.2}};
  const auto m = MirrorModel::tabulated(w, r, "table");
  CHECK(close(m.reflectivity(1.0), r[1], 1e-15));
  CHECK(close(m.reflectivity(1.5), {-0.35, -0.45}, 1e-15));
  CHECK(close(m.reflectivity(-1.5), {-0.35, 0.45}, 1e-15));
  CHECK(m.support_max() == 4.0);
  CHECK(code_of([&] { m.reflectivity(4.5); }) == ErrorCode::Range);
  CHECK(code_of([&] { m.reflectivity(cd(1.0, 0.1)); }) == ErrorCode::UnsupportedModel);
}

TEST_CASE("tabulated inputs are validated") {
  CHECK(code_of([] { MirrorModel::tabulated({0.0, 1.0}, {{-1, 0}, {-1, 0}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { MirrorModel::tabulated({0.0, 2.0, 1.0}, {{-1, 0}, {-1, 0}, {-1, 0}}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { MirrorModel::tabulated({-1.0, 1.0, 2.0}, {{-1, 0}, {-1, 0}, {-1, 0}}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { MirrorModel::tabulated({0.0, 1.0, 2.0}, {{-1, 0}, {-1, 0}}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("tabulated derivative follows the sampled slope") {
  const auto lor = MirrorModel::lorentzian(1.0);
  std::vector<double> w;
  std::vector<cd> r;
  for (int k = 0; k <= 4000; ++k) {
    w.push_back(k * 0.005);
    r.push_back(lor.reflectivity(w.back()));
  }
  const auto tab = MirrorModel::tabulated(w, r);
  for (double x : {0.3, 1.0, 7.5}) {
    CHECK(std::abs(tab.derivative(x) - lor.derivative(x)) < 1e-4);
    CHECK(std::abs(tab.derivative(-x) + std::conj(lor.derivative(x))) < 1e-4);
  }
}

TEST_CASE("mirror CSV round trip") {
  const char* path = "mirror_roundtrip.csv";
  {
    std::ofstream f(path);
    f << "omega,re_r,im_r\n0,-1,0\n1,-0.5,-0.5\n2,-0.2,-0.4\n";
  }
  const auto m = MirrorModel::from_csv(path);
  CHECK(m.kind() == casimir::MirrorKind::Tabulated);
  CHECK(close(m.reflectivity(0.5), {-0.75, -0.25}, 1e-15));
  std::remove(path);
  CHECK(code_of([] { MirrorModel::from_csv("does/not/exist.csv"); }) == ErrorCode::Io);
}

TEST_CASE("physicality: causal lorentzian passes on a dense grid") {
  const auto m = MirrorModel::lorentzian(1.0);
  const auto grid = linear_grid(0.01, 1000.0, 100000);
  const auto rep = casimir::verify_physicality(m, grid);
  CHECK(rep.passes);
  CHECK(rep.transparent);
  CHECK(rep.kk_residual < 1e-3);
  // the half-density grid is reported alongside
  CHECK(rep.kk_residual_coarse > 0.0);
  CHECK(rep.kk_residual_coarse < 1e-3);
}

TEST_CASE("physicality: anti-causal model fails the Kramers-Kronig test") {
  // −1/(1 + iω/Ω): pole in the upper half plane
  const auto grid = linear_grid(0.01, 1000.0, 20000);
  std::vector<double> w(grid.begin(), grid.end());
  w.insert(w.begin(), 0.0);
  std::vector<cd> r;
  for (double x : w) r.push_back(-1.0 / (1.0 + cd(0.0, x)));
  const auto bad = MirrorModel::tabulated(w, r, "anticausal");
  const auto rep = casimir::verify_physicality(bad, grid);
  CHECK_FALSE(rep.passes);
  CHECK(rep.kk_residual > 0.1);
}

TEST_CASE("physicality: sampled lorentzian passes, amplified one breaks the bound") {
  const auto lor = MirrorModel::lorentzian(1.0);
  std::vector<double> w;
  std::vector<cd> r, big;
  for (int k = 0; k <= 20000; ++k) {
    w.push_back(k * 0.05);
    r.push_back(lor.reflectivity(w.back()));
    big.push_back(1.2 * r.back());
  }
  const std::vector<double> grid(w.begin() + 1, w.end());
  CHECK(casimir::verify_physicality(MirrorModel::tabulated(w, r), grid).passes);
  const auto rep = casimir::verify_physicality(MirrorModel::tabulated(w, big), grid);
  CHECK_FALSE(rep.passes);
  // largest |r| on the grid sits at its first point, ω = 0.05
  CHECK(rep.max_bound_excess == doctest::Approx(1.2 / std::sqrt(1.0 + 0.05 * 0.05) - 1.0).epsilon(1e-9));
}

TEST_CASE("physicality: perfect mirror is exempt and flagged not transparent") {
  const auto rep = casimir::verify_physicality(MirrorModel::perfect(), linear_grid(0.1, 10.0, 10));
  CHECK(rep.exempt);
  CHECK_FALSE(rep.transparent);
  CHECK(code_of([] { casimir::verify_physicality(MirrorModel::perfect(), std::vector<double>{1.0, 0.5, 2.0, 3.0}); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("rescaling multiplies every frequency") {
  const auto m = MirrorModel::lorentzian(2.0).rescaled(0.5);
  CHECK(m.cutoff() == doctest::Approx(1.0));
  CHECK(close(m.reflectivity(1.0), {-0.5, -0.5}, 1e-15));
}
