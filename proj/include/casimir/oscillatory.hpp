#pragma once

// Semi-infinite integrals ∫₀^∞ h(ω) dω of the cavity integrands.
//
// Every integrand met in this library is a sum h = up + down where `up` is
// analytic in the upper half-plane and carries a factor e^{2iωτ}, and `down`
// is analytic in the lower half-plane and carries e^{−2iωτ}. On the real axis
// they oscillate with period π/τ and decay slowly (or not at all, in the
// Abel sense) until the mirrors become transparent.
//
// Strategy for analytic mirror models: integrate h on [0, X] along the real
// axis with fringe-aligned adaptive Gauss–Kronrod panels, then follow the
// vertical rays X + iy (for `up`) and X − iy (for `down`), on which the
// oscillating factors decay as e^{−2yτ}. For tabulated models, which cannot
// be continued off the real axis, partial sums over whole fringes are
// extrapolated to infinitely many fringes (Richardson in 1/K).
//
// Near ω = 0 the individual terms of h may be large and cancel; a fixed
// three-point rule on [0, ε/τ] keeps the adaptive integrator from chasing
// that rounding noise.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "casimir/error.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

enum class TailMethod { Auto, ComplexRay, Richardson };

struct OscillatoryOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  double small_radius = 1e-3;      // in units of ωτ
  double real_axis_fringes = 0.5;  // ray abscissa X = fringes·π/τ
  double ray_length = 20.0;        // in units of 1/τ; e^{−40} residual
  int max_intervals = 4000;
  TailMethod tail = TailMethod::Auto;
  int richardson_levels = 5;
  int richardson_min_fringes = 4;
};

template <class V>
struct OscillatoryResult {
  V value{};
  double abs_error = 0.0;
  int evaluations = 0;
  TailMethod tail = TailMethod::ComplexRay;
  bool converged = true;
};

namespace detail {

template <class V>
V neville_at_zero(const std::vector<double>& x, std::vector<V> y) {
  const std::size_t n = x.size();
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      const double denom = x[i] - x[i + m];
      y[i] = (1.0 / denom) * (x[i] * y[i + 1] - x[i + m] * y[i]);
    }
  }
  return y[0];
}

}  // namespace detail

/// `up` and `down` are callables taking std::complex<double> and returning V.
/// `analytic` says whether they may be evaluated off the real axis;
/// `support_max` bounds the real frequencies they accept.
template <class V, class Up, class Down>
OscillatoryResult<V> integrate_semi_infinite(Up&& up, Down&& down, double tau, bool analytic,
                                             double support_max, const OscillatoryOptions& opt,
                                             const std::vector<double>& breakpoints = {}) {
  using cplx = std::complex<double>;
  OscillatoryResult<V> out;
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "oscillatory integral needs tau > 0");

  const double fringe = std::numbers::pi / tau;
  auto real_integrand = [&](double x) -> V { return up(cplx(x, 0.0)) + down(cplx(x, 0.0)); };
  const QuadOptions qopt{opt.abs_tol, opt.rel_tol, opt.max_intervals};

  TailMethod method = opt.tail;
  if (method == TailMethod::Auto) method = analytic ? TailMethod::ComplexRay : TailMethod::Richardson;
  if (method == TailMethod::ComplexRay && !analytic) {
    throw Error(ErrorCode::UnsupportedModel, "complex-ray tail needs analytic mirror models");
  }
  out.tail = method;

  auto add = [&](const QuadResult<V>& r) {
    out.value += r.value;
    out.abs_error += r.abs_error;
    out.evaluations += r.evaluations;
    out.converged = out.converged && r.converged;
  };

  // panel edges: fringe multiples plus caller breakpoints, restricted to (lo, hi)
  auto edges = [&](double lo, double hi) {
    std::vector<double> e;
    for (double k = std::ceil(lo / fringe); k * fringe < hi; k += 1.0) e.push_back(k * fringe);
    for (double b : breakpoints) e.push_back(b);
    return e;
  };

  if (method == TailMethod::ComplexRay) {
    const double x_ray = opt.real_axis_fringes * fringe;
    const double eps = std::min(opt.small_radius / tau, 0.1 * x_ray);
    out.value += gauss_legendre3<V>(real_integrand, 0.0, eps);
    out.evaluations += 3;
    add(integrate<V>(real_integrand, eps, x_ray, qopt, edges(eps, x_ray)));

    const double len = opt.ray_length / tau;
    const std::vector<double> ray_cuts{0.25 / tau, 1.0 / tau, 3.0 / tau, 8.0 / tau};
    auto up_ray = [&](double y) -> V { return cplx(0.0, 1.0) * up(cplx(x_ray, y)); };
    auto down_ray = [&](double y) -> V { return cplx(0.0, -1.0) * down(cplx(x_ray, -y)); };
    add(integrate<V>(up_ray, 0.0, len, qopt, ray_cuts));
    add(integrate<V>(down_ray, 0.0, len, qopt, ray_cuts));
    return out;
  }

  // Richardson over whole fringes
  const int levels = std::max(2, opt.richardson_levels);
  const double reach = std::isfinite(support_max) ? support_max : std::numeric_limits<double>::max();
  long top = static_cast<long>(opt.richardson_min_fringes) << (levels - 1);
  if (std::isfinite(support_max)) {
    const long available = static_cast<long>(std::floor(reach / fringe));
    const long base = available >> (levels - 1);
    if (base < 1) {
      throw AccuracyError(std::numeric_limits<double>::infinity(),
                          "frequency support too short for fringe extrapolation");
    }
    top = base << (levels - 1);
  }
  const long base = top >> (levels - 1);

  const double eps = std::min(opt.small_radius / tau, 0.1 * fringe);
  out.value += gauss_legendre3<V>(real_integrand, 0.0, eps);
  out.evaluations += 3;

  std::vector<double> inv_k;
  std::vector<V> partial;
  double lo = eps;
  for (long k = 1; k <= top; ++k) {
    const double hi = k * fringe;
    std::vector<double> cuts;
    for (double b : breakpoints) {
      if (b > lo && b < hi) cuts.push_back(b);
    }
    add(integrate<V>(real_integrand, lo, hi, qopt, cuts));
    lo = hi;
    if (k % base == 0 && ((k / base) & (k / base - 1)) == 0) {
      inv_k.push_back(1.0 / static_cast<double>(k));
      partial.push_back(out.value);
    }
  }
  V best = detail::neville_at_zero<V>(inv_k, partial);
  std::vector<double> inv_k_prev(inv_k.begin(), inv_k.end() - 1);
  std::vector<V> partial_prev(partial.begin(), partial.end() - 1);
  V prev = detail::neville_at_zero<V>(inv_k_prev, partial_prev);
  out.abs_error += magnitude(best - prev);
  out.value = best;
  return out;
}

}  // namespace casimir
