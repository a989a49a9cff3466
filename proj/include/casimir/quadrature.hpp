#pragma once

// Adaptive Gauss–Kronrod (10/21) quadrature over real intervals, for
// scalar, complex and small fixed-size complex vector integrands.
//
// Everything lives on the stack or in call-local containers; the routines
// are reentrant and safe to call concurrently.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <vector>

namespace casimir {

/// Fixed-size complex vector, used to push several integrands through one
/// adaptive pass.
template <std::size_t N>
struct CVec {
  std::array<std::complex<double>, N> v{};

  std::complex<double>& operator[](std::size_t i) { return v[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return v[i]; }

  CVec& operator+=(const CVec& o) {
    for (std::size_t i = 0; i < N; ++i) v[i] += o.v[i];
    return *this;
  }
  CVec& operator-=(const CVec& o) {
    for (std::size_t i = 0; i < N; ++i) v[i] -= o.v[i];
    return *this;
  }
  CVec& operator*=(std::complex<double> s) {
    for (auto& x : v) x *= s;
    return *this;
  }
  friend CVec operator+(CVec a, const CVec& b) { return a += b; }
  friend CVec operator-(CVec a, const CVec& b) { return a -= b; }
  friend CVec operator*(std::complex<double> s, CVec a) { return a *= s; }
  friend CVec operator*(double s, CVec a) { return a *= std::complex<double>(s); }
};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }
template <std::size_t N>
double magnitude(const CVec<N>& x) {
  double m = 0.0;
  for (const auto& c : x.v) m = std::max(m, std::abs(c));
  return m;
}

template <class V>
struct QuadResult {
  V value{};
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

struct QuadOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-12;
  int max_intervals = 2000;
};

namespace detail {

inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208067394890, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// 10-point Gauss weights for the odd-indexed Kronrod nodes
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class V>
struct Segment {
  double a, b;
  V value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class V, class F>
Segment<V> gk21(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  V center = f(c);
  V kronrod = kWgk[10] * center;
  V gauss{};
  for (std::size_t i = 0; i < 10; ++i) {
    const double dx = h * kXgk[i];
    V sum = f(c - dx) + f(c + dx);
    kronrod += kWgk[i] * sum;
    if (i % 2 == 1) gauss += kWg[i / 2] * sum;
  }
  kronrod = h * kronrod;
  gauss = h * gauss;
  return {a, b, kronrod, magnitude(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive GK21 on [a, b] with optional interior breakpoints.
/// Bisects the interval with the largest error estimate until the summed
/// estimate drops below max(abs_tol, rel_tol·|I|).
template <class V, class F>
QuadResult<V> integrate(F&& f, double a, double b, const QuadOptions& opt = {},
                        const std::vector<double>& breakpoints = {}) {
  QuadResult<V> res;
  if (a == b) return res;

  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<detail::Segment<V>> heap;
  V total{};
  double err = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    auto s = detail::gk21<V>(f, cuts[k], cuts[k + 1]);
    res.evaluations += 21;
    total += s.value;
    err += s.error;
    heap.push(s);
  }

  int intervals = static_cast<int>(heap.size());
  while (err > std::max(opt.abs_tol, opt.rel_tol * magnitude(total))) {
    if (intervals >= opt.max_intervals) {
      res.converged = false;
      break;
    }
    auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {  // interval at machine resolution
      res.converged = false;
      break;
    }
    heap.pop();
    auto left = detail::gk21<V>(f, worst.a, mid);
    auto right = detail::gk21<V>(f, mid, worst.b);
    res.evaluations += 42;
    total += (left.value + right.value) - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }

  // re-sum to shed the drift accumulated by incremental updates
  V fresh{};
  double fresh_err = 0.0;
  while (!heap.empty()) {
    fresh += heap.top().value;
    fresh_err += heap.top().error;
    heap.pop();
  }
  res.value = fresh;
  res.abs_error = fresh_err;
  return res;
}

/// Fixed n-point Gauss–Legendre rule (n = 3), used where adaptivity would
/// chase rounding noise.
template <class V, class F>
V gauss_legendre3(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double x = 0.774596669241483377035853079956480;  // sqrt(3/5)
  V sum = (5.0 / 9.0) * f(c - h * x) + (8.0 / 9.0) * f(c) + (5.0 / 9.0) * f(c + h * x);
  return h * sum;
}

}  // namespace casimir
