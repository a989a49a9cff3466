#pragma once

// Truncated Taylor arithmetic: a Jet holds f, f', f''/2!, ... f^(K)/K! at a
// point. Used to differentiate the analytic trajectory shapes exactly.

#include <array>
#include <cmath>
#include <cstddef>

namespace casimir::detail {

template <std::size_t K>
struct Jet {
  std::array<double, K + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double v) {
    Jet j;
    j.c[0] = v;
    if constexpr (K >= 1) j.c[1] = 1.0;
    return j;
  }

  /// n-th derivative.
  double derivative(std::size_t n) const {
    double f = 1.0;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return c[n] * f;
  }

  friend Jet operator+(Jet a, const Jet& b) {
    for (std::size_t i = 0; i <= K; ++i) a.c[i] += b.c[i];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (std::size_t i = 0; i <= K; ++i) a.c[i] -= b.c[i];
    return a;
  }
  friend Jet operator*(double s, Jet a) {
    for (auto& x : a.c) x *= s;
    return a;
  }
  friend Jet operator+(double s, Jet a) {
    a.c[0] += s;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t i = 0; i <= K; ++i) {
      for (std::size_t j = 0; i + j <= K; ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    // r·b = a, solved order by order
    Jet r;
    for (std::size_t n = 0; n <= K; ++n) {
      double s = a.c[n];
      for (std::size_t j = 1; j <= n; ++j) s -= b.c[j] * r.c[n - j];
      r.c[n] = s / b.c[0];
    }
    return r;
  }
};

template <std::size_t K>
Jet<K> exp(const Jet<K>& a) {
  // r' = a' r  ⇒  n r_n = Σ_{k=1..n} k a_k r_{n−k}
  Jet<K> r;
  r.c[0] = std::exp(a.c[0]);
  for (std::size_t n = 1; n <= K; ++n) {
    double s = 0.0;
    for (std::size_t k = 1; k <= n; ++k) s += static_cast<double>(k) * a.c[k] * r.c[n - k];
    r.c[n] = s / static_cast<double>(n);
  }
  return r;
}

template <std::size_t K>
void sincos(const Jet<K>& a, Jet<K>& s, Jet<K>& c) {
  // s' = a' c, c' = −a' s
  s = Jet<K>{};
  c = Jet<K>{};
  s.c[0] = std::sin(a.c[0]);
  c.c[0] = std::cos(a.c[0]);
  for (std::size_t n = 1; n <= K; ++n) {
    double ss = 0.0, cc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      ss += static_cast<double>(k) * a.c[k] * c.c[n - k];
      cc -= static_cast<double>(k) * a.c[k] * s.c[n - k];
    }
    s.c[n] = ss / static_cast<double>(n);
    c.c[n] = cc / static_cast<double>(n);
  }
}

}  // namespace casimir::detail
