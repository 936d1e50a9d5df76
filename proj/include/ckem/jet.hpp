#pragma once

// Truncated second-order Taylor arithmetic in N variables.
//
// A Jet<N> carries the value, gradient and full (symmetric) Hessian of a
// scalar with respect to N seed variables. Every operation propagates the
// three orders exactly, so second derivatives of rational/log/power
// expressions come out to rounding, with no step-size error.

#include <array>
#include <cmath>
#include <cstddef>

namespace ckem {

template <std::size_t N>
struct Jet {
  double v = 0.0;
  std::array<double, N> g{};
  std::array<std::array<double, N>, N> h{};

  constexpr Jet() = default;
  constexpr Jet(double value) : v(value) {}  // NOLINT: constants promote implicitly

  /// Independent variable number `k` evaluated at `value`.
  static Jet variable(double value, std::size_t k) {
    Jet x(value);
    x.g[k] = 1.0;
    return x;
  }

  double value() const { return v; }
  double d(std::size_t i) const { return g[i]; }
  double d2(std::size_t i, std::size_t j) const { return h[i][j]; }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (std::size_t i = 0; i < N; ++i) {
      g[i] += o.g[i];
      for (std::size_t j = 0; j < N; ++j) h[i][j] += o.h[i][j];
    }
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (std::size_t i = 0; i < N; ++i) {
      g[i] -= o.g[i];
      for (std::size_t j = 0; j < N; ++j) h[i][j] -= o.h[i][j];
    }
    return *this;
  }
  Jet& operator*=(double s) {
    v *= s;
    for (std::size_t i = 0; i < N; ++i) {
      g[i] *= s;
      for (std::size_t j = 0; j < N; ++j) h[i][j] *= s;
    }
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.v * b.v);
    for (std::size_t i = 0; i < N; ++i) {
      r.g[i] = a.v * b.g[i] + a.g[i] * b.v;
      for (std::size_t j = 0; j < N; ++j) {
        r.h[i][j] = a.v * b.h[i][j] + a.h[i][j] * b.v + a.g[i] * b.g[j] +
                    a.g[j] * b.g[i];
      }
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(double s, const Jet& b) { return s * reciprocal(b); }

  /// Applies a scalar function given its value and first two derivatives at v.
  Jet compose(double f0, double f1, double f2) const {
    Jet r(f0);
    for (std::size_t i = 0; i < N; ++i) {
      r.g[i] = f1 * g[i];
      for (std::size_t j = 0; j < N; ++j) {
        r.h[i][j] = f1 * h[i][j] + f2 * g[i] * g[j];
      }
    }
    return r;
  }

  friend Jet reciprocal(const Jet& x) {
    const double inv = 1.0 / x.v;
    return x.compose(inv, -inv * inv, 2.0 * inv * inv * inv);
  }
  friend Jet log(const Jet& x) {
    const double inv = 1.0 / x.v;
    return x.compose(std::log(x.v), inv, -inv * inv);
  }
  friend Jet exp(const Jet& x) {
    const double e = std::exp(x.v);
    return x.compose(e, e, e);
  }
  friend Jet sqrt(const Jet& x) {
    const double s = std::sqrt(x.v);
    return x.compose(s, 0.5 / s, -0.25 / (s * x.v));
  }
  friend Jet pow(const Jet& x, double r) {
    const double p2 = std::pow(x.v, r - 2.0);
    return x.compose(p2 * x.v * x.v, r * p2 * x.v, r * (r - 1.0) * p2);
  }
};

using Jet1 = Jet<1>;
using Jet2 = Jet<2>;

}  // namespace ckem
