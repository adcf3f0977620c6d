#pragma once

// Reference values computed independently of the library.

#include <cmath>
#include <functional>
#include <utility>

namespace oracle {

// Frobenius series of the regular solution of
//   -u'' + (l(l+1)/x^2 + gamma/x + c) u = z u,   u ~ sqrt(pi) x^{l+1} / (2^{l+1} Gamma(l+3/2)).
// Coefficients: a_k k (k + 2l + 1) = gamma a_{k-1} + (c - z) a_{k-2}.
// Cancellation limits it to moderate |z| (a few hundred) for z > 0.
inline std::pair<double, double> frobenius(double l, double gamma, double c, double z, double x) {
  using R = long double;
  const R a0 = std::sqrt(std::acos(R(-1))) / (std::pow(R(2), R(l + 1)) * std::tgamma(R(l) + R(1.5)));
  R am2 = 0, am1 = a0;
  R xp = std::pow(R(x), R(l + 1));
  R value = a0 * xp, deriv = a0 * R(l + 1) * xp / R(x);
  for (int k = 1; k < 2000; ++k) {
    const R ak = (R(gamma) * am1 + (R(c) - R(z)) * am2) / (R(k) * (R(k) + 2 * R(l) + 1));
    xp *= R(x);
    const R tv = ak * xp, td = ak * (R(k) + R(l) + 1) * xp / R(x);
    value += tv;
    deriv += td;
    am2 = am1;
    am1 = ak;
    if (k > 20 && std::fabs(tv) < 1e-22L * std::fabs(value) && std::fabs(td) < 1e-22L * std::fabs(deriv) &&
        std::fabs(ak) < 1e-30L)
      break;
  }
  return {static_cast<double>(value), static_cast<double>(deriv)};
}

// Plain bisection on a sign change.
inline double bisect(const std::function<double(double)>& f, double a, double b, int iters = 200) {
  double fa = f(a);
  for (int i = 0; i < iters && b - a > 1e-15 * std::fabs(b); ++i) {
    const double m = 0.5 * (a + b), fm = f(m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// l = 1, q = 0 closed forms for z > 0 (k = sqrt z) and z < 0 (s = sqrt(-z)).
inline double phi1(double z, double x) {
  if (z > 0) {
    const double k = std::sqrt(z), w = k * x;
    return (std::sin(w) / w - std::cos(w)) / (k * k);
  }
  const double s = std::sqrt(-z), w = s * x;
  return (std::cosh(w) - std::sinh(w) / w) / (s * s);
}

inline double theta1(double z, double x) {
  if (z > 0) {
    const double k = std::sqrt(z), w = k * x;
    return k * (std::cos(w) / w + std::sin(w));
  }
  const double s = std::sqrt(-z), w = s * x;
  return std::cosh(w) / x - s * std::sinh(w);
}

}  // namespace oracle
