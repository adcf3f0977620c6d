#include "sphspec/specfun.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "sphspec/errors.hpp"

namespace sphspec {

namespace {

using ld = long double;

constexpr ld kPi = 3.141592653589793238462643383279502884L;
constexpr ld kEuler = 0.577215664901532860606512090082402431L;

// Above this argument the small orders come from Hankel-type expansions.
constexpr ld kAsymptoticArg = 17.0L;
// Below this argument K comes from the power series, above from Temme's fraction.
constexpr ld kTemmeArg = 2.0L;
// Fractional parts of nu smaller than this are treated as integer orders.
constexpr ld kIntegerSnap = 1e-9L;

// (w/2)^a * sum_m (sign w^2/4)^m / (m! Gamma(m+a+1)); sign -1 gives J_a, +1 gives I_a.
ld power_series(ld a, ld w, int sign) {
  const ld q = sign * w * w / 4;
  ld term = 1.0L / std::tgamma(a + 1);
  ld sum = term;
  int m = 1;
  for (; m < 600; ++m) {
    term *= q / (m * (m + a));
    sum += term;
    if (m > w && std::fabs(term) <= 1e-21L * std::fabs(sum)) break;
  }
  if (m == 600) throw NumericalError("Bessel power series did not converge");
  return sum * std::pow(w / 2, a);
}

// Y_0, Y_1 (sign -1) or K_0, K_1 (sign +1) from the logarithmic series.
void log_series(ld w, int sign, ld& r0, ld& r1) {
  const ld q = w * w / 4;
  const ld lg = std::log(w / 2);
  ld a = 1;  // (sign q)^m / (m!)^2
  ld b = 1;  // (sign q)^m / (m! (m+1)!)
  ld h = 0;  // harmonic number H_m
  ld f0 = 0, f1 = 0, s0 = 0, s1 = 0;
  for (int m = 0; m < 600; ++m) {
    const ld h1 = h + 1.0L / (m + 1);
    f0 += a;
    f1 += b;
    s0 += h * a;
    s1 += (h + h1 - 2 * kEuler) * b;
    if (m > w && std::fabs(a) < 1e-22L * std::fabs(f0) && std::fabs(b) < 1e-22L * std::fabs(f1)) break;
    a *= sign * q / ((m + 1.0L) * (m + 1.0L));
    b *= sign * q / ((m + 1.0L) * (m + 2.0L));
    h = h1;
  }
  f1 *= w / 2;
  if (sign < 0) {
    r0 = (2 / kPi) * ((lg + kEuler) * f0 - s0);
    r1 = -2 / (kPi * w) + (2 / kPi) * lg * f1 - (w / (2 * kPi)) * s1;
  } else {
    r0 = -(lg + kEuler) * f0 + s0;
    r1 = 1 / w + lg * f1 - (w / 4) * s1;
  }
}

// Hankel expansion coefficients P, Q of order a at argument w.
void hankel_pq(ld a, ld w, ld& p, ld& q) {
  const ld mu = 4 * a * a;
  ld c = 1;
  ld prev = std::numeric_limits<ld>::max();
  p = 1;
  q = 0;
  for (int k = 1; k < 80; ++k) {
    const ld odd = 2 * k - 1;
    c *= (mu - odd * odd) / (8 * k * w);
    const ld ac = std::fabs(c);
    if (ac == 0 || ac > prev) break;
    prev = ac;
    switch (k % 4) {
      case 1: q += c; break;
      case 2: p -= c; break;
      case 3: q -= c; break;
      default: p += c; break;
    }
    if (ac < 1e-22L) break;
  }
}

void hankel_jy(ld a, ld w, ld cw, ld sw, ld& j, ld& y) {
  ld p, q;
  hankel_pq(a, w, p, q);
  const ld phase = (a / 2 + 0.25L) * kPi;
  const ld cp = std::cos(phase), sp = std::sin(phase);
  const ld cchi = cw * cp + sw * sp;
  const ld schi = sw * cp - cw * sp;
  const ld amp = std::sqrt(2 / (kPi * w));
  j = amp * (p * cchi - q * schi);
  y = amp * (p * schi + q * cchi);
}

// e^{-t} I_a(t) from the large-argument expansion.
ld scaled_i_asymptotic(ld a, ld t) {
  const ld mu = 4 * a * a;
  ld c = 1, sum = 1;
  ld prev = std::numeric_limits<ld>::max();
  for (int k = 1; k < 200; ++k) {
    const ld odd = 2 * k - 1;
    c *= -(mu - odd * odd) / (8 * k * t);
    const ld ac = std::fabs(c);
    if (ac == 0 || ac > prev) break;
    prev = ac;
    sum += c;
    if (ac < 1e-22L * std::fabs(sum)) break;
  }
  return sum / std::sqrt(2 * kPi * t);
}

// I_{nu+1}/I_nu by Lentz's method.
ld i_ratio(ld nu, ld t) {
  const ld tiny = 1e-300L;
  ld f = tiny, c = f, d = 0;
  for (int k = 1; k < 100000; ++k) {
    const ld b = 2 * (nu + k) / t;
    d = b + d;
    if (d == 0) d = tiny;
    c = b + 1 / c;
    if (c == 0) c = tiny;
    d = 1 / d;
    const ld delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1) < 1e-19L) return f;
  }
  throw NumericalError("continued fraction for I_{nu+1}/I_nu did not converge");
}

// e^{t} K_mu(t), e^{t} K_{mu+1}(t) for |mu| <= 1/2, t >= 2 (Temme).
void temme_k(ld mu, ld t, ld& k0, ld& k1) {
  ld b = 2 * (1 + t);
  ld d = 1 / b;
  ld h = d, delh = d;
  ld q1 = 0, q2 = 1;
  const ld a1 = 0.25L - mu * mu;
  ld q = a1, c = a1, a = -a1;
  ld s = 1 + q * delh;
  int i = 1;
  for (; i < 100000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0L);
    const ld qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2;
    d = 1 / (b + a * d);
    delh = (b * d - 1) * delh;
    h += delh;
    const ld dels = q * delh;
    s += dels;
    if (std::fabs(dels / s) < 1e-19L) break;
  }
  if (i == 100000) throw NumericalError("Temme continued fraction did not converge");
  h = a1 * h;
  k0 = std::sqrt(kPi / (2 * t)) / s;
  k1 = k0 * (mu + t + 0.5L - h) / t;
}

struct Split {
  long steps;  // nu = mu + steps
  ld mu;       // in [-1/2, 1/2]
  bool integer;
};

Split split_order(const BesselOrder& order) {
  const ld nu = order.nu();
  const long steps = std::lround(order.nu());
  ld mu = nu - steps;
  bool integer = order.is_integer() || std::fabs(mu) < kIntegerSnap;
  if (integer) mu = 0;
  return {steps, mu, integer};
}

ld y_from_j(ld a, ld w) {
  const ld s = std::sin(a * kPi), c = std::cos(a * kPi);
  return (c * power_series(a, w, -1) - power_series(-a, w, -1)) / s;
}

ld k_from_i(ld a, ld t) {
  return (kPi / 2) * (power_series(-a, t, 1) - power_series(a, t, 1)) / std::sin(a * kPi);
}

struct Pair {
  ld v0, v1;  // orders nu and nu+1
};

// Upward three-term recurrence f_{a+1} = (2a/w) f_a - sign f_{a-1}.
Pair recur_up(ld f0, ld f1, ld mu, long steps, ld w, int sign) {
  for (long k = 0; k < steps; ++k) {
    const ld a = mu + 1 + k;
    const ld f2 = (2 * a / w) * f1 - sign * f0;
    f0 = f1;
    f1 = f2;
  }
  return {f0, f1};
}

void jy_full(const BesselOrder& order, ld w, Pair& jj, Pair& yy) {
  const Split sp = split_order(order);
  const ld nu = order.nu();
  ld ja = 0, jb = 0, ya, yb;
  const bool asym = w >= kAsymptoticArg;
  if (asym) {
    const ld cw = std::cos(w), sw = std::sin(w);
    hankel_jy(sp.mu, w, cw, sw, ja, ya);
    hankel_jy(sp.mu + 1, w, cw, sw, jb, yb);
  } else if (sp.integer) {
    log_series(w, -1, ya, yb);
  } else {
    ya = y_from_j(sp.mu, w);
    yb = y_from_j(sp.mu + 1, w);
  }
  yy = recur_up(ya, yb, sp.mu, sp.steps, w, 1);
  if (asym && nu + 1 <= w) {
    jj = recur_up(ja, jb, sp.mu, sp.steps, w, 1);
  } else {
    jj = {power_series(nu, w, -1), power_series(nu + 1, w, -1)};
  }
}

void ik_scaled(const BesselOrder& order, ld t, Pair& ii, Pair& kk) {
  const Split sp = split_order(order);
  const ld nu = order.nu();
  ld ka, kb;
  if (t < kTemmeArg) {
    if (sp.integer) {
      log_series(t, 1, ka, kb);
    } else {
      ka = k_from_i(sp.mu, t);
      kb = k_from_i(sp.mu + 1, t);
    }
    const ld e = std::exp(t);
    ka *= e;
    kb *= e;
  } else {
    temme_k(sp.mu, t, ka, kb);
  }
  kk = recur_up(ka, kb, sp.mu, sp.steps, t, -1);
  if (t < kAsymptoticArg) {
    const ld e = std::exp(-t);
    ii = {power_series(nu, t, 1) * e, power_series(nu + 1, t, 1) * e};
  } else if (t >= 2 * (nu + 1) * (nu + 1)) {
    ii = {scaled_i_asymptotic(nu, t), scaled_i_asymptotic(nu + 1, t)};
  } else {
    const ld f = i_ratio(nu, t);
    const ld i0 = 1 / (t * (kk.v1 + f * kk.v0));
    ii = {i0, f * i0};
  }
}

double checked(ld v, const char* what) {
  if (!std::isfinite(static_cast<double>(v))) {
    throw NumericalError(std::string("non-finite Bessel value: ") + what);
  }
  return static_cast<double>(v);
}

double j_value(const BesselOrder& order, double w) {
  Pair jj, yy;
  jy_full(order, w, jj, yy);
  return static_cast<double>(jj.v0);
}

}  // namespace

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  if (!(nu >= 0.0) || nu > kMaxOrder) {
    throw DomainError("Bessel order must lie in [0, " + std::to_string(kMaxOrder) + "]");
  }
  const double r = std::round(nu);
  integer_ = std::fabs(nu - r) <= 1e-12;
  const double h = std::round(nu - 0.5);
  half_ = std::fabs(nu - 0.5 - h) <= 1e-12;
}

BesselOrder::BesselOrder(double nu, bool half_plus_integer, bool integer)
    : nu_(nu), half_(half_plus_integer), integer_(integer) {
  if (!(nu >= 0.0) || nu > kMaxOrder) {
    throw DomainError("Bessel order must lie in [0, " + std::to_string(kMaxOrder) + "]");
  }
  if (half_ && integer_) throw DomainError("Bessel order cannot be integer and half-integer");
  if (integer_ && std::fabs(nu - std::round(nu)) > 1e-12) throw DomainError("integer flag inconsistent with order");
  if (half_ && std::fabs(nu - 0.5 - std::round(nu - 0.5)) > 1e-12) {
    throw DomainError("half-integer flag inconsistent with order");
  }
}

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn requires x > 0");
  return std::tgamma(x);
}

BesselEval bessel_pair(const BesselOrder& order, double w, ArgKind kind) {
  if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("bessel_pair requires a finite argument magnitude > 0");
  const ld nu = order.nu();
  BesselEval out;
  out.arg_kind = kind;
  if (kind == ArgKind::positive_real) {
    Pair jj, yy;
    jy_full(order, w, jj, yy);
    out.j = checked(jj.v0, "J");
    out.y = checked(yy.v0, "Y");
    out.jp = checked((nu / w) * jj.v0 - jj.v1, "J'");
    out.yp = checked((nu / w) * yy.v0 - yy.v1, "Y'");
  } else {
    Pair ii, kk;
    ik_scaled(order, w, ii, kk);
    out.j = checked(ii.v0, "I");
    out.y = checked(kk.v0, "K");
    out.jp = checked(ii.v1 + (nu / w) * ii.v0, "I'");
    out.yp = checked((nu / w) * kk.v0 - kk.v1, "K'");
    out.envelope = w;
  }
  return out;
}

double bessel_zero(const BesselOrder& order, int n) {
  if (n < 1) throw DomainError("bessel_zero requires n >= 1");
  const double nu = order.nu();
  const double pi = static_cast<double>(kPi);
  const double beta = (n + nu / 2 - 0.25) * pi;
  const double guess = beta - (4 * nu * nu - 1) / (8 * beta);
  // Past this argument the phase atan2(Y, J) stays within pi of its leading term.
  const double phase_ok = std::max(static_cast<double>(kAsymptoticArg), nu * nu);
  const double target = (n - 0.5) * pi;

  if (guess >= phase_ok + pi) {
    double w = guess;
    for (int it = 0; it < 60; ++it) {
      Pair jj, yy;
      jy_full(order, w, jj, yy);
      const double j = static_cast<double>(jj.v0), y = static_cast<double>(yy.v0);
      const double chi = w - (nu / 2 + 0.25) * pi;
      const double base = std::atan2(y, j);
      const double theta = base + 2 * pi * std::round((chi - base) / (2 * pi));
      const double slope = 2 / (pi * w * (j * j + y * y));
      const double step = (theta - target) / slope;
      w -= step;
      if (std::fabs(step) <= 1e-15 * w) return w;
    }
    throw NumericalError("bessel_zero: phase iteration did not converge");
  }

  // Sign-change scan; J_nu has no zeros in (0, nu].
  const double h = 0.2;
  double a = std::max(nu, 1e-3);
  double fa = j_value(order, a);
  int found = 0;
  for (int it = 0; it < 1000000; ++it) {
    const double b = a + h;
    const double fb = j_value(order, b);
    if ((fa > 0) != (fb > 0) || fb == 0.0) {
      if (++found == n) {
        if (fb == 0.0) return b;
        auto f = [&](double w) { return j_value(order, w); };
        std::uintmax_t iters = 200;
        auto tol = [](double lo, double hi) { return std::fabs(hi - lo) <= 4e-16 * std::fabs(lo); };
        auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
        return 0.5 * (r.first + r.second);
      }
    }
    a = b;
    fa = fb;
  }
  throw NumericalError("bessel_zero: failed to bracket zero");
}

double robin_zero(const BesselOrder& order, double l, double beta, int n) {
  if (n < 0) throw DomainError("robin_zero requires n >= 0");
  if (!std::isfinite(beta)) throw DomainError("robin_zero requires finite beta");
  const double nu = order.nu();
  const double c = beta + l + 1;
  auto f = [&](double w) {
    Pair jj, yy;
    jy_full(order, w, jj, yy);
    return static_cast<double>(w * jj.v1 - c * jj.v0);
  };
  double lo, hi;
  if (n == 0) {
    if (c == 0.0) return 0.0;
    if (c < 0.0) throw NonPositiveGroundState("Robin ground state is negative since beta < -(l+1)");
    hi = bessel_zero(order, 1);
    lo = std::min(std::sqrt((nu + 1) * c / 2), hi / 2);
    while (f(lo) >= 0.0) {
      lo /= 2;
      if (lo < 1e-300) throw NumericalError("robin_zero: cannot bracket ground state");
    }
  } else {
    lo = bessel_zero(order, n);
    hi = bessel_zero(order, n + 1);
  }
  const double flo = f(lo), fhi = f(hi);
  if ((flo > 0) == (fhi > 0)) throw NumericalError("robin_zero: no sign change between consecutive zeros");
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::fabs(b - a) <= 4e-16 * std::fabs(a); };
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace sphspec
