#include "sphspec/basis.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "sphspec/errors.hpp"

namespace sphspec {

namespace {

using ld = long double;
constexpr ld kEuler = 0.577215664901532860606512090082402431L;
constexpr double kPi = std::numbers::pi;
// Power series are used while |z| x^2 stays below this.
constexpr double kSeriesRegion = 4.0;

std::string shortest(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct SeriesPair {
  ld s = 0;   // sum
  ld ds = 0;  // u d/du of the sum
};

// sum_m (-u/4)^m / (m! (a)_m)
SeriesPair hyper0f1(ld a, ld u) {
  SeriesPair r;
  ld term = 1;
  for (int m = 0; m < 400; ++m) {
    r.s += term;
    r.ds += m * term;
    term *= (-u / 4) / ((m + 1) * (a + m));
    if (m > 3 && std::fabs(term) * (m + 1) <= 1e-20L * (std::fabs(r.s) + std::fabs(r.ds))) break;
    if (term == 0) break;
  }
  return r;
}

// Integer order n: A(u), B(u) of the logarithmic branch.
SeriesPair finite_part(int n, ld u) {
  SeriesPair r;
  ld fact_hi = 1;  // (n-1)!
  for (int k = 2; k < n; ++k) fact_hi *= k;
  ld term = n > 0 ? fact_hi : 0;  // (n-m-1)!/m! (u/4)^m
  for (int m = 0; m < n; ++m) {
    r.s += term;
    r.ds += m * term;
    if (m + 1 < n) term *= (u / 4) / ((m + 1) * static_cast<ld>(n - m - 1));
  }
  return r;
}

SeriesPair digamma_part(int n, ld u) {
  SeriesPair r;
  ld nf = 1;
  for (int k = 2; k <= n; ++k) nf *= k;
  ld hm = 0, hnm = 0;  // H_m, H_{n+m}
  for (int k = 1; k <= n; ++k) hnm += 1.0L / k;
  ld term = 1 / nf;  // (-u/4)^m / (m! (n+m)!)
  for (int m = 0; m < 400; ++m) {
    const ld b = (hm - kEuler) + (hnm - kEuler);
    r.s += b * term;
    r.ds += m * b * term;
    term *= (-u / 4) / ((m + 1.0L) * (n + m + 1.0L));
    hm += 1.0L / (m + 1);
    hnm += 1.0L / (n + m + 1);
    if (m > 3 && std::fabs(term) * (m + 1) * (std::fabs(b) + 2) <= 1e-20L * (std::fabs(r.s) + std::fabs(r.ds) + 1e-300L)) break;
    if (term == 0) break;
  }
  return r;
}

// Coefficient c in theta = c phi + chi for the Bessel representation.
double bessel_shift(const AngularMomentum& am, double z) {
  const double nu = am.nu();
  if (z > 0) {
    const double k = std::sqrt(z);
    if (am.trig_reducible()) return 0.0;
    if (am.theta_branch() != ThetaBranch::generic) return (2 / kPi) * std::log(k) * std::pow(k, 2 * nu);
    return std::pow(k, 2 * nu) / std::tan(nu * kPi);
  }
  const double s = std::sqrt(-z);
  if (am.theta_branch() != ThetaBranch::generic) {
    const int n = static_cast<int>(std::lround(nu));
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return (2 / kPi) * sign * std::log(s) * std::pow(s, 2 * nu);
  }
  return std::pow(s, 2 * nu) / std::sin(nu * kPi);
}

void check_x(double x) {
  if (!(x > 0.0) || !(x <= 1.0)) throw DomainError("basis evaluation requires x in (0, 1]");
}

// Re-express theta = c_from phi + chi as c_to phi + chi'.
void reshift(BasisEval& e, double c_to) {
  const double d = e.theta_shift - c_to;
  if (d != 0.0) {
    const double mix = std::exp(2 * e.envelope);
    e.chi += d * e.phi * mix;
    e.chi_x += d * e.phi_x * mix;
  }
  e.theta_shift = c_to;
}

}  // namespace

AngularMomentum::AngularMomentum(double l, bool trig, bool nu_integer, std::string text)
    : l_(l),
      trig_(trig),
      branch_(nu_integer ? (std::lround(l + 0.5) == 0 ? ThetaBranch::minus_half : ThetaBranch::half_integer_log) : ThetaBranch::generic),
      order_(l + 0.5, trig, nu_integer),
      text_(std::move(text)) {}

AngularMomentum::AngularMomentum(double l)
    : AngularMomentum(
          (l >= -0.5 ? l : throw DomainError("angular momentum must satisfy l >= -1/2")),
          std::fabs(l - std::round(l)) <= 1e-12, std::fabs(l + 0.5 - std::round(l + 0.5)) <= 1e-12, shortest(l)) {
  if (trig_) l_ = std::round(l);
  if (branch_ != ThetaBranch::generic) l_ = std::round(l + 0.5) - 0.5;
  order_ = BesselOrder(l_ + 0.5, trig_, branch_ != ThetaBranch::generic);
}

AngularMomentum AngularMomentum::parse(std::string_view s) {
  const std::string text(s);
  auto bad = [&]() { return DomainError("angular momentum: not a plain decimal number: '" + text + "'"); };
  if (s.empty()) throw bad();
  bool neg = false;
  std::string_view body = s;
  if (body.front() == '-') {
    neg = true;
    body.remove_prefix(1);
  }
  const auto dot = body.find('.');
  std::string_view ip = body.substr(0, dot);
  std::string_view fp = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  if (ip.empty() && fp.empty()) throw bad();
  for (char c : ip) if (c < '0' || c > '9') throw bad();
  for (char c : fp) if (c < '0' || c > '9') throw bad();
  while (!fp.empty() && fp.back() == '0') fp.remove_suffix(1);
  while (!ip.empty() && ip.front() == '0') ip.remove_prefix(1);
  const bool int_zero = ip.empty();
  const bool frac_zero = fp.empty();
  const bool frac_half = fp == "5";

  if (neg && !(int_zero && frac_zero)) {
    // Negative values must satisfy l >= -1/2 exactly.
    if (!int_zero) throw DomainError("angular momentum must satisfy l >= -1/2");
    if (fp.front() > '5' || (fp.front() == '5' && !frac_half)) {
      throw DomainError("angular momentum must satisfy l >= -1/2");
    }
  }
  double v = 0.0;
  std::string plain(s);
  auto r = std::from_chars(plain.data(), plain.data() + plain.size(), v);
  if (r.ec != std::errc() || r.ptr != plain.data() + plain.size()) throw bad();
  if (v == 0.0) v = 0.0;  // drop the sign of "-0"
  return AngularMomentum(v, frac_zero, frac_half, text);
}

BoundaryCondition BoundaryCondition::robin(double beta) {
  if (!std::isfinite(beta)) throw DomainError("Robin parameter must be finite");
  return {Kind::robin, beta};
}

double BasisEval::phi_value() const { return phi * std::exp(envelope); }
double BasisEval::phi_x_value() const { return phi_x * std::exp(envelope); }
double BasisEval::theta() const {
  return theta_shift * phi * std::exp(envelope) + chi * std::exp(-envelope);
}
double BasisEval::theta_x() const {
  return theta_shift * phi_x * std::exp(envelope) + chi_x * std::exp(-envelope);
}

double GreenEval::value() const { return g * std::exp(envelope); }

double theta_shift(const AngularMomentum& am, double z) {
  if (std::fabs(z) <= kSeriesRegion) return 0.0;
  return bessel_shift(am, z);
}

namespace detail {

BasisEval basis_series(const AngularMomentum& am, double z, double x) {
  check_x(x);
  const double l = am.l();
  const ld nu = am.nu();
  const ld u = static_cast<ld>(z) * x * x;
  BasisEval e;

  const SeriesPair f = hyper0f1(nu + 1, u);
  const ld cphi = std::sqrt(std::numbers::pi_v<ld>) / (std::tgamma(nu + 1) * std::pow(2.0L, l + 1));
  const ld xl = std::pow(static_cast<ld>(x), static_cast<ld>(l));
  ld phi = cphi * xl * x * f.s;
  ld phi_x = cphi * xl * ((l + 1) * f.s + 2 * f.ds);

  ld theta, theta_x;
  const ld xml = 1 / xl;
  if (am.theta_branch() == ThetaBranch::generic) {
    const SeriesPair g = hyper0f1(1 - nu, u);
    const ld cg = std::tgamma(nu) * std::pow(2.0L, nu) / std::sqrt(2 * std::numbers::pi_v<ld>);
    theta = cg * xml * g.s;
    theta_x = cg * xml / x * (-l * g.s + 2 * g.ds);
  } else {
    const int n = static_cast<int>(std::lround(am.nu()));
    ld nf = 1;
    for (int k = 2; k <= n; ++k) nf *= k;
    const ld c = std::pow(2.0L, n) / std::sqrt(2 * std::numbers::pi_v<ld>);
    const ld pw = std::pow(u / 4, n);
    const SeriesPair a = finite_part(n, u);
    const SeriesPair b = digamma_part(n, u);
    const ld h = a.s + pw * b.s;
    const ld dh = a.ds + pw * (n * b.s + b.ds);
    const ld ee = pw * f.s / nf;
    const ld de = pw * (n * f.s + f.ds) / nf;
    const ld lg = std::log(static_cast<ld>(x) / 2);
    theta = c * xml * (h - 2 * lg * ee);
    theta_x = c * xml / x * (-l * (h - 2 * lg * ee) + 2 * (dh - 2 * lg * de) - 2 * ee);
  }

  const double sh = theta_shift(am, z);
  const ld chi = theta - sh * phi;
  const ld chi_x = theta_x - sh * phi_x;
  e.theta_shift = sh;
  e.envelope = z < 0 ? std::sqrt(-z) * x : 0.0;
  const ld up = std::exp(static_cast<ld>(e.envelope));
  e.phi = static_cast<double>(phi / up);
  e.phi_x = static_cast<double>(phi_x / up);
  e.chi = static_cast<double>(chi * up);
  e.chi_x = static_cast<double>(chi_x * up);
  return e;
}

BasisEval basis_bessel(const AngularMomentum& am, double z, double x) {
  check_x(x);
  if (z == 0.0) throw DomainError("Bessel route needs z != 0");
  const double nu = am.nu();
  const double r = std::sqrt(kPi * x / 2);
  BasisEval e;
  if (z > 0) {
    const double k = std::sqrt(z);
    const BesselEval b = bessel_pair(am.order(), k * x, ArgKind::positive_real);
    const double kn = std::pow(k, nu);
    e.phi = r / kn * b.j;
    e.phi_x = r / kn * (b.j / (2 * x) + k * b.jp);
    e.chi = -kn * r * b.y;
    e.chi_x = -kn * r * (b.y / (2 * x) + k * b.yp);
    e.envelope = 0.0;
  } else {
    const double s = std::sqrt(-z);
    const BesselEval b = bessel_pair(am.order(), s * x, ArgKind::imaginary);
    const double sn = std::pow(s, nu);
    e.phi = r / sn * b.j;
    e.phi_x = r / sn * (b.j / (2 * x) + s * b.jp);
    e.chi = (2 / kPi) * sn * r * b.y;
    e.chi_x = (2 / kPi) * sn * r * (b.y / (2 * x) + s * b.yp);
    e.envelope = b.envelope;
  }
  e.theta_shift = bessel_shift(am, z);
  reshift(e, theta_shift(am, z));
  return e;
}

}  // namespace detail

BasisEval basis_eval(const AngularMomentum& am, double z, double x) {
  check_x(x);
  if (std::fabs(z) * x * x <= kSeriesRegion) return detail::basis_series(am, z, x);
  return detail::basis_bessel(am, z, x);
}

GreenEval green_from(const BasisEval& ex, const BasisEval& ey, double x, double y, double z) {
  GreenEval out;
  const double s = z < 0 ? std::sqrt(-z) : 0.0;
  const double d = std::fabs(x - y);
  out.envelope = s * d;
  const double damp = std::exp(-2 * s * d);
  // G = phi(x) chi(y) - phi(y) chi(x); the product whose phi sits at the larger point
  // carries the growth, the other one is damped.
  if (y <= x) {
    out.g = ex.phi * ey.chi - (ey.phi * ex.chi) * damp;
    out.g_x = ex.phi_x * ey.chi - (ey.phi * ex.chi_x) * damp;
    out.g_y = ex.phi * ey.chi_x - (ey.phi_x * ex.chi) * damp;
  } else {
    out.g = (ex.phi * ey.chi) * damp - ey.phi * ex.chi;
    out.g_x = (ex.phi_x * ey.chi) * damp - ey.phi * ex.chi_x;
    out.g_y = (ex.phi * ey.chi_x) * damp - ey.phi_x * ex.chi;
  }
  return out;
}

GreenEval green_eval(const AngularMomentum& am, double z, double x, double y) {
  check_x(x);
  check_x(y);
  return green_from(basis_eval(am, z, x), basis_eval(am, z, y), x, y, z);
}

std::vector<double> unperturbed_spectrum(const AngularMomentum& am, const BoundaryCondition& bc, int n_max) {
  if (n_max < 1) throw DomainError("unperturbed_spectrum requires n_max >= 1");
  std::vector<double> out;
  out.reserve(n_max);
  if (bc.is_dirichlet()) {
    for (int n = 1; n <= n_max; ++n) {
      const double j = bessel_zero(am.order(), n);
      out.push_back(j * j);
    }
    return out;
  }
  const double beta = bc.beta;
  int first = 0;
  if (beta + am.l() + 1 < 0) {
    // Negative ground state: root of phi_l'(z,1) + beta phi_l(z,1) in s = sqrt(-z).
    auto f = [&](double s) {
      const BasisEval e = basis_eval(am, -s * s, 1.0);
      return e.phi_x + beta * e.phi;
    };
    double lo = 1e-8, hi = std::fabs(beta) + am.l() + 10;
    double flo = f(lo), fhi = f(hi);
    if ((flo > 0) == (fhi > 0)) throw NumericalError("negative Robin ground state not bracketed");
    std::uintmax_t it = 200;
    auto tol = [](double a, double b) { return std::fabs(b - a) <= 4e-16 * std::fabs(a); };
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, it);
    const double s = 0.5 * (r.first + r.second);
    out.push_back(-s * s);
    first = 1;
  }
  for (int n = first; n < n_max; ++n) {
    const double j = robin_zero(am.order(), am.l(), beta, n);
    out.push_back(j * j);
  }
  return out;
}

}  // namespace sphspec
