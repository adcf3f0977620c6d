#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "sphspec/specfun.hpp"

namespace sphspec {

enum class ThetaBranch { generic, half_integer_log, minus_half };

// Angular momentum l >= -1/2 with order nu = l + 1/2 and the branch of theta_l.
class AngularMomentum {
 public:
  // Branch detected with tolerance 1e-12.
  explicit AngularMomentum(double l);
  // Exact decimal text, e.g. "0", "-0.5", "2.5", "-0.3"; branch detected exactly.
  static AngularMomentum parse(std::string_view decimal);

  double l() const { return l_; }
  double nu() const { return l_ + 0.5; }
  bool log_case() const { return branch_ == ThetaBranch::minus_half; }
  // l integer: Bessel functions reduce to trigonometric ones.
  bool trig_reducible() const { return trig_; }
  ThetaBranch theta_branch() const { return branch_; }
  const BesselOrder& order() const { return order_; }
  // Decimal text as given (or shortest round-trip text for the double constructor).
  const std::string& text() const { return text_; }

 private:
  AngularMomentum(double l, bool trig, bool nu_integer, std::string text);

  double l_;
  bool trig_;
  ThetaBranch branch_;
  BesselOrder order_;
  std::string text_;
};

// Dirichlet f(1) = 0 or Robin f'(1) + beta f(1) = 0.
struct BoundaryCondition {
  enum class Kind { dirichlet, robin };
  Kind kind = Kind::dirichlet;
  double beta = 0.0;

  static BoundaryCondition dirichlet() { return {}; }
  static BoundaryCondition robin(double beta);
  bool is_dirichlet() const { return kind == Kind::dirichlet; }
  // beta, or +infinity for Dirichlet.
  double beta_or_inf() const { return is_dirichlet() ? std::numeric_limits<double>::infinity() : beta; }
};

// phi_l, theta_l and x-derivatives at one (z, x).
//
// theta_l is held as theta_shift * phi_l + chi, where chi is the solution that stays
// bounded relative to its envelope (-k^nu sqrt(pi x/2) Y_nu for z > 0, a K_nu
// multiple for z < 0).  phi-type fields are scaled by exp(-envelope), chi-type fields
// by exp(+envelope), envelope = |Im sqrt z| x.  For z >= 0 the envelope is 0.
struct BasisEval {
  double phi = 0.0;
  double phi_x = 0.0;
  double chi = 0.0;
  double chi_x = 0.0;
  double theta_shift = 0.0;
  double envelope = 0.0;

  double phi_value() const;
  double phi_x_value() const;
  double theta() const;
  double theta_x() const;
  // W(theta, phi) = theta phi' - theta' phi, evaluated as W(chi, phi) so that it is
  // free of the exponential scales.
  double wronskian() const { return chi * phi_x - chi_x * phi; }
};

// The coefficient c(z) in theta_l = c phi_l + chi.  Zero for |z| <= 4.
double theta_shift(const AngularMomentum& am, double z);

BasisEval basis_eval(const AngularMomentum& am, double z, double x);

// G_l(z,x,y) = phi_l(x) theta_l(y) - phi_l(y) theta_l(x) and partials.  True value
// is (g, g_x, g_y) * exp(envelope), envelope = |Im sqrt z| |x - y|.
struct GreenEval {
  double g = 0.0;
  double g_x = 0.0;
  double g_y = 0.0;
  double envelope = 0.0;

  double value() const;
};

GreenEval green_eval(const AngularMomentum& am, double z, double x, double y);
// Same, from basis values already evaluated at x and y.
GreenEval green_from(const BasisEval& at_x, const BasisEval& at_y, double x, double y, double z);

// mu_{l,n} (Dirichlet, n = 1..n_max) or lambda^beta_{l,n} (Robin, n = 0..n_max-1).
std::vector<double> unperturbed_spectrum(const AngularMomentum& am, const BoundaryCondition& bc, int n_max);

namespace detail {
// Power-series and Bessel evaluation routes; basis_eval picks one by |z| x^2.
BasisEval basis_series(const AngularMomentum& am, double z, double x);
BasisEval basis_bessel(const AngularMomentum& am, double z, double x);
}  // namespace detail

}  // namespace sphspec
