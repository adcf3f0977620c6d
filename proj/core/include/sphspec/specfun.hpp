#pragma once

namespace sphspec {

// Order nu = l + 1/2 >= 0 of the Bessel functions used throughout.
class BesselOrder {
 public:
  static constexpr double kMaxOrder = 40.0;

  // Branch flags detected within 1e-12.
  explicit BesselOrder(double nu);
  // Branch flags supplied by the caller (exact detection upstream).
  BesselOrder(double nu, bool half_plus_integer, bool integer);

  double nu() const { return nu_; }
  // nu in N0 + 1/2, the trig-reducible case (integer l).
  bool is_half_plus_integer() const { return half_; }
  // nu in N0, the logarithmic branch.
  bool is_integer() const { return integer_; }

 private:
  double nu_;
  bool half_;
  bool integer_;
};

enum class ArgKind { positive_real, imaginary };

// For positive_real:  j, y, jp, yp are J_nu(w), Y_nu(w) and their w-derivatives.
// For imaginary (w = i*t):  j = e^{-t} I_nu(t), y = e^{t} K_nu(t) and jp, yp the
// equally scaled t-derivatives;  envelope = t records the scale.
struct BesselEval {
  double j = 0.0;
  double y = 0.0;
  double jp = 0.0;
  double yp = 0.0;
  ArgKind arg_kind = ArgKind::positive_real;
  double envelope = 0.0;
};

double gamma_fn(double x);

BesselEval bessel_pair(const BesselOrder& order, double w, ArgKind kind = ArgKind::positive_real);

// n-th positive zero of J_nu, n >= 1.
double bessel_zero(const BesselOrder& order, int n);

// n-th nonnegative zero of w J_{nu+1}(w) - (beta + l + 1) J_nu(w), n >= 0.
double robin_zero(const BesselOrder& order, double l, double beta, int n);

}  // namespace sphspec
