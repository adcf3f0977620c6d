#pragma once

#include <array>
#include <vector>

namespace sphspec {

// Gauss-Legendre rule on [-1, 1] with matrices for running (cumulative) integrals
// of the polynomial interpolant through the nodes.
class PanelRule {
 public:
  static constexpr int kPoints = 20;
  using Array = std::array<double, kPoints>;

  static const PanelRule& instance();

  const Array& nodes() const { return nodes_; }
  const Array& weights() const { return weights_; }
  // integral from -1 to node i of the interpolant, as weights on the samples
  double cumulative(int i, int j) const { return cum_[i][j]; }
  // Legendre coefficients of the interpolant through samples f
  void legendre_coefficients(const double* f, double* c) const;
  // integral from -1 to tau of the Legendre series c
  static double integral_to(const double* c, double tau);
  static double evaluate(const double* c, double tau);

 private:
  PanelRule();
  Array nodes_{};
  Array weights_{};
  std::array<Array, kPoints> proj_{};
  std::array<Array, kPoints> cum_{};
};

struct Panel {
  double a;
  double b;
};

// Panels covering [0, 1]: dyadic toward 0 down to width `floor`, uniform with width
// at most h_max elsewhere, and boundaries at every breakpoint in (0, 1).
std::vector<Panel> graded_panels(double h_max, const std::vector<double>& breakpoints, double floor);

}  // namespace sphspec
