#include "sphspec/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>

namespace sphspec {

namespace {

// P_0..P_{n-1} at t
template <int N>
void legendre_values(double t, std::array<double, N + 1>& p) {
  p[0] = 1.0;
  if (N >= 1) p[1] = t;
  for (int m = 1; m < N; ++m) p[m + 1] = ((2 * m + 1) * t * p[m] - m * p[m - 1]) / (m + 1);
}

}  // namespace

PanelRule::PanelRule() {
  using G = boost::math::quadrature::gauss<double, kPoints>;
  const auto& xs = G::abscissa();
  const auto& ws = G::weights();
  // Boost stores the nonnegative half; kPoints is even so there is no zero node.
  const int half = kPoints / 2;
  for (int i = 0; i < half; ++i) {
    nodes_[half - 1 - i] = -xs[i];
    weights_[half - 1 - i] = ws[i];
    nodes_[half + i] = xs[i];
    weights_[half + i] = ws[i];
  }
  for (int j = 0; j < kPoints; ++j) {
    std::array<double, kPoints + 1> p;
    legendre_values<kPoints>(nodes_[j], p);
    for (int m = 0; m < kPoints; ++m) proj_[m][j] = (2 * m + 1) / 2.0 * weights_[j] * p[m];
  }
  for (int i = 0; i < kPoints; ++i) {
    std::array<double, kPoints + 1> p;
    legendre_values<kPoints>(nodes_[i], p);
    Array q{};
    q[0] = nodes_[i] + 1;
    for (int m = 1; m < kPoints; ++m) q[m] = (p[m + 1] - p[m - 1]) / (2 * m + 1);
    for (int j = 0; j < kPoints; ++j) {
      double s = 0;
      for (int m = 0; m < kPoints; ++m) s += q[m] * proj_[m][j];
      cum_[i][j] = s;
    }
  }
}

const PanelRule& PanelRule::instance() {
  static const PanelRule rule;
  return rule;
}

void PanelRule::legendre_coefficients(const double* f, double* c) const {
  for (int m = 0; m < kPoints; ++m) {
    double s = 0;
    for (int j = 0; j < kPoints; ++j) s += proj_[m][j] * f[j];
    c[m] = s;
  }
}

double PanelRule::integral_to(const double* c, double tau) {
  std::array<double, kPoints + 1> p;
  legendre_values<kPoints>(tau, p);
  double s = c[0] * (tau + 1);
  for (int m = 1; m < kPoints; ++m) s += c[m] * (p[m + 1] - p[m - 1]) / (2 * m + 1);
  return s;
}

double PanelRule::evaluate(const double* c, double tau) {
  std::array<double, kPoints + 1> p;
  legendre_values<kPoints>(tau, p);
  double s = 0;
  for (int m = 0; m < kPoints; ++m) s += c[m] * p[m];
  return s;
}

std::vector<Panel> graded_panels(double h_max, const std::vector<double>& breakpoints, double floor) {
  std::vector<double> cuts{0.0};
  for (double b : breakpoints) {
    if (b > 0.0 && b < 1.0) cuts.push_back(b);
  }
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Panel> out;
  auto uniform = [&](double a, double b) {
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h_max - 1e-9)));
    const double h = (b - a) / n;
    for (int k = 0; k < n; ++k) out.push_back({a + k * h, k + 1 == n ? b : a + (k + 1) * h});
  };

  const double c = std::min(cuts[1], h_max);
  std::vector<Panel> dyadic;
  double hi = c;
  while (hi > floor) {
    dyadic.push_back({hi / 2, hi});
    hi /= 2;
  }
  out.push_back({0.0, hi});
  for (auto it = dyadic.rbegin(); it != dyadic.rend(); ++it) out.push_back(*it);
  if (c < cuts[1]) uniform(c, cuts[1]);
  for (std::size_t i = 1; i + 1 < cuts.size(); ++i) uniform(cuts[i], cuts[i + 1]);
  return out;
}

}  // namespace sphspec
