// Property checks over seeded random samples.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sphspec/basis.hpp"
#include "sphspec/oracle.hpp"
#include "sphspec/specfun.hpp"
#include "sphspec/spectrum.hpp"
#include "sphspec/volterra.hpp"

using namespace sphspec;
using std::numbers::pi;

namespace {

struct Gen {
  std::mt19937_64 rng{20260116};

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

  // gamma / x plus two polynomial pieces with real powers above -1.5
  PotentialSpec potential() {
    const double split = uniform(0.2, 0.8);
    auto terms = [&] {
      std::vector<PolyTerm> t;
      for (int i = integer(1, 3); i > 0; --i) t.push_back({uniform(-4, 4), uniform(-1.5, 2)});
      return t;
    };
    return PotentialSpec::piecewise(uniform(-3, 3), {{0.0, split, terms()}, {split, 1.0, terms()}}, "random");
  }
};

}  // namespace

TEST(Properties, BesselWronskianOnWideGrid) {
  for (double nu : {0.0, 0.5, 0.9, 1.5, 2.5, 7.5}) {
    const BesselOrder o(nu);
    for (double w = 1e-3; w <= 1e6; w *= 1.7) {
      const auto e = bessel_pair(o, w);
      EXPECT_NEAR((e.j * e.yp - e.jp * e.y) * pi * w / 2, 1.0, 1e-10) << nu << " " << w;
    }
  }
}

TEST(Properties, BesselZerosAreSimple) {
  Gen g;
  for (int i = 0; i < 60; ++i) {
    const double nu = g.uniform(0, 10);
    const int n = g.integer(1, 300);
    const double j = bessel_zero(BesselOrder(nu), n);
    const auto e = bessel_pair(BesselOrder(nu), j);
    EXPECT_LE(std::fabs(e.j), 1e-9 * std::hypot(e.j, e.y)) << nu << " " << n;
    EXPECT_GT(std::fabs(e.jp), 1e-3 * std::hypot(e.jp, e.yp)) << nu << " " << n;
  }
}

TEST(Properties, BasisWronskianRandom) {
  Gen g;
  for (int i = 0; i < 2000; ++i) {
    const AngularMomentum am(g.uniform(-0.5, 10));
    const double z = (g.integer(0, 1) ? 1 : -1) * g.log_uniform(1e-3, 1e6);
    const double x = g.log_uniform(1e-6, 1);
    EXPECT_NEAR(basis_eval(am, z, x).wronskian(), 1.0, 1e-9) << am.l() << " " << z << " " << x;
  }
}

// -phi'' + (l(l+1)/x^2 - z) phi = 0, with phi'' from differences of phi_x.
TEST(Properties, BasisSolvesTheEquation) {
  Gen g;
  // central difference with one Richardson step, fourth order
  auto diff = [](const auto& f, double x, double h) {
    const double d1 = (f(x + h) - f(x - h)) / (2 * h), d2 = (f(x + h / 2) - f(x - h / 2)) / h;
    return (4 * d2 - d1) / 3;
  };
  for (int i = 0; i < 300; ++i) {
    const AngularMomentum am(g.uniform(-0.5, 5));
    const double l = am.l();
    const double z = g.uniform(-400, 400);
    const double h = 2e-3 * std::min(1.0, 1 / std::sqrt(std::fabs(z)));
    const double x = std::min(g.uniform(0.05, 1.0), 1 - h);
    const BasisEval m = basis_eval(am, z, x);
    const double d2 = diff([&](double t) { return basis_eval(am, z, t).phi_x_value(); }, x, h);
    const double d1 = diff([&](double t) { return basis_eval(am, z, t).phi_value(); }, x, h);
    const double scale = std::fabs(m.phi_value()) * (1 + std::fabs(z) + l * (l + 1) / (x * x)) + std::fabs(d2);
    EXPECT_LE(std::fabs(-d2 + (l * (l + 1) / (x * x) - z) * m.phi_value()), 1e-7 * scale) << l << " " << z << " " << x;
    EXPECT_LE(std::fabs(d1 - m.phi_x_value()), 1e-7 * (std::fabs(m.phi_x_value()) + std::fabs(m.phi_value()) / x));
  }
}

TEST(Properties, ThetaSmallArgumentConstants) {
  // theta x^l (2l+1) -> 2 Gamma(nu+1) 2^nu / sqrt(2 pi), nu = l + 1/2
  for (double l : {0.0, 0.7, 1.0, 2.5}) {
    const double nu = l + 0.5, c = 2 * std::tgamma(nu + 1) * std::pow(2.0, nu) / std::sqrt(2 * pi);
    for (double z : {-10.0, 3.0, 10.0}) {
      const double x = 1e-6;
      const double v = basis_eval(AngularMomentum(l), z, x).theta() * std::pow(x, l) * (2 * l + 1);
      EXPECT_NEAR(v / c, 1.0, 1e-6) << l << " " << z;
    }
  }
  // l = -1/2: theta / (-sqrt(x) log x) = A + B / log x with A != 0
  const AngularMomentum half(-0.5);
  auto ratio = [&](double x) { return basis_eval(half, 5.0, x).theta() / (-std::sqrt(x) * std::log(x)); };
  const double x1 = 1e-20, x2 = 1e-60, x3 = 1e-120;
  const double r1 = ratio(x1), r2 = ratio(x2);
  const double B = (r1 - r2) / (1 / std::log(x1) - 1 / std::log(x2));
  const double A = r1 - B / std::log(x1);
  EXPECT_GT(std::fabs(A), 0.1);
  EXPECT_NEAR(ratio(x3), A + B / std::log(x3), 1e-8 * std::fabs(A));
}

TEST(Properties, UnperturbedInterlacing) {
  Gen g;
  for (int i = 0; i < 30; ++i) {
    const AngularMomentum am(g.uniform(-0.5, 6));
    const double beta = g.uniform(-(am.l() + 0.9), 20);
    const auto mu = unperturbed_spectrum(am, BoundaryCondition::dirichlet(), 30);
    const auto lam = unperturbed_spectrum(am, BoundaryCondition::robin(beta), 31);
    for (int n = 0; n < 30; ++n) {
      if (n > 0) EXPECT_LT(mu[n - 1], mu[n]);
      EXPECT_LT(lam[n], mu[n]) << am.l() << " " << beta << " " << n;
      EXPECT_LT(mu[n], lam[n + 1]) << am.l() << " " << beta << " " << n;
    }
  }
}

TEST(Properties, EpsilonFunctionDecreases) {
  Gen g;
  for (int i = 0; i < 8; ++i) {
    const auto p = g.potential();
    const AngularMomentum am(g.uniform(-0.5, 3));
    double prev = eps_of_z(p, am, 1.0);
    for (int k = 1; k <= 16; ++k) {
      const double s = std::ldexp(1.0, k), e = eps_of_z(p, am, s);
      EXPECT_LE(e, prev * (1 + 1e-12));
      prev = e;
    }
    EXPECT_LT(prev, 0.01 * eps_of_z(p, am, 1.0));
    for (double x : {1e-8, 0.01, 0.5, 1.0}) EXPECT_GE(q_tilde(p, am, x), 0.0);
  }
  // L^1 potentials keep s eps(s^2) bounded; Coulomb needs the extra log
  const AngularMomentum am(0.0);
  double prev_const = 0, prev_coul = 0;
  for (int k = 4; k <= 16; k += 4) {
    const double s = std::ldexp(1.0, k);
    const double a = s * eps_of_z(PotentialSpec::constant(2.0), am, s);
    const double b = s * eps_of_z(PotentialSpec::coulomb(1.0), am, s) / std::log1p(s);
    if (k > 4) {
      EXPECT_LE(a, 1.5 * prev_const);
      EXPECT_LE(b, 1.5 * prev_coul);
    }
    prev_const = a;
    prev_coul = b;
  }
}

TEST(Properties, PicardIncrementsDecayFactorially) {
  Gen g;
  for (int i = 0; i < 10; ++i) {
    const auto p = g.potential();
    const AngularMomentum am(g.uniform(-0.5, 3));
    const double z = g.uniform(-1e3, 1e4);
    const auto sol = solve_phi_full(am, p, z, {.tol = 1e-14});
    const auto& h = sol.increment_history();
    const double eps = eps_of_z(p, am, std::sqrt(std::fabs(z)));
    // ratio_n <= C eps / n: fit C on the sample and require the ratios to fall with n
    double c_fit = 0;
    for (std::size_t n = 2; n < h.size(); ++n)
      if (h[n - 1] > 1e-15) c_fit = std::max(c_fit, h[n] / h[n - 1] * static_cast<double>(n) / eps);
    EXPECT_TRUE(std::isfinite(c_fit));
    EXPECT_LE(c_fit, 50.0) << "l=" << am.l() << " z=" << z;
  }
}

TEST(Properties, PsiWronskianMatchesBoundaryForm) {
  Gen g;
  for (int i = 0; i < 12; ++i) {
    const auto p = g.potential();
    const AngularMomentum am(g.uniform(-0.5, 3));
    const double z = g.uniform(-500, 2000), beta = g.uniform(-5, 5);
    const auto phi = solve_phi_full(am, p, z, {.tol = 1e-13});
    const auto psi = solve_psi_beta(am, p, beta, z, {.tol = 1e-13});
    const auto one = phi.at_one();
    const double expect = one.true_deriv() + beta * one.true_value();
    for (double x : {0.1, 0.45, 0.8}) {
      const auto a = psi.at(x), b = phi.at(x);
      const double w = a.true_value() * b.true_deriv() - a.true_deriv() * b.true_value();
      const double scale = std::fabs(a.true_value() * b.true_deriv()) + std::fabs(a.true_deriv() * b.true_value());
      EXPECT_NEAR(w, expect, 1e-6 * std::max(scale, std::fabs(expect))) << am.l() << " " << z << " " << x;
    }
  }
}

// phi(z, 1) is entire in z: no jumps where the evaluation regime changes.
TEST(Properties, BoundaryValueIsSmoothInZ) {
  const auto p = PotentialSpec::coulomb(1.0);
  for (double l : {-0.5, 0.0, 1.0}) {
    const AngularMomentum am(l);
    std::vector<double> v;
    const double dz = 0.01;
    for (double z = -10; z <= 10 + 1e-9; z += dz) v.push_back(solve_phi_full(am, p, z, {.tol = 1e-13}).at_one().true_value());
    double worst = 0, size = 0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      worst = std::max(worst, std::fabs(v[i + 1] - 2 * v[i] + v[i - 1]));
      size = std::max(size, std::fabs(v[i]));
    }
    // smooth data has second differences O(dz^2)
    EXPECT_LE(worst, 1e-2 * dz * dz * size + 1e-12) << l;
  }
}

TEST(Properties, OscillationCountStepsAcrossEigenvalues) {
  Gen g;
  for (int i = 0; i < 4; ++i) {
    const auto p = g.potential();
    const AngularMomentum am(g.uniform(-0.5, 2));
    const auto recs = eigenvalues(am, p, BoundaryCondition::dirichlet(), 6);
    int prev = -1;
    for (std::size_t k = 0; k < recs.size(); ++k) {
      const double lam = recs[k].lambda, h = 1e-6 * (1 + std::fabs(lam));
      const int below = oscillation_count(am, p, lam - h).count, above = oscillation_count(am, p, lam + h).count;
      EXPECT_EQ(below, static_cast<int>(k));
      EXPECT_EQ(above, below + 1);
      EXPECT_GE(below, prev);
      prev = above;
    }
  }
}

TEST(Properties, PerturbedInterlacingAndPositiveNorming) {
  Gen g;
  for (int i = 0; i < 4; ++i) {
    const auto p = g.potential();
    const AngularMomentum am(g.uniform(-0.5, 2));
    const double beta = g.uniform(-2, 6);
    const auto mu = eigenvalues(am, p, BoundaryCondition::dirichlet(), 8);
    const auto lam = eigenvalues(am, p, BoundaryCondition::robin(beta), 9);
    for (int n = 0; n < 8; ++n) {
      EXPECT_LT(lam[n].lambda, mu[n].lambda);
      EXPECT_LT(mu[n].lambda, lam[n + 1].lambda);
    }
    for (const auto& r : norming_constants(am, p, BoundaryCondition::robin(beta), lam)) EXPECT_GT(r.gamma, 0.0);
  }
}

// Past a modest index the first window around the Bessel zero already holds the root.
TEST(Properties, WindowBracketsWithoutDoubling) {
  for (const auto& p : {PotentialSpec::coulomb(1.0), PotentialSpec::constant(3.0), PotentialSpec::coulomb(-2.0)}) {
    const auto recs = eigenvalues(AngularMomentum(0.0), p, BoundaryCondition::dirichlet(), 60);
    for (const auto& r : recs)
      if (r.n >= 10) EXPECT_EQ(r.doublings, 0) << p.label() << " n=" << r.n;
  }
}
