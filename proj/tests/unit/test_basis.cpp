#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sphspec/basis.hpp"
#include "sphspec/errors.hpp"

using namespace sphspec;
using std::numbers::pi;

TEST(AngularMomentum, ParsesDecimalText) {
  const auto a = AngularMomentum::parse("-0.5");
  EXPECT_TRUE(a.log_case());
  EXPECT_EQ(a.theta_branch(), ThetaBranch::minus_half);
  EXPECT_EQ(a.text(), "-0.5");
  const auto b = AngularMomentum::parse("2");
  EXPECT_TRUE(b.trig_reducible());
  EXPECT_EQ(b.theta_branch(), ThetaBranch::generic);
  EXPECT_EQ(AngularMomentum::parse("0.5").theta_branch(), ThetaBranch::half_integer_log);
  EXPECT_EQ(AngularMomentum::parse("-0.3").theta_branch(), ThetaBranch::generic);
  EXPECT_DOUBLE_EQ(AngularMomentum::parse("2.5").nu(), 3.0);
}

TEST(AngularMomentum, RejectsBelowMinusHalf) {
  EXPECT_THROW(AngularMomentum::parse("-0.6"), DomainError);
  EXPECT_THROW(AngularMomentum::parse("abc"), DomainError);
  EXPECT_THROW(AngularMomentum(-1.0), DomainError);
}

TEST(Basis, ZeroAngularMomentumIsTrigonometric) {
  const AngularMomentum am(0.0);
  for (double z : {0.5, 3.0, 50.0, 1e4}) {
    const double k = std::sqrt(z);
    for (double x : {1e-3, 0.2, 0.7, 1.0}) {
      const BasisEval e = basis_eval(am, z, x);
      EXPECT_NEAR(e.phi_value(), std::sin(k * x) / k, 1e-13 * (1 + 1 / k));
      EXPECT_NEAR(e.phi_x_value(), std::cos(k * x), 1e-12);
      EXPECT_NEAR(e.theta(), std::cos(k * x), 1e-11);
      EXPECT_NEAR(e.theta_x(), -k * std::sin(k * x), 1e-11 * k);
    }
  }
  for (double z : {-0.5, -30.0, -1e4}) {
    const double s = std::sqrt(-z);
    for (double x : {1e-3, 0.4, 1.0}) {
      const BasisEval e = basis_eval(am, z, x);
      EXPECT_LE(std::fabs(e.phi_value() / (std::sinh(s * x) / s) - 1), 1e-12);
      EXPECT_LE(std::fabs(e.theta() / std::cosh(s * x) - 1), 1e-11);
    }
  }
}

TEST(Basis, OneAngularMomentumClosedForm) {
  const AngularMomentum am(1.0);
  for (double z : {2.0, 20.0, 400.0, -9.0, -400.0}) {
    for (double x : {0.05, 0.5, 1.0}) {
      const BasisEval e = basis_eval(am, z, x);
      const double p = oracle::phi1(z, x), t = oracle::theta1(z, x);
      EXPECT_LE(std::fabs(e.phi_value() - p), 1e-11 * std::fabs(p)) << z << " " << x;
      EXPECT_LE(std::fabs(e.theta() - t), 1e-9 * std::fabs(t)) << z << " " << x;
    }
  }
}

TEST(Basis, WronskianIsOne) {
  for (double l : {-0.5, -0.3, 0.0, 0.5, 1.0, 2.5, 7.0}) {
    const AngularMomentum am(l);
    for (double z : {-1e6, -1e3, -4.5, -3.5, -1e-2, 1e-2, 3.9, 4.1, 100.0, 1e6}) {
      for (double x : {1e-4, 1e-2, 0.3, 1.0}) {
        EXPECT_NEAR(basis_eval(am, z, x).wronskian(), 1.0, 1e-10) << "l=" << l << " z=" << z << " x=" << x;
      }
    }
  }
}

// theta phi' - theta' phi from unscaled values where no cancellation occurs.
TEST(Basis, DirectWronskianOnModerateGrid) {
  for (double l : {-0.5, 0.0, 0.7, 2.0}) {
    const AngularMomentum am(l);
    for (double z : {-20.0, 0.3, 15.0, 300.0}) {
      for (double x : {0.01, 0.5, 1.0}) {
        const BasisEval e = basis_eval(am, z, x);
        const double w = e.theta() * e.phi_x_value() - e.theta_x() * e.phi_value();
        EXPECT_NEAR(w, 1.0, 1e-8) << "l=" << l << " z=" << z << " x=" << x;
      }
    }
  }
}

TEST(Basis, SeriesAndBesselRoutesAgree) {
  for (double l : {-0.5, -0.2, 0.0, 1.0, 1.5, 3.3}) {
    const AngularMomentum am(l);
    for (double z : {-40.0, -5.0, 5.0, 40.0}) {
      for (double x : {0.2, 0.3}) {
        const BasisEval a = detail::basis_series(am, z, x), b = detail::basis_bessel(am, z, x);
        EXPECT_LE(std::fabs(a.phi_value() - b.phi_value()), 1e-11 * std::fabs(b.phi_value()));
        EXPECT_LE(std::fabs(a.theta() - b.theta()), 1e-10 * (std::fabs(b.theta()) + std::fabs(a.theta_shift * a.phi_value())));
      }
    }
  }
}

TEST(Basis, SmallArgumentNormalization) {
  // phi_l ~ sqrt(pi) x^{l+1} / (2^{l+1} Gamma(l + 3/2))
  for (double l : {-0.5, 0.0, 1.5}) {
    const AngularMomentum am(l);
    const double x = 1e-6;
    const double expect = std::sqrt(pi) * std::pow(x, l + 1) / (std::pow(2.0, l + 1) * std::tgamma(l + 1.5));
    EXPECT_NEAR(basis_eval(am, 10.0, x).phi_value() / expect, 1.0, 1e-9);
  }
}

TEST(Green, AntisymmetricAndVanishesOnDiagonal) {
  const AngularMomentum am(0.4);
  for (double z : {-50.0, 7.0, 900.0}) {
    const GreenEval a = green_eval(am, z, 0.6, 0.2), b = green_eval(am, z, 0.2, 0.6);
    EXPECT_NEAR(a.value(), -b.value(), 1e-14 * std::fabs(a.value()));
    EXPECT_NEAR(green_eval(am, z, 0.3, 0.3).value(), 0.0, 1e-14);
  }
}

TEST(Green, ZeroAngularMomentumKernel) {
  const AngularMomentum am(0.0);
  const double z = 30.0, k = std::sqrt(z);
  for (auto [x, y] : {std::pair{0.8, 0.1}, std::pair{1.0, 0.5}, std::pair{0.3, 0.29}}) {
    // sin(k(x - y)) / k
    EXPECT_NEAR(green_eval(am, z, x, y).value(), std::sin(k * (x - y)) / k, 1e-12);
    EXPECT_NEAR(green_eval(am, z, x, y).g_x, std::cos(k * (x - y)), 1e-12);
  }
}

TEST(Unperturbed, DirichletAndRobin) {
  const AngularMomentum am(0.0);
  const auto d = unperturbed_spectrum(am, BoundaryCondition::dirichlet(), 5);
  for (int n = 1; n <= 5; ++n) EXPECT_NEAR(d[n - 1], n * n * pi * pi, 1e-10 * n * n);
  const auto r = unperturbed_spectrum(am, BoundaryCondition::robin(0.0), 5);
  for (int n = 0; n < 5; ++n) EXPECT_NEAR(r[n], (n + 0.5) * (n + 0.5) * pi * pi, 1e-10 * (n + 1) * (n + 1));
  EXPECT_NEAR(unperturbed_spectrum(AngularMomentum(1.0), BoundaryCondition::dirichlet(), 1)[0], 20.1907285564, 1e-9);
}

TEST(Unperturbed, NegativeRobinGroundState) {
  // l = 0, beta = -2: s cosh s - 2 sinh s = 0, i.e. tanh s = s / 2
  const auto r = unperturbed_spectrum(AngularMomentum(0.0), BoundaryCondition::robin(-2.0), 2);
  const double s = oracle::bisect([](double t) { return std::tanh(t) - t / 2; }, 0.5, 3.0);
  EXPECT_NEAR(r[0], -s * s, 1e-10);
  EXPECT_GT(r[1], 0.0);
}

TEST(Basis, RejectsOutOfRange) {
  EXPECT_THROW(basis_eval(AngularMomentum(0.0), 1.0, 0.0), DomainError);
  EXPECT_THROW(basis_eval(AngularMomentum(0.0), 1.0, 1.5), DomainError);
}
