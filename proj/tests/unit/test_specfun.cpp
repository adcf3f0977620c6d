#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sphspec/errors.hpp"
#include "sphspec/specfun.hpp"

using namespace sphspec;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

}  // namespace

TEST(Specfun, GammaMatchesFactorials) {
  EXPECT_NEAR(gamma_fn(5.0), 24.0, 1e-12);
  EXPECT_NEAR(gamma_fn(0.5), std::sqrt(pi), 1e-14);
  EXPECT_NEAR(gamma_fn(1.5), 0.5 * std::sqrt(pi), 1e-14);
}

TEST(Specfun, KnownValue) { EXPECT_NEAR(bessel_pair(BesselOrder(0.0), 1.0).j, 0.7651976865579666, 1e-15); }

// Cross-check against the C++17 special functions for a spread of orders and arguments.
TEST(Specfun, AgreesWithStandardLibrary) {
  for (double nu : {0.0, 0.2, 0.5, 1.0, 1.5, 2.7, 3.0, 7.5, 12.0}) {
    const BesselOrder o(nu);
    for (double w : {1e-3, 0.3, 1.0, 2.5, 9.0, 16.9, 17.1, 40.0, 250.0}) {
      const BesselEval e = bessel_pair(o, w);
      const double j = std::cyl_bessel_j(nu, w), y = std::cyl_neumann(nu, w);
      const double scale = std::hypot(j, y);
      EXPECT_LE(std::fabs(e.j - j) / scale, 1e-11) << "J nu=" << nu << " w=" << w;
      EXPECT_LE(std::fabs(e.y - y) / scale, 1e-11) << "Y nu=" << nu << " w=" << w;
    }
  }
}

TEST(Specfun, ModifiedAgreesWithStandardLibrary) {
  for (double nu : {0.0, 0.5, 1.0, 1.3, 2.5, 6.0}) {
    const BesselOrder o(nu);
    for (double t : {1e-3, 0.5, 1.9, 2.1, 8.0, 16.0, 30.0, 120.0}) {
      const BesselEval e = bessel_pair(o, t, ArgKind::imaginary);
      EXPECT_LE(rel(e.j, std::exp(-t) * std::cyl_bessel_i(nu, t)), 1e-11) << "I nu=" << nu << " t=" << t;
      EXPECT_LE(rel(e.y, std::exp(t) * std::cyl_bessel_k(nu, t)), 1e-11) << "K nu=" << nu << " t=" << t;
    }
  }
}

// W(J, Y) = 2 / (pi w) and W(I, K) = -1 / t hold for every order.
TEST(Specfun, WronskianIdentities) {
  for (double nu : {0.0, 0.25, 0.5, 1.0, 3.5, 10.0, 25.5}) {
    const BesselOrder o(nu);
    for (double w : {1e-4, 0.1, 1.0, 5.0, 20.0, 90.0, 1e4}) {
      const BesselEval e = bessel_pair(o, w);
      const double wr = e.j * e.yp - e.jp * e.y;
      EXPECT_LE(rel(wr, 2 / (pi * w)), 1e-11) << "nu=" << nu << " w=" << w;
      const BesselEval m = bessel_pair(o, w, ArgKind::imaginary);
      // scales cancel in the product
      EXPECT_LE(rel(m.j * m.yp - m.jp * m.y, -1 / w), 1e-11) << "nu=" << nu << " t=" << w;
    }
  }
}

TEST(Specfun, HalfOrderIsTrigonometric) {
  const BesselOrder o(0.5);
  for (double w : {0.01, 1.0, 7.0, 33.0}) {
    const BesselEval e = bessel_pair(o, w);
    EXPECT_NEAR(e.j, std::sqrt(2 / (pi * w)) * std::sin(w), 1e-14 * std::max(1.0, 1 / std::sqrt(w)));
    EXPECT_NEAR(e.y, -std::sqrt(2 / (pi * w)) * std::cos(w), 1e-13 * std::max(1.0, 1 / std::sqrt(w)));
  }
}

TEST(Specfun, FirstZeroOfThreeHalvesSolvesTanEqualsX) {
  // tan x = x on (pi, 3pi/2)
  const double root = oracle::bisect([](double x) { return std::sin(x) - x * std::cos(x); }, pi + 0.1, 1.5 * pi - 1e-9);
  EXPECT_NEAR(bessel_zero(BesselOrder(1.5), 1), root, 1e-12);
  EXPECT_NEAR(root, 4.4934094579090633, 1e-13);
}

TEST(Specfun, ZerosMatchStandardLibrarySignChange) {
  for (double nu : {0.0, 0.3, 1.5, 4.0, 11.5}) {
    const BesselOrder o(nu);
    for (int n : {1, 2, 5, 30, 200}) {
      const double j = bessel_zero(o, n);
      EXPECT_LE(std::fabs(std::cyl_bessel_j(nu, j)), 1e-12) << "nu=" << nu << " n=" << n;
      // counting: exactly n - 1 zeros below
      if (n > 1) EXPECT_GT(j - bessel_zero(o, n - 1), 2.5);
    }
  }
}

TEST(Specfun, ZeroAsymptoticsApproach) {
  for (double l : {1.0, 2.5}) {
    const BesselOrder o(l + 0.5);
    double prev = 1e9;
    for (int n = 10; n <= 200; n += 10) {
      const double d = std::fabs(bessel_zero(o, n) - (n + l / 2) * pi);
      EXPECT_LT(d, prev);
      EXPECT_LE(d * n, 2.0 * (l + 1) * (l + 1));
      prev = d;
    }
  }
}

TEST(Specfun, RobinZerosForHalfOrder) {
  // l = 0, beta = 0: cos w = 0
  const BesselOrder o(0.5);
  for (int n = 0; n < 20; ++n) EXPECT_NEAR(robin_zero(o, 0.0, 0.0, n), (n + 0.5) * pi, 1e-12);
}

TEST(Specfun, RobinZerosInterlaceWithDirichlet) {
  const BesselOrder o(1.5);
  for (int n = 1; n < 15; ++n) {
    const double j = bessel_zero(o, n);
    EXPECT_LT(robin_zero(o, 1.0, 2.0, n - 1), j);
    EXPECT_GT(robin_zero(o, 1.0, 2.0, n), j);
  }
  EXPECT_NEAR(robin_zero(o, 1.0, 2.0, 0), 3.4056, 1e-4);
}

TEST(Specfun, RobinGroundStateEdgeCases) {
  const BesselOrder o(0.5);
  EXPECT_EQ(robin_zero(o, 0.0, -1.0, 0), 0.0);
  EXPECT_THROW(robin_zero(o, 0.0, -1.5, 0), NonPositiveGroundState);
}

TEST(Specfun, RejectsBadArguments) {
  EXPECT_THROW(bessel_pair(BesselOrder(0.5), -1.0), DomainError);
  EXPECT_THROW(bessel_zero(BesselOrder(0.5), 0), DomainError);
  EXPECT_THROW(BesselOrder(-0.1), DomainError);
  EXPECT_THROW(BesselOrder(41.0), DomainError);
}
