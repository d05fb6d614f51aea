#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dipole/potential.hpp"

using namespace dipole;

namespace {

// U(x, eps) evaluated at 50 significant digits and frozen.
struct Frozen {
  double x, eps, value;
};
constexpr Frozen frozen[] = {
    {0.0, 1, 2.5066282746310005024},   {0.3, 1, 1.5840055341628995382},   {1.0, 5, 1.9235551909061377538},
    {0.5, 10, 10.241469565674372351},  {2.0, 5, 0.38909435767905633055},  {1.2, 50, 2.1397478229231207423},
    {3.0, 50, 0.14620509508022369068}, {10, 50, 0.0039952071865901604077}, {20, 50, 0.00049985005622376475589},
    {0.05, 50, 518.03958409488597267},
};

const double sqrt2pi = std::sqrt(2.0 * std::numbers::pi);

}  // namespace

TEST(PhysicalToG, Cases) {
  PhysicalParams p;
  EXPECT_EQ(physical_to_g(p), 0.0);

  p.d2 = 3.0;
  p.theta = 0.5 * std::acos(-1.0 / 3.0);
  EXPECT_NEAR(physical_to_g(p), 0.0, 1e-15);

  p.d2 = 8.0;
  p.theta = 0.0;
  EXPECT_DOUBLE_EQ(physical_to_g(p), 4.0);

  p.theta = std::numbers::pi / 2;  // side-by-side dipoles attract
  EXPECT_LT(physical_to_g(p), 0.0);
}

TEST(PhysicalToG, Validation) {
  PhysicalParams p;
  p.m = 0.0;
  EXPECT_THROW(physical_to_g(p), config_error);
  p = {};
  p.omega_perp = 0.5;
  EXPECT_THROW(physical_to_g(p), config_error);
  p = {};
  p.d2 = -1.0;
  EXPECT_THROW(physical_to_g(p), config_error);
}

TEST(UEffective, MatchesFrozenOracle) {
  for (const auto& f : frozen) EXPECT_NEAR(u_effective(f.x, f.eps), f.value, 1e-12 * f.value) << f.x << " " << f.eps;
}

TEST(UEffective, OriginScaling) {
  for (double eps : {1.0, 2.0, 5.0, 10.0, 50.0, 1e4})
    EXPECT_NEAR(u_effective(0.0, eps) / std::pow(eps, 1.5), sqrt2pi, 1e-14 * sqrt2pi);
}

TEST(UEffective, InverseCubeTail) {
  // x^3 U -> 4 - 24/(eps x^2) + O((eps x^2)^-2).
  const double x = 10.0, eps = 50.0;
  const double v = x * x * x * u_effective(x, eps);
  EXPECT_NEAR(v, 3.9952071865901604077, 1e-11);
  for (double y : {10.0, 30.0, 200.0}) {
    const double u2 = eps * y * y;
    EXPECT_NEAR(y * y * y * u_effective(y, eps), 4.0 - 24.0 / u2, 300.0 / (u2 * u2)) << "x=" << y;
  }
}

TEST(UEffective, BranchCrossoverContinuity) {
  const double s = detail::effective_series_switch;
  for (double u = 0.95 * s; u <= 1.05 * s; u += 0.005 * s) {
    const double a = detail::effective_direct(u), b = detail::effective_asymptotic(u);
    EXPECT_NEAR(a, b, 1e-9 * b) << "u=" << u;
  }
}

TEST(UEffective, MonotoneTail) {
  for (double eps : {1.0, 5.0, 50.0}) {
    double prev = 0.0;
    for (double x = std::sqrt(10.0 / eps); x < 100.0 / std::sqrt(eps); x *= 1.01) {
      const double v = x * x * x * u_effective(x, eps);
      EXPECT_GT(v, prev) << "eps=" << eps << " x=" << x;
      EXPECT_LT(v, 4.0);
      prev = v;
    }
  }
}

TEST(UEffective, DomainErrors) {
  EXPECT_THROW(u_effective(-0.1, 5.0), std::domain_error);
  EXPECT_THROW(u_effective(0.1, 0.5), std::domain_error);
}

TEST(UInteraction, Cases) {
  EXPECT_EQ(u_interaction(0.3, -1.2, InteractionModel::quasi1d(0.0, 5.0)), 0.0);
  EXPECT_EQ(u_interaction(0.3, 0.3, InteractionModel::strict1d(0.0)), 0.0);
  EXPECT_NEAR(u_interaction(0.0, std::numbers::sqrt2, InteractionModel::strict1d(1.0)), std::numbers::sqrt2, 1e-15);
  EXPECT_TRUE(std::isinf(u_interaction(1.0, 1.0, InteractionModel::strict1d(1.0))));
  EXPECT_NEAR(u_interaction(0.0, 1.3, InteractionModel::quasi1d(2.0, 5.0)), 2.0 * u_effective(1.3, 5.0), 1e-13);
}

TEST(UInteraction, QuasiApproachesStrictAtLargeSeparation) {
  const double q = u_interaction(0.0, 20.0, InteractionModel::quasi1d(1.0, 50.0));
  const double s = u_interaction(0.0, 20.0, InteractionModel::strict1d(1.0));
  // Frozen oracle: 1 - 20^3 U(20, 50) / 4.
  const double expected = 1.0 - 0.00049985005622376475589 * 8000.0 / 4.0;
  EXPECT_NEAR(1.0 - q / s, expected, 1e-10);
  EXPECT_LT(std::abs(q / s - 1.0), 1e-3);
}

TEST(UInteraction, RelativeForm) {
  const auto m = InteractionModel::quasi1d(0.7, 10.0);
  for (double x : {-2.0, 0.0, 0.4, 3.0})
    EXPECT_DOUBLE_EQ(relative_interaction(x, m), 0.7 * u_effective(std::numbers::sqrt2 * std::abs(x), 10.0));
  EXPECT_NEAR(relative_interaction(1.0, InteractionModel::strict1d(3.0)), 3.0 * std::numbers::sqrt2, 1e-14);
}

TEST(InteractionModel, Validation) {
  EXPECT_THROW(InteractionModel::quasi1d(1.0, 0.5), config_error);
  EXPECT_THROW(InteractionModel::quasi1d(1.0, INFINITY), config_error);
  EXPECT_THROW(InteractionModel::strict1d(NAN), config_error);
  EXPECT_TRUE(InteractionModel::strict1d(1.0).is_strict());
  EXPECT_TRUE(std::isfinite(relative_interaction(0.0, InteractionModel::quasi1d(1.0, 50.0))));
}
