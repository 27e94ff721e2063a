#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gravprobe/coefficients.hpp"
#include "gravprobe/presets.hpp"
#include "test_support.hpp"

using namespace gravprobe;
using testing_support::rel_err;

namespace {

// Reference values frozen from tests/oracles/reference_values.py (mpmath, 120 digits).
constexpr double kFig3ExactAlphaC0x = 1.299886219173994403e-40;
constexpr double kFig3ExactAlphaC0y = 3.7696700356045837687e-35;
constexpr double kFig3ExactAlphaC1x = -1.2998862191276250967e-31;
constexpr double kFig3ExactAlphaC1y = 2.5997724383016194997e-31;
constexpr double kFig3AlphaC2 = -1.3447098818881427251e-36;
constexpr double kFig3MinusGmmOverD3 = -1.299886219173994403e-31;
constexpr double kFig3ShiftedAlphaC1x = -1.2998862191276529155e-31;  // x2_bar = 2e-13 m
constexpr double kFig3ShiftedBetaC1x = -1.2998862191275972724e-31;
constexpr double kFig3ShiftedClassicalC1x = -1.2998862191276250939e-31;
constexpr double kFig3AlphaX2 = 3.465947640186116129e-32;
constexpr double kFig3Y2 = 1.113711707095815709e-26;
constexpr double kFig3RecenterX = -1.291247140846363124e-8;
constexpr double kFig4AlphaC1x = 2.9496517435458588388e-12;
constexpr double kFig4AlphaC2 = -8.8489552306375765165e-12;

SystemParameters fig3() { return fig3_preset().params; }

}  // namespace

TEST(ExactCoefficients, Fig3AlphaMatchesOracle) {
  const GravityCoefficients c = exact_coefficients(fig3(), Scenario::alpha());
  EXPECT_LT(rel_err(c.c0_x, kFig3ExactAlphaC0x), 1e-13);
  EXPECT_LT(rel_err(c.c0_y, kFig3ExactAlphaC0y), 1e-13);
  EXPECT_LT(rel_err(c.c1_x, kFig3ExactAlphaC1x), 1e-13);
  EXPECT_LT(rel_err(c.c1_y, kFig3ExactAlphaC1y), 1e-13);
  EXPECT_LT(rel_err(c.c2, kFig3AlphaC2), 1e-13);
}

TEST(ExactCoefficients, Fig3C1xIsMinusGmmOverD3) {
  const GravityCoefficients c = exact_coefficients(fig3(), Scenario::alpha());
  EXPECT_LT(rel_err(c.c1_x, kFig3MinusGmmOverD3), 1e-4);
}

TEST(ExactCoefficients, MirrorSymmetryBetweenBranches) {
  const GravityCoefficients a = exact_coefficients(fig3(), Scenario::alpha());
  const GravityCoefficients b = exact_coefficients(fig3(), Scenario::beta());
  EXPECT_EQ(a.c0_x, -b.c0_x);
  EXPECT_EQ(a.c0_y, b.c0_y);
  EXPECT_EQ(a.c1_x, b.c1_x);
  EXPECT_EQ(a.c1_y, b.c1_y);
  EXPECT_EQ(a.c2, -b.c2);
}

TEST(ExactCoefficients, AxisAlignedSourceHasNoCrossTerm) {
  SystemParameters p = fig3();
  p.geometry.d_y = 0.0;
  EXPECT_EQ(exact_coefficients(p, Scenario::alpha()).c2, 0.0);
}

TEST(ExactCoefficients, CoincidentSourceIsSingular) {
  SystemParameters p = fig3();
  p.geometry.d_y = 0.0;
  p.geometry.x2_bar = p.geometry.d_x;
  EXPECT_THROW(exact_coefficients(p, Scenario::alpha()), NumericError);
  EXPECT_NO_THROW(exact_coefficients(p, Scenario::beta()));
}

TEST(ExactCoefficients, ClassicalScenarioIsNotABranch) {
  EXPECT_THROW(exact_coefficients(fig3(), Scenario::classical()), ConfigError);
}

TEST(FarfieldCoefficients, AxisAlignedLimit) {
  SystemParameters p = fig3();
  p.geometry.d_y = 0.0;
  const double gmm = PhysicalConstants::G * p.m1 * p.m2;
  const double dx3 = std::pow(p.geometry.d_x, 3);
  const GravityCoefficients c = farfield_coefficients(p, Scenario::alpha());
  EXPECT_LT(rel_err(c.c1_x, 2.0 * gmm / dx3), 1e-15);
  EXPECT_LT(rel_err(c.c1_y, -gmm / dx3), 1e-15);
  EXPECT_EQ(c.c2, 0.0);
}

TEST(FarfieldCoefficients, ClassicalHasNoCrossTerm) {
  EXPECT_EQ(farfield_coefficients(fig3(), Scenario::classical()).c2, 0.0);
  EXPECT_EQ(farfield_coefficients(fig4_preset().params, Scenario::classical()).c2, 0.0);
}

TEST(FarfieldCoefficients, Fig3CrossTermMatchesOracle) {
  EXPECT_LT(rel_err(farfield_coefficients(fig3(), Scenario::alpha()).c2, kFig3AlphaC2), 1e-13);
}

TEST(FarfieldCoefficients, Fig4MatchesOracle) {
  const GravityCoefficients c = farfield_coefficients(fig4_preset().params, Scenario::alpha());
  EXPECT_LT(rel_err(c.c1_x, kFig4AlphaC1x), 1e-13);
  EXPECT_EQ(c.c1_x, c.c1_y);
  EXPECT_LT(rel_err(c.c2, kFig4AlphaC2), 1e-13);
}

TEST(FarfieldCoefficients, GuardPointsToExactPath) {
  SystemParameters p = fig3();
  p.geometry.x2_bar = 1e-11;  // d_x / |x2_bar| = 100 < 1e3
  try {
    farfield_coefficients(p, Scenario::alpha());
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("exact"), std::string::npos);
  }
  p.geometry.farfield_factor = 50.0;
  EXPECT_NO_THROW(farfield_coefficients(p, Scenario::alpha()));
}

TEST(ClassicalAverage, FarfieldBranchesCancelCrossTerm) {
  const GravityCoefficients a = farfield_coefficients(fig3(), Scenario::alpha());
  const GravityCoefficients b = farfield_coefficients(fig3(), Scenario::beta());
  const GravityCoefficients c = classical_average(a, b);
  EXPECT_EQ(c.c2, 0.0);
  EXPECT_EQ(c.scenario, Scenario::classical());
}

TEST(ClassicalAverage, EqualInputsAreReturned) {
  GravityCoefficients a = farfield_coefficients(fig3(), Scenario::alpha());
  GravityCoefficients b = a;
  b.scenario = Scenario::beta();
  const GravityCoefficients c = classical_average(a, b);
  EXPECT_EQ(c.c0_x, a.c0_x);
  EXPECT_EQ(c.c1_x, a.c1_x);
  EXPECT_EQ(c.c1_y, a.c1_y);
  EXPECT_EQ(c.c2, a.c2);
}

TEST(ClassicalAverage, ShiftedProbeMatchesOracleMean) {
  SystemParameters p = fig3();
  p.geometry.x2_bar = 2e-13;
  const GravityCoefficients a = exact_coefficients(p, Scenario::alpha());
  const GravityCoefficients b = exact_coefficients(p, Scenario::beta());
  EXPECT_LT(rel_err(a.c1_x, kFig3ShiftedAlphaC1x), 1e-13);
  EXPECT_LT(rel_err(b.c1_x, kFig3ShiftedBetaC1x), 1e-13);
  EXPECT_LT(rel_err(classical_average(a, b).c1_x, kFig3ShiftedClassicalC1x), 1e-13);
  EXPECT_LT(rel_err(coefficients(p, Scenario::classical(), CoefficientMode::Exact).c1_x, kFig3ShiftedClassicalC1x),
            1e-13);
}

TEST(ClassicalAverage, RejectsMismatchedSources) {
  SystemParameters q = fig3();
  q.m1 *= 2.0;
  EXPECT_THROW(classical_average(exact_coefficients(fig3(), Scenario::alpha()),
                                 exact_coefficients(q, Scenario::beta())),
               ConfigError);
  EXPECT_THROW(classical_average(exact_coefficients(fig3(), Scenario::alpha()),
                                 exact_coefficients(fig3(), Scenario::alpha())),
               ConfigError);
}

TEST(SteadyDisplacement, ClassicalStaysCentred) {
  EXPECT_EQ(steady_displacement(fig3(), Scenario::classical()).x2, 0.0);
}

TEST(SteadyDisplacement, BranchesAreMirrorImages) {
  const SteadyDisplacement a = steady_displacement(fig3(), Scenario::alpha());
  const SteadyDisplacement b = steady_displacement(fig3(), Scenario::beta());
  EXPECT_EQ(a.x2, -b.x2);
  EXPECT_EQ(a.y2, b.y2);
  EXPECT_EQ(a.y2, steady_displacement(fig3(), Scenario::classical()).y2);
}

TEST(SteadyDisplacement, Fig3MatchesOracle) {
  const SteadyDisplacement a = steady_displacement(fig3(), Scenario::alpha());
  EXPECT_LT(rel_err(a.x2, kFig3AlphaX2), 1e-13);
  EXPECT_LT(rel_err(a.y2, kFig3Y2), 1e-13);
}

TEST(TrapRecenter, NoLightNoShift) { EXPECT_EQ(trap_recenter(fig3(), 0.0, Axis::X), 0.0); }

TEST(TrapRecenter, LinearInPhotonNumber) {
  const double r1 = trap_recenter(fig3(), 1000.0, Axis::Y);
  const double r2 = trap_recenter(fig3(), 2000.0, Axis::Y);
  EXPECT_LT(rel_err(r2, 2.0 * r1), 1e-15);
  EXPECT_LT(r1, 0.0);
}

TEST(TrapRecenter, Fig3XMatchesOracle) {
  const double n = 1975.3086323478939401;
  EXPECT_LT(rel_err(trap_recenter(fig3(), n, Axis::X), kFig3RecenterX), 1e-13);
}

// ---------------------------------------------------------------- properties

namespace {

SystemParameters random_geometry(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> exponent(-9.0, -2.0);
  std::uniform_real_distribution<double> mass(-20.0, -8.0);
  SystemParameters p = fig4_preset().params;
  p.m1 = std::pow(10.0, mass(rng));
  p.m2 = std::pow(10.0, mass(rng));
  p.geometry.d_x = std::pow(10.0, exponent(rng));
  p.geometry.d_y = std::pow(10.0, exponent(rng));
  return p;
}

}  // namespace

TEST(CoefficientProperties, TraceIdentity) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 5000; ++i) {
    const SystemParameters p = random_geometry(rng);
    const double d = p.geometry.d();
    const double expected = PhysicalConstants::G * p.m1 * p.m2 / (d * d * d);
    for (Scenario s : {Scenario::alpha(), Scenario::beta(), Scenario::classical()}) {
      const GravityCoefficients c = farfield_coefficients(p, s);
      EXPECT_LT(rel_err(c.c1_x + c.c1_y, expected), 1e-12);
    }
  }
}

TEST(CoefficientProperties, CrossTermSignIsMinusBranchSign) {
  std::mt19937_64 rng(102);
  for (int i = 0; i < 5000; ++i) {
    const SystemParameters p = random_geometry(rng);
    EXPECT_LT(farfield_coefficients(p, Scenario::alpha()).c2, 0.0);
    EXPECT_GT(farfield_coefficients(p, Scenario::beta()).c2, 0.0);
    EXPECT_EQ(classical_average(farfield_coefficients(p, Scenario::alpha()),
                                farfield_coefficients(p, Scenario::beta()))
                  .c2,
              0.0);
  }
}

TEST(CoefficientProperties, FarfieldEqualsExactAtCentredProbe) {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 5000; ++i) {
    const SystemParameters p = random_geometry(rng);
    for (Scenario s : {Scenario::alpha(), Scenario::beta()}) {
      const GravityCoefficients f = farfield_coefficients(p, s);
      const GravityCoefficients e = exact_coefficients(p, s);
      EXPECT_LT(rel_err(f.c0_x, e.c0_x), 1e-12);
      EXPECT_LT(rel_err(f.c0_y, e.c0_y), 1e-12);
      EXPECT_LT(rel_err(f.c2, e.c2), 1e-12);
      // c1 contains 2 d_x^2 - d_y^2 (or its mirror), so compare on the natural scale.
      const double scale = PhysicalConstants::G * p.m1 * p.m2 / std::pow(p.geometry.d(), 3);
      EXPECT_LT(std::abs(f.c1_x - e.c1_x) / scale, 1e-12);
      EXPECT_LT(std::abs(f.c1_y - e.c1_y) / scale, 1e-12);
    }
  }
}

TEST(CoefficientProperties, FarfieldErrorIsFirstOrderInProbeOffset) {
  // First-order bounds on the natural scales G m1 m2 / d^3 (c1, c2) and
  // G m1 m2 / d^2 (c0), from the derivatives of the exact cells in x2_bar.
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> frac(-1e-3, 1e-3);
  for (int i = 0; i < 5000; ++i) {
    SystemParameters p = random_geometry(rng);
    p.geometry.x2_bar = frac(rng) * p.geometry.d_x;
    const double d = p.geometry.d();
    const double x2 = std::abs(p.geometry.x2_bar);
    const double gmm = PhysicalConstants::G * p.m1 * p.m2;
    const double s3 = gmm / (d * d * d);
    const double s2 = gmm / (d * d);
    const double slack = 1.0 + 10.0 * x2 / p.geometry.d_x;
    for (Scenario s : {Scenario::alpha(), Scenario::beta()}) {
      const GravityCoefficients f = farfield_coefficients(p, s);
      const GravityCoefficients e = exact_coefficients(p, s);
      EXPECT_LE(std::abs(f.c1_x - e.c1_x) / s3, 9.0 * p.geometry.d_x * x2 / (d * d) * slack + 1e-12);
      EXPECT_LE(std::abs(f.c1_y - e.c1_y) / s3, 12.0 * p.geometry.d_x * x2 / (d * d) * slack + 1e-12);
      EXPECT_LE(std::abs(f.c2 - e.c2) / s3, 12.0 * p.geometry.d_y * x2 / (d * d) * slack + 1e-12);
      EXPECT_LE(std::abs(f.c0_x - e.c0_x) / s2, 2.0 * x2 / d * slack + 1e-12);
    }
  }
}

TEST(CoefficientProperties, ScalingIsLinearInMasses) {
  const GravityCoefficients c = farfield_coefficients(fig4_preset().params, Scenario::alpha());
  const GravityCoefficients h = c.scaled(0.5);
  EXPECT_EQ(h.c1_x, 0.5 * c.c1_x);
  EXPECT_EQ(h.c2, 0.5 * c.c2);
  EXPECT_EQ(h.source.gm1m2, 0.5 * c.source.gm1m2);
}
