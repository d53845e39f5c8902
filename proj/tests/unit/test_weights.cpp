#include <gtest/gtest.h>

#include <cmath>

#include "lorentz/quadrature.hpp"
#include "lorentz/weight.hpp"
#include "random_family.hpp"

namespace lorentz {
namespace {

const double kE = std::exp(1.0);

TEST(WeightPrimitive, CharacteristicSaturates) { EXPECT_DOUBLE_EQ(Weight::characteristic(0.0, 1.0).W(2.0), 1.0); }

TEST(WeightPrimitive, SquareRootPower) { EXPECT_NEAR(Weight::power(0.5).W(4.0), 16.0 / 3.0, 1e-14); }

TEST(WeightPrimitive, LogPolynomialOnUnitInterval) {
  // (1 − log t) on (0,1): ∫₀¹ = 2.
  const auto w = Weight::log_poly({1.0, -1.0}, 0.0, 0.0, 1.0);
  EXPECT_TRUE(w.has_closed_primitive());
  EXPECT_NEAR(w.W(1.0), 2.0, 1e-14);
  EXPECT_NEAR(w.W(5.0), 2.0, 1e-14);
}

TEST(WeightPrimitive, NonIntegrablePowerRejectedAtConstruction) {
  EXPECT_THROW(Weight::power(-1.0), std::invalid_argument);
  EXPECT_THROW(Weight::power(-1.5, 0.0, 1.0), std::invalid_argument);
  EXPECT_NO_THROW(Weight::power(-1.5, 1.0, kInf));
}

TEST(WeightPrimitive, TabulatedGridMustIncrease) {
  EXPECT_THROW(Weight::tabulated({1.0, 1.0, 2.0}, {1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST(WeightPrimitive, MonotoneAndVanishingAtZero) {
  testing::Rng rng(21);
  for (int k = 0; k < 50; ++k) {
    const Weight w = testing::random_family_weight(rng);
    EXPECT_EQ(w.W(0.0), 0.0);
    double prev = 0.0;
    for (double t : log_grid(1e-6, 1e6, 4)) {
      const double v = w.W(t);
      EXPECT_GE(v, prev * (1.0 - 1e-12)) << w.to_json().dump();
      prev = v;
    }
  }
}

TEST(WeightPrimitive, ClosedFormsAgreeWithQuadrature) {
  testing::Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const Weight w = testing::random_family_weight(rng);
    const auto bps = w.breakpoints();
    for (double t : {0.3, 2.0, 17.0}) {
      const double exact = w.W(t);
      const double quad = integrate([&](double s) { return w(s); }, 0.0, t, bps).value;
      EXPECT_NEAR(quad, exact, 1e-9 * std::max(exact, 1e-300)) << w.to_json().dump() << " t=" << t;
    }
  }
}

TEST(WeightPrimitive, AverageIsNonincreasingForDecreasingWeights) {
  testing::Rng rng(8);
  for (int k = 0; k < 30; ++k) {
    const Weight w = testing::random_decreasing_weight(rng);
    double prev = kInf;
    for (double t : log_grid(1e-4, 1e4, 8)) {
      const double avg = w.W(t) / t;
      EXPECT_LE(avg, prev * (1.0 + 1e-12)) << w.to_json().dump();
      prev = avg;
    }
  }
}

TEST(Smoothing, ConstantWeightBecomesThreeHalves) {
  const auto s = Weight::smoothed(Weight::constant(1.0));
  for (double t : {1e-3, 0.5, 1.0, 40.0}) {
    EXPECT_NEAR(s(t), 1.5, 1e-12);
    EXPECT_NEAR(s.W(t), 1.5 * t, 1e-12 * t);
  }
}

TEST(Smoothing, CharacteristicVanishesBeyondSupport) {
  const auto s = Weight::smoothed(Weight::characteristic(0.0, 1.0));
  for (double t : {1.0, 1.5, 3.0, 100.0}) {
    EXPECT_NEAR(s.W(t), 1.0, 1e-12);
    EXPECT_NEAR(s(t), 0.0, 1e-12);
  }
}

TEST(Smoothing, PrimitiveIsSandwichedAndMidpointConcave) {
  testing::Rng rng(13);
  for (int k = 0; k < 20; ++k) {
    const Weight w = testing::random_decreasing_weight(rng);
    const auto s = Weight::smoothed(w);
    const auto grid = log_grid(1e-3, 1e3, 6);
    for (double t : grid) {
      const double W = w.W(t), P = s.W(t);
      EXPECT_GE(P, W * (1.0 - 1e-9));
      EXPECT_LE(P, 2.0 * W * (1.0 + 1e-9));
    }
    for (std::size_t i = 0; i + 2 < grid.size(); i += 2) {
      const double a = grid[i], b = grid[i + 2];
      EXPECT_GE(s.W(0.5 * (a + b)), 0.5 * (s.W(a) + s.W(b)) * (1.0 - 1e-9)) << w.to_json().dump();
    }
  }
}

TEST(Smoothing, DerivativeMatchesDifferenceQuotient) {
  const auto s = Weight::smoothed(Weight::exponential(1.0, 1.0));
  for (double t : {0.1, 1.0, 4.0}) {
    const double h = 1e-5 * t;
    EXPECT_NEAR(s(t), (s.W(t + h) - s.W(t - h)) / (2 * h), 1e-6);
  }
}

TEST(LimitAtInfinity, FamilyValues) {
  EXPECT_DOUBLE_EQ(*limit_at_infinity(Weight::characteristic(0.0, 1.0)), 0.0);
  EXPECT_NEAR(*limit_at_infinity(Weight::sum({Weight::constant(1.0), Weight::power(-0.5)})), 1.0, 1e-12);
  EXPECT_NEAR(*limit_at_infinity(Weight::exponential(1.0, 1.0)), 0.0, 1e-12);
}

TEST(LimitAtInfinity, IncreasingWeightIsInconclusive) {
  EXPECT_FALSE(limit_at_infinity(Weight::power(1.0)).has_value());
}

TEST(LimitAtZero, BoundedAndUnbounded) {
  EXPECT_DOUBLE_EQ(limit_at_zero(Weight::characteristic(0.0, 1.0)), 1.0);
  EXPECT_TRUE(std::isinf(limit_at_zero(Weight::power(-0.5))));
}

TEST(Monotonicity, DeclaredOverridesSampling) {
  const auto w = Weight::power(1.0);
  EXPECT_FALSE(w.is_decreasing());
  EXPECT_TRUE(w.declare_decreasing(true).is_decreasing());
  EXPECT_TRUE(Weight::exponential(1.0, 2.0).is_decreasing());
}

TEST(WeightCombinators, SumProductDilation) {
  const auto a = Weight::power(0.5), b = Weight::exponential(2.0, 1.0);
  const auto s = Weight::sum({a, b}), p = Weight::product({a, b}), d = Weight::dilated(b, 3.0);
  for (double t : {0.2, 1.0, 5.0}) {
    EXPECT_NEAR(s(t), a(t) + b(t), 1e-14);
    EXPECT_NEAR(p(t), a(t) * b(t), 1e-14);
    EXPECT_NEAR(d(t), b(3.0 * t), 1e-14);
    EXPECT_NEAR(d.W(t), b.W(3.0 * t) / 3.0, 1e-12);
  }
}

TEST(WeightCombinators, OffsetSubtractsLimit) {
  const auto w = Weight::sum({Weight::constant(1.0), Weight::power(-0.5)});
  const auto u = Weight::offset(w, 1.0);
  EXPECT_NEAR(u(4.0), 0.5, 1e-14);
  EXPECT_NEAR(u.W(4.0), 4.0, 1e-12);
}

TEST(WeightCombinators, DerivedWeightMatchesFormula) {
  // q = 1 reduces to −t·w′(t).
  const auto w = Weight::exponential(1.0, 1.0);
  const auto w1 = Weight::wq(w, 1.0);
  for (double t : {0.1, 1.0, 3.0}) EXPECT_NEAR(w1(t), t * std::exp(-t), 1e-14);
  const auto w2 = Weight::wq(w, 2.0);
  for (double r : {0.1, 1.0, 3.0}) {
    const double e = std::exp(-r);
    EXPECT_NEAR(w2(r), r * e * (1.0 - 2.0 * e) + (1.0 - e) * e, 1e-14);
  }
}

TEST(WeightJson, RoundTripNamesKind) {
  EXPECT_EQ(Weight::characteristic(0.0, kE).to_json().at("kind"), "char");
  EXPECT_EQ(Weight::power(0.5).to_json().at("kind"), "power");
}

}  // namespace
}  // namespace lorentz
