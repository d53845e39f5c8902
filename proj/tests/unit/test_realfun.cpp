#include <gtest/gtest.h>

#include <cmath>

#include "lorentz/profile.hpp"
#include "lorentz/quadrature.hpp"
#include "lorentz/step_function.hpp"
#include "random_family.hpp"

namespace lorentz {
namespace {

TEST(StepFunction, CanonicalFormMergesEqualNeighbours) {
  const StepFunction f({1.0, 2.0, 3.0}, {2.0, 2.0, 1.0});
  ASSERT_EQ(f.size(), 2u);
  EXPECT_DOUBLE_EQ(f.breakpoints()[0], 2.0);
  EXPECT_DOUBLE_EQ(f(1.5), 2.0);
  EXPECT_DOUBLE_EQ(f(2.0), 1.0);  // left-closed pieces
  EXPECT_DOUBLE_EQ(f(3.0), 0.0);
}

TEST(StepFunction, RejectsInvalidInput) {
  EXPECT_THROW(StepFunction({2.0, 1.0}, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(StepFunction({1.0}, {-1.0}), std::invalid_argument);
  EXPECT_THROW(StepFunction({0.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(StepFunction({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST(Rearrange, SortsBlocksByValue) {
  // 1 on (0,1), 2 on (1,2) -> 2 on (0,1), 1 on (1,2)
  const auto r = rearrange(StepFunction({1.0, 2.0}, {1.0, 2.0}));
  ASSERT_NE(r.as_step(), nullptr);
  EXPECT_EQ(*r.as_step(), StepFunction({1.0, 2.0}, {2.0, 1.0}));
}

TEST(Rearrange, DecreasingInputIsFixed) {
  const StepFunction f({0.5, 2.0, 7.0}, {3.0, 2.0, 0.5});
  EXPECT_EQ(*rearrange(f).as_step(), f);
}

TEST(Rearrange, SingleBlockTranslatesToOrigin) {
  // 3 on (5,6) -> 3 on (0,1)
  const auto r = rearrange(StepFunction({5.0, 6.0}, {0.0, 3.0}));
  EXPECT_EQ(*r.as_step(), StepFunction({1.0}, {3.0}));
}

TEST(Rearrange, EmptyGivesZero) { EXPECT_TRUE(rearrange(StepFunction{}).is_zero()); }

TEST(Rearrange, PreservesDistributionIntegralAndIsIdempotent) {
  testing::Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const StepFunction f = testing::random_step(rng);
    const auto r = rearrange(f);
    EXPECT_NEAR(r.primitive(kInf), f.integral(), 1e-12 * (1.0 + f.integral()));
    EXPECT_EQ(*rearrange(*r.as_step()).as_step(), *r.as_step());
    for (double v : f.values()) {
      for (double lam : {0.5 * v, v, v * (1.0 - 1e-9)}) {
        const double a = f.measure_above(lam);
        const double b = r.as_step()->measure_above(lam);
        EXPECT_NEAR(a, b, 1e-12 * (1.0 + a));
      }
    }
  }
}

TEST(Integrate, CharacteristicOnHalfLine) {
  const auto r = integrate([](double t) { return t < 1.0 ? 1.0 : 0.0; }, 0.0, kInf, std::vector<double>{1.0});
  EXPECT_FALSE(r.diverged);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
}

TEST(Integrate, InverseSquareTail) {
  const auto r = integrate([](double t) { return 1.0 / (t * t); }, 1.0, kInf);
  EXPECT_FALSE(r.diverged);
  EXPECT_NEAR(r.value, 1.0, 1e-9);
}

TEST(Integrate, HarmonicTailDiverges) {
  const auto r = integrate([](double t) { return 1.0 / t; }, 1.0, kInf);
  EXPECT_TRUE(r.diverged);
  EXPECT_GT(r.value, 30.0);  // partial value at the horizon
}

TEST(Integrate, EndpointSingularityAtZero) {
  const auto r = integrate([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 4.0);
  EXPECT_NEAR(r.value, 4.0, 1e-10);
}

TEST(Integrate, InvalidIntervalThrows) {
  const auto f = [](double) { return 1.0; };
  EXPECT_THROW(integrate(f, 2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(integrate(f, -1.0, 1.0), std::invalid_argument);
}

TEST(Integrate, AdditiveOverBreakpoints) {
  const auto f = [](double t) { return std::exp(-t) * (t < 2.0 ? 1.0 : 0.5); };
  const std::vector<double> bps{2.0};
  QuadOptions o;
  const double whole = integrate(f, 0.1, 7.0, bps, o).value;
  const double parts = integrate(f, 0.1, 2.0, bps, o).value + integrate(f, 2.0, 7.0, bps, o).value;
  EXPECT_NEAR(whole, parts, 2 * o.rel_tol * whole);
}

TEST(Profile, PrimitiveOfStep) {
  const auto f = DecreasingProfile::step(StepFunction({1.0}, {1.0}));
  EXPECT_DOUBLE_EQ(f.primitive(0.5), 0.5);
  EXPECT_DOUBLE_EQ(f.primitive(3.0), 1.0);
}

TEST(Profile, PrimitiveOfCappedInverseSquare) {
  // t^{-2} capped at 1 below t0 = 1: 1 + (1 − 1/2) at t = 2.
  const auto f = DecreasingProfile::decay({1.0, 2.0, 0.0, 1.0, kInf});
  EXPECT_NEAR(f.primitive(2.0), 1.5, 1e-14);
  EXPECT_NEAR(f.primitive(kInf), 2.0, 1e-14);
}

TEST(Profile, DecayWithLogFactorPrimitive) {
  // e^{-1} on (0,e], t^{-1}(log t)^{-2} beyond: total 1 + 1 = 2.
  const auto f = DecreasingProfile::decay({1.0, 1.0, 2.0, std::exp(1.0), kInf});
  EXPECT_NEAR(f(std::exp(1.0) * 0.5), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(f.primitive(kInf), 2.0, 1e-13);
  EXPECT_NEAR(f.primitive(1e6), 2.0 - 1.0 / std::log(1e6), 1e-12);
}

TEST(Profile, DivergentPrimitiveIsInfinite) {
  const auto f = DecreasingProfile::decay({1.0, 1.0, 0.0, 1.0, kInf});
  EXPECT_TRUE(std::isinf(f.primitive(kInf)));
}

TEST(Profile, SumAndScaleAreLinear) {
  const auto a = DecreasingProfile::step(StepFunction({1.0, 3.0}, {2.0, 1.0}));
  const auto b = DecreasingProfile::decay({1.0, 2.0, 0.0, 1.0, kInf});
  const auto s = DecreasingProfile::sum({a, DecreasingProfile::scaled(3.0, b)});
  for (double t : {0.1, 0.9, 1.0, 2.5, 10.0}) {
    EXPECT_NEAR(s(t), a(t) + 3.0 * b(t), 1e-14);
    EXPECT_NEAR(s.primitive(t), a.primitive(t) + 3.0 * b.primitive(t), 1e-13);
  }
}

TEST(Profile, StepMustBeNonincreasing) {
  EXPECT_THROW(DecreasingProfile::step(StepFunction({1.0, 2.0}, {1.0, 2.0})), std::invalid_argument);
}

TEST(Profile, PrimitiveIsMonotone) {
  testing::Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    const auto f = testing::random_decay(rng);
    double prev = 0.0;
    for (double t : log_grid(1e-4, 1e4, 8)) {
      const double v = f.primitive(t);
      EXPECT_GE(v, prev * (1 - 1e-14));
      prev = v;
    }
  }
}

}  // namespace
}  // namespace lorentz
