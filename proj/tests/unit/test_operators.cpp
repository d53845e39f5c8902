#include <gtest/gtest.h>

#include <cmath>

#include "lorentz/operators.hpp"
#include "random_family.hpp"

namespace lorentz {
namespace {

TEST(Hardy, CharacteristicFunction) {
  const StepFunction f({1.0}, {1.0});
  for (double t : {0.1, 0.5, 1.0}) EXPECT_DOUBLE_EQ(hardy(f, t), 1.0);
  for (double t : {2.0, 10.0}) EXPECT_DOUBLE_EQ(hardy(f, t), 1.0 / t);
}

TEST(Hardy, ZeroAndConstant) {
  EXPECT_DOUBLE_EQ(hardy(StepFunction{}, 3.0), 0.0);
  const auto c = Weight::constant(2.5);
  for (double t : {0.01, 1.0, 100.0}) EXPECT_NEAR(hardy(c, t), 2.5, 1e-14);
}

TEST(Hardy, NonpositiveArgumentThrows) {
  EXPECT_THROW(hardy(StepFunction({1.0}, {1.0}), 0.0), std::invalid_argument);
  EXPECT_THROW(hardy(StepFunction({1.0}, {1.0}), -1.0), std::invalid_argument);
}

TEST(Hardy, GenericHandleMatchesStep) {
  const StepFunction f({0.5, 2.0}, {3.0, 1.0});
  const std::vector<double> bps{0.5, 2.0};
  for (double t : {0.3, 1.0, 5.0})
    EXPECT_NEAR(hardy(Integrand([&](double s) { return f(s); }), t, bps), hardy(f, t), 1e-10);
}

TEST(Hardy, DecreasingInputGivesDecreasingAverage) {
  testing::Rng rng(4);
  for (int k = 0; k < 50; ++k) {
    const auto f = testing::random_decreasing_step(rng);
    double prev = kInf;
    for (double t : log_grid(1e-4, 1e4, 16)) {
      const double v = hardy(f, t);
      EXPECT_LE(v, prev * (1 + 1e-14));
      prev = v;
    }
  }
}

TEST(AdjointHardy, CharacteristicFunction) {
  const StepFunction f({1.0}, {1.0});
  EXPECT_NEAR(adjoint_hardy(f, 0.5).value, std::log(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(adjoint_hardy(f, 1.0).value, 0.0);
  EXPECT_DOUBLE_EQ(adjoint_hardy(f, 3.0).value, 0.0);
}

TEST(AdjointHardy, ConstantDiverges) { EXPECT_TRUE(adjoint_hardy(Weight::constant(1.0), 1.0).diverged); }

TEST(AdjointHardy, WeightPathMatchesStepPath) {
  const auto w = Weight::characteristic(0.0, 1.0);
  EXPECT_NEAR(adjoint_hardy(w, 0.25).value, std::log(4.0), 1e-12);
}

TEST(Maximal, CharacteristicProfile) {
  const auto f = DecreasingProfile::step(StepFunction({3.0}, {1.0}));
  for (double t : {0.5, 3.0, 6.0, 30.0}) EXPECT_DOUBLE_EQ(maximal(f, t), std::min(1.0, 3.0 / t));
  EXPECT_DOUBLE_EQ(maximal(DecreasingProfile(), 2.0), 0.0);
}

TEST(Maximal, PointwiseProperties) {
  testing::Rng rng(17);
  for (int k = 0; k < 50; ++k) {
    const auto f = k % 2 ? testing::random_decreasing_step(rng) : testing::random_decay(rng);
    double prev = kInf, prev_t = 0.0;
    for (double t : log_grid(1e-4, 1e4, 16)) {
      const double m = maximal(f, t);
      EXPECT_GE(m, f(t) * (1 - 1e-12));
      EXPECT_LE(m, prev * (1 + 1e-12));
      EXPECT_GE(t * m, prev_t * (1 - 1e-12));
      prev = m;
      prev_t = t * m;
    }
  }
}

TEST(Maximal, Subadditive) {
  testing::Rng rng(23);
  for (int k = 0; k < 100; ++k) {
    const StepFunction f = testing::random_step(rng), g = testing::random_step(rng);
    const auto fs = rearrange(f), gs = rearrange(g), hs = rearrange(f + g);
    for (int j = 0; j < 100; ++j) {
      const double t = std::pow(10.0, testing::uniform(rng, -4.0, 4.0));
      EXPECT_LE(maximal(hs, t), (maximal(fs, t) + maximal(gs, t)) * (1 + 1e-12) + 1e-300);
    }
  }
}

TEST(LevelSet, ClosedForms) {
  EXPECT_DOUBLE_EQ(hardy_char_levelset(1.0, 0.5, Weight::constant(1.0)), 2.0);
  EXPECT_DOUBLE_EQ(hardy_char_levelset(1.0, 1.0, Weight::constant(1.0)), 0.0);
  EXPECT_DOUBLE_EQ(hardy_char_levelset(3.0, 2.0, Weight::power(0.5)), 0.0);
  EXPECT_DOUBLE_EQ(hardy_char_levelset(0.5, 0.25, Weight::characteristic(0.0, 1.0)), 1.0);
}

TEST(Composite, HardyAndAdjointCommute) {
  // S(S*v) = S*(Sv) for compactly supported step weights.
  testing::Rng rng(31);
  for (int k = 0; k < 20; ++k) {
    const StepFunction v = testing::random_step(rng);
    const auto wv = Weight::step(v);
    for (double r : log_grid(1e-3, 1e3, 8)) {
      const double lhs = hardy_adjoint_composite(wv, r).value;
      const auto sv = [&](double s) { return hardy(v, s) / s; };
      std::vector<double> bps(v.breakpoints().begin(), v.breakpoints().end());
      const double rhs = integrate(sv, r, kInf, bps).value;
      EXPECT_NEAR(lhs, rhs, 1e-8 * (1.0 + lhs));
    }
  }
}

TEST(Grid, PrimitiveAndTailMatchPointwise) {
  const auto w = Weight::smoothed(Weight::characteristic(0.0, 1.0));  // no closed primitive in grid form
  const auto grid = log_grid(1e-2, 1e2, 8);
  const auto W = primitive_on_grid(w, grid);
  const auto T = tail_on_grid(Weight::exponential(1.0, 1.0), grid, 1.0);
  for (std::size_t k = 0; k < grid.size(); k += 5) {
    EXPECT_NEAR(W[k], w.W(grid[k]), 1e-9 * (1.0 + W[k]));
    const double ref = integrate([](double s) { return std::exp(-s) / s; }, grid[k], kInf).value;
    EXPECT_NEAR(T[k].value, ref, 1e-8 * ref);
  }
}

}  // namespace
}  // namespace lorentz
