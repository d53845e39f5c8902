#include <gtest/gtest.h>

#include <cmath>

#include "lorentz/constructions.hpp"
#include "lorentz/embeddings.hpp"
#include "random_family.hpp"

namespace lorentz {
namespace {

const Weight kChi = Weight::characteristic(0.0, 1.0);

RunConfig exactness_cfg() {
  RunConfig cfg;
  cfg.grid_min = 1e-3;
  cfg.grid_max = 1e3;
  cfg.per_decade = 16;
  return cfg;
}

TEST(BuildWq, ExponentialClosedForm) {
  const auto r = build_wq(Weight::exponential(1.0, 1.0), 2.0, exactness_cfg());
  EXPECT_EQ(r.depth, 0);
  EXPECT_EQ(r.clamped, 0u);
  for (double x : {1e-3, 0.1, 1.0, 5.0}) {
    const double e = std::exp(-x);
    EXPECT_NEAR(r.wq(x), x * e * (1.0 - 2.0 * e) + (1.0 - e) * e, 1e-14);
  }
  EXPECT_LT(r.wq(1e-9), 1e-8);
}

TEST(BuildWq, OrderOneIsMinusTDerivative) {
  const auto w = Weight::shifted_power(1.0, 1.0, -2.0);
  const auto r = build_wq(w, 1.0, exactness_cfg());
  for (double t : {0.1, 1.0, 10.0}) EXPECT_NEAR(r.wq(t), 2.0 * t * std::pow(1.0 + t, -3.0), 1e-14);
}

TEST(BuildWq, IdentityIsExactForSmoothDecreasingWeights) {
  const auto cfg = exactness_cfg();
  for (const auto& w : {Weight::exponential(1.0, 1.0), Weight::shifted_power(1.0, 1.0, -2.0),
                        Weight::exponential(2.0, 0.5)})
    for (double q : {1.0, 2.0, 3.0}) {
      const auto r = build_wq(w, q, cfg);
      EXPECT_TRUE(r.verification.pass) << r.verification.failure;
      EXPECT_NEAR(r.verification.c1, 1.0, 1e-6) << w.to_json().dump() << " q=" << q;
      EXPECT_NEAR(r.verification.c2, 1.0, 1e-6) << w.to_json().dump() << " q=" << q;
    }
}

TEST(BuildWq, OutputIsNonnegativeOnTheTable) {
  testing::Rng rng(71);
  for (int k = 0; k < 6; ++k) {
    const auto w = k % 2 ? Weight::exponential(testing::uniform(rng, 0.5, 2.0), testing::uniform(rng, 0.2, 3.0))
                         : Weight::shifted_power(1.0, testing::uniform(rng, 0.5, 2.0), -testing::uniform(rng, 0.5, 3.0));
    const auto r = build_wq(w, 1.0 + k % 3, exactness_cfg());
    for (double v : r.table_values) EXPECT_GE(v, 0.0);
  }
}

TEST(BuildWq, CharacteristicGoesThroughSmoothing) {
  const auto r = build_wq(kChi, 2.0);
  EXPECT_EQ(r.depth, 2);
  EXPECT_TRUE(r.verification.pass) << r.verification.failure;
  EXPECT_LE(r.verification.c2 / r.verification.c1, 16.0);
}

TEST(BuildWq, ContinuousInputSmoothedOnce) {
  // −log t on (0,1) is continuous with a kink at 1.
  const auto r = build_wq(Weight::log_poly({0.0, -1.0}, 0.0, 0.0, 1.0), 1.0);
  EXPECT_EQ(r.depth, 1);
  EXPECT_LE(r.verification.c2 / r.verification.c1, 4.0);
}

TEST(BuildWq, PreconditionsEnforced) {
  EXPECT_THROW(build_wq(Weight::constant(1.0), 2.0), std::domain_error);
  EXPECT_THROW(build_wq(Weight::sum({Weight::constant(1.0), Weight::power(-0.5)}), 1.0), std::domain_error);
  EXPECT_THROW(build_wq(Weight::power(1.0), 1.0), std::domain_error);
  EXPECT_THROW(build_wq(Weight::exponential(1.0, 1.0), 0.5), std::invalid_argument);
}

TEST(VerifyEcuwq, ZeroCandidateFails) {
  const auto rep = verify_ecuwq(kChi, Weight::constant(0.0), 2.0, exactness_cfg());
  EXPECT_FALSE(rep.pass);
}

TEST(Lambda1, CaseSplit) {
  const auto ii = lambda1_equivalent_norm(Weight::constant(1.0));
  EXPECT_EQ(ii.which, Lambda1Case::II);
  EXPECT_FALSE(ii.v.has_value());
  const auto iii = lambda1_equivalent_norm(Weight::sum({Weight::constant(1.0), Weight::power(-0.5)}));
  EXPECT_EQ(iii.which, Lambda1Case::III);
  EXPECT_TRUE(iii.v.has_value());
  EXPECT_TRUE(iii.u.has_value());
  EXPECT_NEAR(iii.w_inf, 1.0, 1e-12);
  const auto i = lambda1_equivalent_norm(Weight::exponential(1.0, 1.0));
  EXPECT_EQ(i.which, Lambda1Case::I);
  ASSERT_TRUE(i.eqwv);
  EXPECT_EQ(i.eqwv->status, EmbeddingStatus::Holds);
  EXPECT_NEAR(i.eqwv->c1, 1.0, 1e-6);
  EXPECT_NEAR(i.eqwv->c2, 1.0, 1e-6);
}

TEST(Lambda1, UndeclaredIncreasingIsInconclusive) {
  EXPECT_EQ(lambda1_equivalent_norm(Weight::power(0.5)).which, Lambda1Case::Inconclusive);
}

TEST(Lambda1, CharacteristicCaseOne) {
  const auto i = lambda1_equivalent_norm(kChi);
  EXPECT_EQ(i.which, Lambda1Case::I);
  ASSERT_TRUE(i.eqwv);
  EXPECT_EQ(i.eqwv->status, EmbeddingStatus::Holds);
}

TEST(ExplicitV, FormulaAndSupport) {
  const auto v = paper_v_char01();
  EXPECT_NEAR(v(0.375), std::log(1.5) / (0.375 * 0.375), 1e-14);
  for (double t : {0.1, 0.25, 1.0, 2.0}) EXPECT_DOUBLE_EQ(v(t), 0.0);
  for (double t : log_grid(0.26, 0.99, 64)) EXPECT_GE(v(t), 0.0);
  EXPECT_TRUE(std::isfinite(v.W(kInf)));
}

}  // namespace
}  // namespace lorentz
