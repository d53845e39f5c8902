#include <gtest/gtest.h>

#include <cmath>

#include "lorentz/constructions.hpp"
#include "lorentz/embeddings.hpp"
#include "lorentz/norms.hpp"
#include "lorentz/operators.hpp"
#include "random_family.hpp"

namespace lorentz {
namespace {

const Weight kOne = Weight::constant(1.0);
const Weight kChi = Weight::characteristic(0.0, 1.0);

TEST(Sandwich, FailsWhenWeightHasPositiveLimit) {
  for (const auto& w : {kOne, Weight::sum({kOne, Weight::power(-0.5)})})
    for (const auto& v : {Weight::exponential(1.0, 1.0), Weight::power(-0.5), kChi, Weight::constant(0.0)})
      EXPECT_EQ(check_sandwich(w, v, 2.0).status, EmbeddingStatus::Fails);
}

TEST(Sandwich, HoldsForDerivedWeight) {
  const auto w = Weight::exponential(1.0, 1.0);
  for (double q : {2.0, 3.0}) {
    const auto v = build_wq(w, q).wq;
    const auto r = check_sandwich(w, v, q);
    EXPECT_EQ(r.status, EmbeddingStatus::Holds) << r.reason;
    EXPECT_NEAR(r.c1, 1.0, 1e-6);
    EXPECT_NEAR(r.c2, 1.0, 1e-6);
  }
}

TEST(Sandwich, ZeroCandidateFails) { EXPECT_EQ(check_sandwich(kChi, Weight::constant(0.0), 2.0).status, EmbeddingStatus::Fails); }

TEST(Eqwv, ExplicitPairHoldsWithFrozenConstants) {
  const auto r = check_eqwv(kChi, paper_v_char01());
  EXPECT_EQ(r.status, EmbeddingStatus::Holds) << r.reason;
  EXPECT_NEAR(r.c1, 4.0 / 9.0, 0.01 * 4.0 / 9.0);
  EXPECT_NEAR(r.c2, 1.0, 0.01);
}

TEST(Eqwv, NonIntegrableSelfPairFails) { EXPECT_EQ(check_eqwv(kOne, kOne).status, EmbeddingStatus::Fails); }

TEST(Eqwv, BoundedCompactlySupportedCandidateHolds) {
  EXPECT_EQ(check_eqwv(kChi, Weight::characteristic(0.5, 1.0)).status, EmbeddingStatus::Holds);
}

TEST(Eqwv, DilationCovariance) {
  const auto v = paper_v_char01();
  const auto base = check_eqwv(kChi, v);
  for (double c : {0.5, 2.0}) {
    const auto r = check_eqwv(Weight::dilated(kChi, c), Weight::dilated(v, c));
    EXPECT_EQ(r.status, EmbeddingStatus::Holds);
    EXPECT_NEAR(r.c1, base.c1, 0.01 * base.c1);
    EXPECT_NEAR(r.c2, base.c2, 0.01 * base.c2);
  }
}

TEST(Witness, BanachaqProfile) {
  const double e = std::exp(1.0);
  const auto f = witness_banachaq(1.0, e);
  EXPECT_NEAR(f(2.0), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(f(3.0), 0.0);
  EXPECT_NEAR(f.maximal(e), 2.0 / e, 1e-14);  // (1 + log s)/s at x = s
  const auto g = witness_banachaq(2.0, 1.0 + 1e-12);
  EXPECT_NEAR(g.primitive(kInf), 2.0, 1e-9);
}

TEST(Witness, LogDecayProfile) {
  const auto f = runobancg_witness(0.5);
  const double e = std::exp(1.0);
  EXPECT_NEAR(f(e), 1.0 / e, 1e-15);
  EXPECT_NEAR(f(e * e), 1.0 / (e * e * 4.0), 1e-15);
  EXPECT_THROW(runobancg_witness(1.0), std::invalid_argument);
}

TEST(Witness, PartialIntegralsOfLogDecay) {
  // Lambda partials converge to 2 like 1/log T; the Gamma-alpha partials grow.
  EXPECT_NEAR(runobancg_lambda1_partial(0.5, 1e6), 2.0 - 1.0 / std::log(1e6), 1e-12);
  double prev = 0.0;
  for (double T = 1e4; T <= 1e16; T *= 100.0) {
    const double g = runobancg_gamma1_alpha_partial(0.5, T);
    EXPECT_GT(g, prev);
    prev = g;
  }
}

TEST(Evidence, CharacteristicFamilyRatioIsOne) {
  testing::Rng rng(73);
  const auto w = testing::random_decreasing_weight(rng);
  const NormSpec src{Space::Lambda, {1.0, kInf, 0.0}, w}, dst{Space::LambdaWeak, {1.0, kInf, 0.0}, w};
  WitnessFamily fam{"char", geometric_params(12),
                    [](double s) { return DecreasingProfile::step(StepFunction({s}, {1.0})); }};
  const auto r = norm_ratio_evidence(src, dst, fam);
  ASSERT_TRUE(r.evidence);
  for (double x : r.evidence->ratios) EXPECT_NEAR(x, 1.0, 1e-8);
  EXPECT_EQ(r.evidence->label, "boundedness evidence");
}

TEST(Evidence, GrowthForBoundaryPowerWeight) {
  const double q = 2.0;
  const auto w = Weight::power(q - 1.0);
  // Gamma-weak over Lambda grows like sqrt(log s) along the family.
  const NormSpec src{Space::Lambda, {q, kInf, 0.0}, w}, dst{Space::GammaWeak, {q, kInf, 0.0}, w};
  WitnessFamily fam{"banachaq", geometric_params(20), [](double s) { return witness_banachaq(1.0 / s, s); }};
  const auto r = norm_ratio_evidence(src, dst, fam, RunConfig{}, 1.5);
  ASSERT_TRUE(r.evidence);
  EXPECT_GT(r.evidence->ratios.back(), r.evidence->ratios.front());
  EXPECT_GT(r.evidence->growth_exponent, 0.0);
  EXPECT_GT(r.evidence->r2, 0.99);
  const double s = r.evidence->params.back();
  EXPECT_NEAR(r.evidence->ratios.back(), (1.0 + std::log(s)) / std::sqrt(1.0 + 2.0 * std::log(s)), 1e-6);
}

TEST(Evidence, EmptyFamilyRejected) {
  const NormSpec s{Space::Lambda, {1.0, kInf, 0.0}, kOne};
  EXPECT_THROW(norm_ratio_evidence(s, s, WitnessFamily{"empty", {}, nullptr}), std::invalid_argument);
}

TEST(NormChain, DecreasingWeightOrdering) {
  testing::Rng rng(79);
  for (int k = 0; k < 50; ++k) {
    const auto f = testing::random_decreasing_step(rng);
    const auto w = testing::random_decreasing_weight(rng);
    const double gw = gamma_weak_norm(f, w, 1.0).value;
    const double l = lambda_norm(f, w, 1.0).value;
    const auto g = gamma_norm(f, w, 1.0, 1.0);
    EXPECT_LE(gw, l * (1 + 1e-8)) << w.to_json().dump();
    if (!g.diverged) EXPECT_LE(l, g.value * (1 + 1e-8));
  }
}

}  // namespace
}  // namespace lorentz
