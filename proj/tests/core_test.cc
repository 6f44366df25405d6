// Copyright 2026 The ldpest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldp/core.h"

#include <cmath>
#include <functional>

#include "gtest/gtest.h"
#include "ldp/rng.h"

namespace ldp {
namespace {

void ExpectError(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
    FAIL() << "expected an Error";
  } catch (const Error& e) {
    EXPECT_EQ(static_cast<int>(e.code()), static_cast<int>(code)) << e.what();
  }
}

TEST(ProbabilityVectorTest, AcceptsSymmetricPair) {
  const ProbabilityVector p = ProbabilityVector::Validate({0.5, 0.5});
  EXPECT_EQ(p.k(), 2u);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
}

TEST(ProbabilityVectorTest, RejectsWrongSum) {
  ExpectError(ErrorCode::kSumNotOne,
              [] { ProbabilityVector::Validate({0.5, 0.6}); });
}

TEST(ProbabilityVectorTest, AcceptsUniformTen) {
  const ProbabilityVector p = ProbabilityVector::Uniform(10);
  double sum = 0.0;
  for (double v : p.entries()) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(ProbabilityVectorTest, RejectsNegativeEntry) {
  ExpectError(ErrorCode::kNegativeEntry,
              [] { ProbabilityVector::Validate({1.2, -0.2}); });
}

TEST(ProbabilityVectorTest, RejectsTooFewCategories) {
  ExpectError(ErrorCode::kTooFewCategories,
              [] { ProbabilityVector::Validate({1.0}); });
}

TEST(ProbabilityVectorTest, RenormalizesRoundingNoise) {
  // Within the 1e-9 input tolerance; the stored entries must not carry the
  // noise forward.
  const ProbabilityVector p =
      ProbabilityVector::Validate({0.25 + 4e-10, 0.25, 0.25, 0.25});
  double sum = 0.0;
  for (double v : p.entries()) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(ProbabilityVectorTest, RejectsNoiseBeyondTolerance) {
  ExpectError(ErrorCode::kSumNotOne, [] {
    ProbabilityVector::Validate({0.25 + 1e-7, 0.25, 0.25, 0.25});
  });
}

TEST(LossTest, ZeroAtTruth) {
  const ProbabilityVector p = ProbabilityVector::Validate({0.3, 0.7});
  const EstimateVector e = EstimateVector::FromEntries({0.3, 0.7});
  EXPECT_DOUBLE_EQ(Loss(LossKind::kL2Squared, e, p), 0.0);
  EXPECT_DOUBLE_EQ(Loss(LossKind::kL1, e, p), 0.0);
}

TEST(LossTest, L1TotalDisplacement) {
  const ProbabilityVector p = ProbabilityVector::Validate({0.0, 1.0});
  const EstimateVector e = EstimateVector::FromEntries({1.0, 0.0});
  EXPECT_DOUBLE_EQ(Loss(LossKind::kL1, e, p), 2.0);
}

TEST(LossTest, L22WorkedExample) {
  const ProbabilityVector p = ProbabilityVector::Validate({0.5, 0.5});
  const EstimateVector e = EstimateVector::FromEntries({0.6, 0.4});
  EXPECT_NEAR(Loss(LossKind::kL2Squared, e, p), 0.02, 1e-15);
}

TEST(LossTest, RejectsDimensionMismatch) {
  const ProbabilityVector p = ProbabilityVector::Uniform(3);
  const EstimateVector e = EstimateVector::FromEntries({0.5, 0.5});
  ExpectError(ErrorCode::kDimensionMismatch,
              [&] { Loss(LossKind::kL1, e, p); });
}

TEST(LossTest, PositiveUnlessEqualAndBoundedOnCube) {
  Rng rng(11);
  for (int rep = 0; rep < 1000; ++rep) {
    const uint32_t k = 2 + rng.UniformBelow(6);
    const ProbabilityVector p = SampleSimplex(k, rng);
    std::vector<double> entries(k);
    for (double& v : entries) v = rng.UniformDouble();
    const EstimateVector e = EstimateVector::FromEntries(entries);
    const double l1 = Loss(LossKind::kL1, e, p);
    const double l22 = Loss(LossKind::kL2Squared, e, p);
    EXPECT_GT(l1, 0.0);
    EXPECT_GT(l22, 0.0);
    EXPECT_LE(l1, static_cast<double>(k));
    EXPECT_LE(l22, static_cast<double>(k));
  }
}

TEST(ClipTest, WorkedExample) {
  const EstimateVector clipped =
      ClipToUnitCube(EstimateVector::FromEntries({-0.1, 0.6, 1.2}));
  EXPECT_DOUBLE_EQ(clipped[0], 0.0);
  EXPECT_DOUBLE_EQ(clipped[1], 0.6);
  EXPECT_DOUBLE_EQ(clipped[2], 1.0);
}

TEST(ClipTest, IdentityInsideCube) {
  const EstimateVector e = EstimateVector::FromEntries({0.0, 0.4, 1.0});
  const EstimateVector clipped = ClipToUnitCube(e);
  for (uint32_t i = 0; i < e.k(); ++i) EXPECT_DOUBLE_EQ(clipped[i], e[i]);
}

TEST(ClipTest, NeverIncreasesLossAndIdempotent) {
  Rng rng(42);
  for (int rep = 0; rep < 1000; ++rep) {
    const uint32_t k = 2 + rng.UniformBelow(6);
    const ProbabilityVector p = SampleSimplex(k, rng);
    std::vector<double> entries(k);
    for (double& v : entries) v = -1.0 + 3.0 * rng.UniformDouble();
    const EstimateVector e = EstimateVector::FromEntries(entries);
    const EstimateVector clipped = ClipToUnitCube(e);
    EXPECT_LE(Loss(LossKind::kL1, clipped, p), Loss(LossKind::kL1, e, p));
    EXPECT_LE(Loss(LossKind::kL2Squared, clipped, p),
              Loss(LossKind::kL2Squared, e, p));
    const EstimateVector twice = ClipToUnitCube(clipped);
    for (uint32_t i = 0; i < k; ++i) EXPECT_EQ(twice[i], clipped[i]);
  }
}

TEST(PrivacyBudgetTest, CachesExponential) {
  const PrivacyBudget budget(1.0);
  EXPECT_DOUBLE_EQ(budget.exp_epsilon(), std::exp(1.0));
}

TEST(PrivacyBudgetTest, ExactHalfLevelFromExpEpsilon) {
  const PrivacyBudget budget = PrivacyBudget::FromExpEpsilon(4.0);
  EXPECT_EQ(budget.exp_half_epsilon(), 2.0);
}

TEST(PrivacyBudgetTest, RejectsNonPositiveEpsilon) {
  ExpectError(ErrorCode::kDegenerateBudget, [] { PrivacyBudget(0.0); });
  ExpectError(ErrorCode::kDegenerateBudget, [] { PrivacyBudget(-1.0); });
  ExpectError(ErrorCode::kDegenerateBudget,
              [] { PrivacyBudget::FromExpEpsilon(1.0); });
}

TEST(SampleSimplexTest, ProducesValidDistributions) {
  Rng rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    const ProbabilityVector p = SampleSimplex(5, rng);
    double sum = 0.0;
    for (double v : p.entries()) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace ldp
