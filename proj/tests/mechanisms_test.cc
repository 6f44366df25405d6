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

#include "ldp/mechanisms.h"

#include <cmath>
#include <functional>
#include <set>

#include "gtest/gtest.h"

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

MechanismSpec Subset(uint32_t k, uint32_t d, double exp_eps) {
  return MechanismSpec::Subset(k, d, PrivacyBudget::FromExpEpsilon(exp_eps));
}

TEST(MechanismSpecTest, RejectsInvalidSubsetSize) {
  ExpectError(ErrorCode::kInvalidD, [] { Subset(4, 0, 3.0); });
  // d = k is a point mass on the all-ones output, not a mechanism here.
  ExpectError(ErrorCode::kInvalidD, [] { Subset(4, 4, 3.0); });
}

TEST(SubsetChannelProbTest, ContainingAndMissingOutputs) {
  // k=4, d=2: an output containing the input has mass e^eps/(3 e^eps + 3),
  // any other output 1/(3 e^eps + 3).
  for (double exp_eps : {2.0, 3.0, 7.5}) {
    const MechanismSpec spec = Subset(4, 2, exp_eps);
    const SubsetObservation with = SubsetObservation::Create(4, {1, 2});
    const SubsetObservation without = SubsetObservation::Create(4, {2, 3});
    EXPECT_NEAR(SubsetChannelProb(spec, 1, with),
                exp_eps / (3 * exp_eps + 3), 1e-15);
    EXPECT_NEAR(SubsetChannelProb(spec, 1, without), 1 / (3 * exp_eps + 3),
                1e-15);
  }
}

TEST(SubsetChannelProbTest, BinaryRandomizedResponse) {
  const double exp_eps = 3.0;
  const MechanismSpec spec = Subset(2, 1, exp_eps);
  const SubsetObservation yes = SubsetObservation::Create(2, {1});
  const SubsetObservation no = SubsetObservation::Create(2, {2});
  EXPECT_NEAR(SubsetChannelProb(spec, 1, yes), exp_eps / (exp_eps + 1), 1e-15);
  EXPECT_NEAR(SubsetChannelProb(spec, 1, no), 1 / (exp_eps + 1), 1e-15);
  EXPECT_NEAR(SubsetChannelProb(spec, 1, yes) + SubsetChannelProb(spec, 1, no),
              1.0, 1e-15);
}

TEST(SubsetChannelProbTest, RowNormalizesByEnumeration) {
  const MechanismSpec spec = Subset(4, 2, 3.0);
  const std::vector<std::vector<uint32_t>> all = {{1, 2}, {1, 3}, {1, 4},
                                                  {2, 3}, {2, 4}, {3, 4}};
  double sum = 0.0;
  for (const auto& members : all) {
    sum += SubsetChannelProb(spec, 1, SubsetObservation::Create(4, members));
  }
  EXPECT_NEAR(sum, 1.0, 1e-14);
}

TEST(SubsetChannelProbTest, Errors) {
  const MechanismSpec spec = Subset(4, 2, 3.0);
  ExpectError(ErrorCode::kWrongSubsetSize, [&] {
    SubsetChannelProb(spec, 1, SubsetObservation::Create(4, {1}));
  });
  ExpectError(ErrorCode::kCategoryOutOfRange, [&] {
    SubsetChannelProb(spec, 5, SubsetObservation::Create(4, {1, 2}));
  });
  ExpectError(ErrorCode::kCategoryOutOfRange,
              [] { SubsetObservation::Create(4, {1, 5}); });
  ExpectError(ErrorCode::kInvalidObservation,
              [] { SubsetObservation::Create(4, {2, 2}); });
}

TEST(SubsetChannelProbTest, LogSpacePathNormalizes) {
  // k > 50 uses log-gamma binomials; the two branch masses times the exact
  // subset counts must still add to 1.
  const uint32_t k = 60, d = 10;
  const MechanismSpec spec = Subset(k, d, 4.0);
  std::vector<uint32_t> with(d), without(d);
  for (uint32_t i = 0; i < d; ++i) with[i] = i + 1;        // contains 1
  for (uint32_t i = 0; i < d; ++i) without[i] = i + 2;     // misses 1
  const double p_in =
      SubsetChannelProb(spec, 1, SubsetObservation::Create(k, with));
  const double p_out =
      SubsetChannelProb(spec, 1, SubsetObservation::Create(k, without));
  double c_in = 1.0, c_out = 1.0;  // C(59,9), C(59,10): exact in double
  for (uint32_t i = 1; i <= d - 1; ++i) c_in = c_in * (k - d + i) / i;
  for (uint32_t i = 1; i <= d; ++i) c_out = c_out * (k - 1 - d + i) / i;
  EXPECT_NEAR(c_in * p_in + c_out * p_out, 1.0, 1e-9);
}

TEST(SubsetSamplerTest, IncludesTruthAtExpectedRate) {
  // d e^eps / (d e^eps + k - d) = 6/8 at k=4, d=2, e^eps=3.
  const MechanismSpec spec = Subset(4, 2, 3.0);
  SubsetSampler sampler(spec);
  Rng rng(99);
  std::vector<uint32_t> members;
  const int draws = 100000;
  int included = 0;
  for (int i = 0; i < draws; ++i) {
    sampler.Sample(1, rng, members);
    included += std::binary_search(members.begin(), members.end(), 1u);
  }
  const double expected = 0.75;
  const double sigma = std::sqrt(expected * (1 - expected) / draws);
  EXPECT_NEAR(included / static_cast<double>(draws), expected, 3 * sigma);
}

TEST(SubsetSamplerTest, AlwaysReturnsDistinctInRangeMembers) {
  Rng rng(123);
  for (uint32_t k = 2; k <= 7; ++k) {
    for (uint32_t d = 1; d <= k - 1; ++d) {
      const MechanismSpec spec = Subset(k, d, 2.5);
      SubsetSampler sampler(spec);
      std::vector<uint32_t> members;
      for (int rep = 0; rep < 200; ++rep) {
        const uint32_t input = 1 + rng.UniformBelow(k);
        sampler.Sample(input, rng, members);
        ASSERT_EQ(members.size(), d);
        const std::set<uint32_t> unique(members.begin(), members.end());
        EXPECT_EQ(unique.size(), d);
        for (uint32_t m : members) {
          EXPECT_GE(m, 1u);
          EXPECT_LE(m, k);
        }
        EXPECT_TRUE(std::is_sorted(members.begin(), members.end()));
      }
    }
  }
}

TEST(RapporChannelProbTest, AllBitsKept) {
  const MechanismSpec spec =
      MechanismSpec::Rappor(4, PrivacyBudget::FromExpEpsilon(4.0));
  BitObservation obs;
  obs.bits = {0, 0, 1, 0};
  const double keep = 2.0 / 3.0;  // e^(eps/2)/(1+e^(eps/2)) with e^(eps/2)=2
  EXPECT_NEAR(RapporChannelProb(spec, 3, obs), std::pow(keep, 4), 1e-15);
}

TEST(RapporChannelProbTest, TwoKeptBits) {
  const MechanismSpec spec =
      MechanismSpec::Rappor(2, PrivacyBudget::FromExpEpsilon(4.0));
  BitObservation obs;
  obs.bits = {1, 0};
  EXPECT_NEAR(RapporChannelProb(spec, 1, obs), 4.0 / 9.0, 1e-15);
}

TEST(RapporChannelProbTest, NormalizesOverAllPatterns) {
  const MechanismSpec spec =
      MechanismSpec::Rappor(3, PrivacyBudget::FromExpEpsilon(4.0));
  double sum = 0.0;
  for (uint32_t m = 0; m < 8; ++m) {
    BitObservation obs;
    obs.bits = {static_cast<uint8_t>((m >> 2) & 1),
                static_cast<uint8_t>((m >> 1) & 1),
                static_cast<uint8_t>(m & 1)};
    sum += RapporChannelProb(spec, 1, obs);
  }
  EXPECT_NEAR(sum, 1.0, 1e-14);
}

TEST(RapporSamplerTest, BitMarginals) {
  const MechanismSpec spec =
      MechanismSpec::Rappor(5, PrivacyBudget::FromExpEpsilon(4.0));
  RapporSampler sampler(spec);
  Rng rng(7);
  std::vector<uint8_t> bits;
  const int draws = 100000;
  int own_bit = 0, other_bit = 0;
  for (int i = 0; i < draws; ++i) {
    sampler.Sample(2, rng, bits);
    own_bit += bits[1];
    other_bit += bits[3];
  }
  const double keep = 2.0 / 3.0;
  const double sigma = std::sqrt(keep * (1 - keep) / draws);
  EXPECT_NEAR(own_bit / static_cast<double>(draws), keep, 3 * sigma);
  EXPECT_NEAR(other_bit / static_cast<double>(draws), 1 - keep, 3 * sigma);
}

TEST(RapporSamplerTest, NearNoiselessMatchProbability) {
  // e^(eps/2) = 100: the output equals the exact one-hot encoding with
  // probability (100/101)^k.
  const uint32_t k = 5;
  const MechanismSpec spec =
      MechanismSpec::Rappor(k, PrivacyBudget::FromExpEpsilon(10000.0));
  RapporSampler sampler(spec);
  Rng rng(21);
  std::vector<uint8_t> bits;
  const int draws = 100000;
  int exact = 0;
  for (int i = 0; i < draws; ++i) {
    sampler.Sample(1, rng, bits);
    bool match = bits[0] == 1;
    for (uint32_t j = 1; j < k; ++j) match = match && bits[j] == 0;
    exact += match;
  }
  const double expected = std::pow(100.0 / 101.0, k);
  const double sigma = std::sqrt(expected * (1 - expected) / draws);
  EXPECT_NEAR(exact / static_cast<double>(draws), expected, 3 * sigma);
}

TEST(BuildChannelTest, SubsetShapeAndRowSums) {
  const ChannelMatrix channel = BuildChannel(Subset(4, 2, 3.0));
  EXPECT_EQ(channel.k, 4u);
  EXPECT_EQ(channel.num_outputs(), 6u);
  EXPECT_EQ(channel.output_labels.front(), "1+2");
  EXPECT_EQ(channel.output_labels.back(), "3+4");
  for (const auto& row : channel.probs) {
    double sum = 0.0;
    for (double v : row) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(BuildChannelTest, RrDiagonal) {
  const double exp_eps = 5.0;
  const ChannelMatrix channel =
      BuildChannel(MechanismSpec::Rr(3, PrivacyBudget::FromExpEpsilon(exp_eps)));
  EXPECT_EQ(channel.num_outputs(), 3u);
  for (uint32_t x = 0; x < 3; ++x) {
    for (uint32_t y = 0; y < 3; ++y) {
      const double expected =
          x == y ? exp_eps / (exp_eps + 2) : 1 / (exp_eps + 2);
      EXPECT_NEAR(channel.probs[x][y], expected, 1e-15);
    }
  }
}

TEST(BuildChannelTest, EntriesMatchProbFunction) {
  const MechanismSpec spec = Subset(5, 2, 2.0);
  const ChannelMatrix channel = BuildChannel(spec);
  uint32_t index = 0;
  // Walk the same lexicographic order and compare entry by entry.
  const std::vector<std::vector<uint32_t>> all = {
      {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3},
      {2, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 5}};
  for (const auto& m : all) {
    const SubsetObservation obs = SubsetObservation::Create(5, m);
    for (uint32_t x = 1; x <= 5; ++x) {
      EXPECT_NEAR(channel.probs[x - 1][index], SubsetChannelProb(spec, x, obs),
                  1e-14);
    }
    ++index;
  }
}

TEST(BuildChannelTest, RejectsHugeAlphabet) {
  ExpectError(ErrorCode::kAlphabetTooLarge,
              [] { BuildChannel(Subset(40, 20, 2.0)); });
  ExpectError(ErrorCode::kAlphabetTooLarge, [] {
    BuildChannel(MechanismSpec::Rappor(25, PrivacyBudget(1.0)));
  });
}

TEST(SubsetRankTest, MatchesEnumerationOrder) {
  for (uint32_t k : {4u, 6u}) {
    for (uint32_t d = 1; d <= k - 1; ++d) {
      const ChannelMatrix channel = BuildChannel(Subset(k, d, 2.0));
      for (uint32_t index = 0; index < channel.num_outputs(); ++index) {
        // Parse the label back into members.
        std::vector<uint32_t> members;
        uint32_t value = 0;
        for (char c : channel.output_labels[index]) {
          if (c == '+') {
            members.push_back(value);
            value = 0;
          } else {
            value = value * 10 + (c - '0');
          }
        }
        members.push_back(value);
        EXPECT_EQ(SubsetRank(k, members), index);
      }
    }
  }
}

TEST(PrivacyRatioTest, UniformChannelIsOne) {
  const ChannelMatrix channel =
      ChannelFromProbs({{0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25}});
  EXPECT_DOUBLE_EQ(PrivacyRatio(channel), 1.0);
}

TEST(PrivacyRatioTest, SubsetChannelIsTight) {
  for (uint32_t k = 2; k <= 8; ++k) {
    for (uint32_t d = 1; d <= k - 1; ++d) {
      for (double exp_eps : {1.5, 3.0, 6.0}) {
        const ChannelMatrix channel = BuildChannel(Subset(k, d, exp_eps));
        EXPECT_NEAR(PrivacyRatio(channel) / exp_eps, 1.0, 1e-12);
      }
    }
  }
}

TEST(PrivacyRatioTest, DeterministicChannelIsInfinite) {
  const ChannelMatrix identity =
      ChannelFromProbs({{1.0, 0.0}, {0.0, 1.0}});
  EXPECT_TRUE(std::isinf(PrivacyRatio(identity)));
  EXPECT_FALSE(CheckLdp(identity, PrivacyBudget(10.0)));
}

TEST(CheckLdpTest, BuiltChannelsSatisfyTheirBudget) {
  const PrivacyBudget budget(1.3);
  EXPECT_TRUE(CheckLdp(BuildChannel(MechanismSpec::Subset(5, 2, budget)),
                       budget));
  EXPECT_TRUE(CheckLdp(BuildChannel(MechanismSpec::Rr(5, budget)), budget));
  EXPECT_TRUE(CheckLdp(BuildChannel(MechanismSpec::Rappor(5, budget)),
                       budget));
  const ChannelMatrix uniform =
      ChannelFromProbs({{0.5, 0.5}, {0.5, 0.5}});
  EXPECT_TRUE(CheckLdp(uniform, PrivacyBudget(0.01)));
}

TEST(MarginalConsistencyTest, OutputMassSumsToOne) {
  Rng rng(314);
  for (const MechanismSpec& spec :
       {Subset(5, 2, 3.0), Subset(4, 3, 1.5),
        MechanismSpec::Rappor(4, PrivacyBudget(1.0))}) {
    const ChannelMatrix channel = BuildChannel(spec);
    const ProbabilityVector p = SampleSimplex(spec.k, rng);
    double total = 0.0;
    for (uint32_t y = 0; y < channel.num_outputs(); ++y) {
      for (uint32_t x = 0; x < spec.k; ++x) {
        total += p[x] * channel.probs[x][y];
      }
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(ConvexDecompositionTest, VertexInputIsSingleTerm) {
  const PrivacyBudget budget = PrivacyBudget::FromExpEpsilon(3.0);
  const ConvexDecomposition parts =
      ConvexVertexDecomposition({1.0, 3.0, 3.0}, budget);
  ASSERT_EQ(parts.weights.size(), 1u);
  EXPECT_DOUBLE_EQ(parts.weights[0], 1.0);
  EXPECT_EQ(parts.vertices[0], (std::vector<double>{1.0, 3.0, 3.0}));
}

TEST(ConvexDecompositionTest, ScalarMidpoint) {
  // v = (2) in [1,3] splits evenly between the endpoints.
  const PrivacyBudget budget = PrivacyBudget::FromExpEpsilon(3.0);
  const ConvexDecomposition parts = ConvexVertexDecomposition({2.0}, budget);
  ASSERT_EQ(parts.weights.size(), 2u);
  EXPECT_DOUBLE_EQ(parts.weights[0], 0.5);
  EXPECT_DOUBLE_EQ(parts.weights[1], 0.5);
  EXPECT_DOUBLE_EQ(parts.vertices[0][0], 1.0);
  EXPECT_DOUBLE_EQ(parts.vertices[1][0], 3.0);
}

TEST(ConvexDecompositionTest, ReconstructsRandomCubePoints) {
  Rng rng(2718);
  for (int rep = 0; rep < 1000; ++rep) {
    const uint32_t k = 1 + rng.UniformBelow(8);
    const double exp_eps = 1.2 + 4.0 * rng.UniformDouble();
    const PrivacyBudget budget = PrivacyBudget::FromExpEpsilon(exp_eps);
    std::vector<double> v(k);
    for (double& value : v) {
      value = 1.0 + (exp_eps - 1.0) * rng.UniformDouble();
    }
    const ConvexDecomposition parts = ConvexVertexDecomposition(v, budget);
    EXPECT_LE(parts.weights.size(), size_t{1} << k);
    double weight_sum = 0.0;
    std::vector<double> rebuilt(k, 0.0);
    for (size_t j = 0; j < parts.weights.size(); ++j) {
      EXPECT_GT(parts.weights[j], 0.0);
      weight_sum += parts.weights[j];
      for (uint32_t c = 0; c < k; ++c) {
        rebuilt[c] += parts.weights[j] * parts.vertices[j][c];
      }
    }
    EXPECT_NEAR(weight_sum, 1.0, 1e-12);
    for (uint32_t c = 0; c < k; ++c) EXPECT_NEAR(rebuilt[c], v[c], 1e-12);
  }
}

TEST(ConvexDecompositionTest, RejectsPointsOutsideCube) {
  const PrivacyBudget budget = PrivacyBudget::FromExpEpsilon(3.0);
  ExpectError(ErrorCode::kEntryOutOfCube,
              [&] { ConvexVertexDecomposition({0.5}, budget); });
  ExpectError(ErrorCode::kEntryOutOfCube,
              [&] { ConvexVertexDecomposition({3.5}, budget); });
}

TEST(IsExtremalTest, SubsetChannelIsExtremal) {
  const PrivacyBudget budget = PrivacyBudget::FromExpEpsilon(2.0);
  EXPECT_TRUE(
      IsExtremal(BuildChannel(MechanismSpec::Subset(5, 2, budget)), budget));
}

TEST(IsExtremalTest, RapporChannelIsExtremal) {
  // Enumerated outcome at k=3, e^(eps/2)=2: within any output column the
  // conditional probabilities take at most the two values L^(m) and
  // L^(m+2), so every ratio to the column minimum is 1 or e^eps; the
  // intermediate per-bit ratio e^(eps/2) never appears column-wise.
  const PrivacyBudget budget = PrivacyBudget::FromExpEpsilon(4.0);
  EXPECT_TRUE(
      IsExtremal(BuildChannel(MechanismSpec::Rappor(3, budget)), budget));
}

TEST(IsExtremalTest, InteriorRatioFails) {
  // Column ratios 2 and 1.5 under e^eps = 3.
  const ChannelMatrix channel =
      ChannelFromProbs({{0.5, 0.5}, {0.25, 0.75}});
  EXPECT_FALSE(IsExtremal(channel, PrivacyBudget::FromExpEpsilon(3.0)));
}

TEST(ExtremalizeTest, FixedPointOnExtremalChannel) {
  const PrivacyBudget budget = PrivacyBudget::FromExpEpsilon(3.0);
  const ChannelMatrix channel =
      BuildChannel(MechanismSpec::Subset(4, 2, budget));
  const ExtremalizeResult result = Extremalize(channel, budget);
  ASSERT_EQ(result.channel.num_outputs(), channel.num_outputs());
  for (uint32_t j = 0; j < channel.num_outputs(); ++j) {
    EXPECT_EQ(result.output_map[j], j);
    for (uint32_t x = 0; x < channel.k; ++x) {
      EXPECT_NEAR(result.channel.probs[x][j], channel.probs[x][j], 1e-14);
    }
  }
}

TEST(ExtremalizeTest, SplitsInteriorColumnWithHalfWeights) {
  // Column (0.2, 0.4) has ratio 2 under e^eps = 3; its normalized form
  // (1, 2) splits evenly, so the refined outputs carry masses
  // 0.2*(1/2)*(1,1) and 0.2*(1/2)*(1,3).
  const PrivacyBudget budget = PrivacyBudget::FromExpEpsilon(3.0);
  const ChannelMatrix channel =
      ChannelFromProbs({{0.2, 0.8}, {0.4, 0.6}});
  const ExtremalizeResult result = Extremalize(channel, budget);
  EXPECT_TRUE(IsExtremal(result.channel, budget));

  std::vector<std::vector<double>> refined;
  for (uint32_t j = 0; j < result.channel.num_outputs(); ++j) {
    if (result.output_map[j] == 0) {
      refined.push_back(
          {result.channel.probs[0][j], result.channel.probs[1][j]});
    }
  }
  ASSERT_EQ(refined.size(), 2u);
  EXPECT_NEAR(refined[0][0], 0.1, 1e-15);
  EXPECT_NEAR(refined[0][1], 0.1, 1e-15);
  EXPECT_NEAR(refined[1][0], 0.1, 1e-15);
  EXPECT_NEAR(refined[1][1], 0.3, 1e-15);
}

TEST(ExtremalizeTest, RandomPrivateChannels) {
  Rng rng(5050);
  const uint32_t k = 3, L = 4;
  for (double exp_eps : {2.0, 4.0}) {
    const PrivacyBudget budget = PrivacyBudget::FromExpEpsilon(exp_eps);
    for (int rep = 0; rep < 50; ++rep) {
      const double gamma =
          rng.UniformDouble() * (exp_eps - 1.0) / (L + exp_eps - 1.0);
      std::vector<std::vector<double>> probs(k, std::vector<double>(L));
      for (uint32_t x = 0; x < k; ++x) {
        const ProbabilityVector row = SampleSimplex(L, rng);
        for (uint32_t y = 0; y < L; ++y) {
          probs[x][y] = (1.0 - gamma) / L + gamma * row[y];
        }
      }
      const ChannelMatrix channel = ChannelFromProbs(std::move(probs));
      ASSERT_TRUE(CheckLdp(channel, budget));
      const ExtremalizeResult result = Extremalize(channel, budget);
      EXPECT_TRUE(IsExtremal(result.channel, budget));
      std::vector<std::vector<double>> pushforward(
          k, std::vector<double>(L, 0.0));
      for (uint32_t j = 0; j < result.channel.num_outputs(); ++j) {
        for (uint32_t x = 0; x < k; ++x) {
          pushforward[x][result.output_map[j]] += result.channel.probs[x][j];
        }
      }
      for (uint32_t x = 0; x < k; ++x) {
        for (uint32_t y = 0; y < L; ++y) {
          EXPECT_NEAR(pushforward[x][y], channel.probs[x][y], 1e-12);
        }
      }
    }
  }
}

TEST(ExtremalizeTest, RejectsNonPrivateChannel) {
  const ChannelMatrix identity =
      ChannelFromProbs({{1.0, 0.0}, {0.0, 1.0}});
  ExpectError(ErrorCode::kNotPrivate,
              [&] { Extremalize(identity, PrivacyBudget(5.0)); });
}

}  // namespace
}  // namespace ldp
