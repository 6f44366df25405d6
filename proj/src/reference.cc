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

#include "ldp/reference.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "ldp/estimation.h"
#include "ldp/montecarlo.h"
#include "ldp/risk.h"

namespace ldp {

namespace {

double Choose(uint32_t n, uint32_t r) {
  if (r > n) return 0.0;
  r = std::min(r, n - r);
  double value = 1.0;
  for (uint32_t i = 1; i <= r; ++i) value = value * (n - r + i) / i;
  return value;
}

// Visits every size-d subset of {1..k} in some order (lexicographic, though
// nothing here depends on it).
template <typename Fn>
void ForEachSubset(uint32_t k, uint32_t d, Fn&& fn) {
  std::vector<uint32_t> members(d);
  for (uint32_t i = 0; i < d; ++i) members[i] = i + 1;
  for (;;) {
    fn(members);
    uint32_t i = d;
    while (i > 0 && members[i - 1] == k - (d - i)) --i;
    if (i == 0) return;
    ++members[i - 1];
    for (uint32_t j = i; j < d; ++j) members[j] = members[j - 1] + 1;
  }
}

}  // namespace

double ExactL22ByEnumeration(const MechanismSpec& spec,
                             const ProbabilityVector& p, uint64_t n) {
  if (!spec.is_subset_like()) {
    Fail(ErrorCode::kInvalidArgument, "oracle covers subset mechanisms only");
  }
  if (p.k() != spec.k) Fail(ErrorCode::kDimensionMismatch, "p has wrong k");
  if (n < 1) Fail(ErrorCode::kEmptySample, "n must be >= 1");
  const uint32_t k = spec.k;
  const uint32_t d = spec.d;
  if (Choose(k, d) > 1e5) {
    Fail(ErrorCode::kAlphabetTooLarge, "C(k,d) exceeds 10^5");
  }
  const double e = spec.budget.exp_epsilon();
  // Literal output probabilities: an output containing the input category
  // has mass e^eps / Z, any other output 1 / Z.
  const double z = Choose(k - 1, d - 1) * e + Choose(k - 1, d);

  // q_i = sum over outputs y with i in y of the output's marginal mass
  // m(y) = sum_x p_x Q(y|x).
  std::vector<double> q(k, 0.0);
  ForEachSubset(k, d, [&](const std::vector<uint32_t>& members) {
    double mass = 0.0;
    double member_p = 0.0;
    for (uint32_t m : members) member_p += p[m - 1];
    mass = (member_p * e + (1.0 - member_p)) / z;
    for (uint32_t m : members) q[m - 1] += mass;
  });

  // Variance identity for the affine estimator K T_i/n - B:
  // E l22 = (K^2 / n) sum_i q_i (1 - q_i).
  const double scale =
      ((k - 1.0) * e + (k - 1.0) * (k - static_cast<double>(d)) / d) /
      ((k - static_cast<double>(d)) * (e - 1.0));
  double variance_sum = 0.0;
  for (double qi : q) variance_sum += qi * (1.0 - qi);
  return scale * scale * variance_sum / static_cast<double>(n);
}

uint32_t BruteForceSelectD(uint32_t k, const PrivacyBudget& budget,
                           LossKind loss) {
  if (k < 2 || k > 64) {
    Fail(ErrorCode::kInvalidArgument, "brute-force scan needs 2 <= k <= 64");
  }
  const ProbabilityVector uniform = ProbabilityVector::Uniform(k);
  uint32_t best_d = 1;
  double best = loss == LossKind::kL2Squared
                    ? SubsetL22Risk(k, 1, budget, 1, uniform).value
                    : SubsetL1RiskUniform(k, 1, budget, 1).value;
  for (uint32_t d = 2; d <= k - 1; ++d) {
    const double value = loss == LossKind::kL2Squared
                             ? SubsetL22Risk(k, d, budget, 1, uniform).value
                             : SubsetL1RiskUniform(k, d, budget, 1).value;
    // <= with the same tie tolerance as SelectD, so near-equal neighbors
    // resolve toward larger d on both sides of the comparison.
    if (value <= best * (1.0 + 1e-12)) {
      best_d = d;
      best = std::min(best, value);
    }
  }
  return best_d;
}

ChannelAudit AuditChannel(const MechanismSpec& spec, uint32_t num_random_p,
                          uint64_t seed) {
  const ChannelMatrix channel = BuildChannel(spec);
  if (channel.num_outputs() > 100000) {
    Fail(ErrorCode::kAlphabetTooLarge, "alphabet exceeds 10^5");
  }
  ChannelAudit audit;
  audit.privacy_ratio = PrivacyRatio(channel);
  audit.is_extremal = IsExtremal(channel, spec.budget);

  audit.max_row_sum_deviation = 0.0;
  for (const auto& row : channel.probs) {
    double sum = 0.0;
    for (double v : row) sum += v;
    audit.max_row_sum_deviation =
        std::max(audit.max_row_sum_deviation, std::fabs(sum - 1.0));
  }

  const double lambda = spec.budget.exp_half_epsilon();
  audit.max_marginal_deviation = 0.0;
  Rng rng(seed);
  for (uint32_t trial = 0; trial < num_random_p; ++trial) {
    const ProbabilityVector p = SampleSimplex(spec.k, rng);
    // Enumerated marginal: q_i = sum_y 1{i in y} sum_x p_x Q(y|x).
    std::vector<double> q_enum(spec.k, 0.0);
    for (uint32_t y = 0; y < channel.num_outputs(); ++y) {
      double mass = 0.0;
      for (uint32_t x = 0; x < spec.k; ++x) mass += p[x] * channel.probs[x][y];
      if (spec.kind == MechanismSpec::Kind::kRappor) {
        for (uint32_t i = 0; i < spec.k; ++i) {
          if ((y >> (spec.k - 1 - i)) & 1) q_enum[i] += mass;
        }
      } else {
        // Subset labels are "+"-joined member lists; recover membership from
        // the label to stay independent of enumeration order.
        const std::string& label = channel.output_labels[y];
        uint32_t value = 0;
        for (char c : label) {
          if (c == '+') {
            q_enum[value - 1] += mass;
            value = 0;
          } else {
            value = value * 10 + static_cast<uint32_t>(c - '0');
          }
        }
        if (value != 0) q_enum[value - 1] += mass;
      }
    }
    for (uint32_t i = 0; i < spec.k; ++i) {
      double q_closed;
      if (spec.kind == MechanismSpec::Kind::kRappor) {
        q_closed = (p[i] * (lambda - 1.0) + 1.0) / (1.0 + lambda);
      } else {
        q_closed = MarginalQ(p, spec)[i];
      }
      audit.max_marginal_deviation = std::max(
          audit.max_marginal_deviation, std::fabs(q_closed - q_enum[i]));
    }
  }
  return audit;
}

namespace {

std::string FormatDeviation(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", value);
  return buf;
}

}  // namespace

SuiteReport VerifyChannels(unsigned threads) {
  (void)threads;  // the grid is small enough to run serially
  struct Case {
    MechanismSpec spec;
    uint64_t draws;
  };
  const std::vector<Case> cases = {
      {MechanismSpec::Subset(6, 3, PrivacyBudget(1.0)), 1000000},
      {MechanismSpec::Subset(4, 2, PrivacyBudget::FromExpEpsilon(3.0)),
       1000000},
      {MechanismSpec::Rr(4, PrivacyBudget(2.0)), 1000000},
      {MechanismSpec::Rappor(3, PrivacyBudget::FromExpEpsilon(4.0)), 1000000},
  };
  SuiteReport report;
  report.suite = "channels";
  uint64_t seed = 7001;
  for (const Case& c : cases) {
    const ChannelMatrix channel = BuildChannel(c.spec);
    for (uint32_t input = 1; input <= c.spec.k; ++input) {
      const std::vector<double> empirical =
          EmpiricalChannel(c.spec, input, c.draws, seed++);
      const double tv = TotalVariation(empirical, channel.probs[input - 1]);
      report.max_deviation = std::max(report.max_deviation, tv);
    }
  }
  report.passed = report.max_deviation < 0.005;
  report.detail =
      "grid: subset(6,3) eps=1, subset(4,2) e^eps=3, rr(4) eps=2, "
      "rappor(3) e^eps=4; 10^6 draws per input; max sampler-vs-channel TV "
      "distance " +
      FormatDeviation(report.max_deviation) + " (limit 0.005)";
  return report;
}

SuiteReport VerifyRisks() {
  SuiteReport report;
  report.suite = "risks";
  Rng rng(9102);
  for (uint32_t k = 2; k <= 12; ++k) {
    for (uint32_t d = 1; d <= k - 1; ++d) {
      for (double exp_eps : {1.5, 2.0, 3.0, 5.0}) {
        const PrivacyBudget budget = PrivacyBudget::FromExpEpsilon(exp_eps);
        const MechanismSpec spec = MechanismSpec::Subset(k, d, budget);
        for (int rep = 0; rep < 5; ++rep) {
          const ProbabilityVector p = SampleSimplex(k, rng);
          const double oracle = ExactL22ByEnumeration(spec, p, 1000);
          const double closed = SubsetL22Risk(k, d, budget, 1000, p).value;
          report.max_deviation = std::max(
              report.max_deviation, std::fabs(closed - oracle) / oracle);
        }
      }
    }
  }
  report.passed = report.max_deviation <= 1e-10;
  report.detail =
      "grid: k=2..12, d=1..k-1, e^eps in {1.5,2,3,5}, 5 random p each; max "
      "|closed form - enumeration| / enumeration " +
      FormatDeviation(report.max_deviation) + " (limit 1e-10)";
  return report;
}

SuiteReport VerifySelectD() {
  SuiteReport report;
  report.suite = "select-d";
  uint32_t mismatches = 0;
  for (uint32_t k = 2; k <= 30; ++k) {
    for (int step = 1; step <= 20; ++step) {
      const PrivacyBudget budget(0.25 * step);
      for (LossKind loss : {LossKind::kL2Squared, LossKind::kL1}) {
        if (SelectD(k, budget, loss).d_star !=
            BruteForceSelectD(k, budget, loss)) {
          ++mismatches;
        }
      }
    }
  }
  report.max_deviation = mismatches;
  report.passed = mismatches == 0;
  report.detail =
      "grid: k=2..30, eps in {0.25,0.5,...,5}, both losses; " +
      std::to_string(mismatches) +
      " mismatches between the two-candidate rule and the exhaustive scan";
  return report;
}

SuiteReport VerifyExtremal() {
  SuiteReport report;
  report.suite = "extremal";
  Rng rng(5150);

  // Random eps-private channels: mix of the uniform channel and a random
  // row-stochastic matrix, with mixing weight capped so every column ratio
  // stays within e^eps.
  for (double exp_eps : {2.0, 4.0}) {
    const PrivacyBudget budget = PrivacyBudget::FromExpEpsilon(exp_eps);
    for (int rep = 0; rep < 100; ++rep) {
      const uint32_t k = 3, L = 4;
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
      const ExtremalizeResult result = Extremalize(channel, budget);
      if (!IsExtremal(result.channel, budget)) {
        report.detail = "extremalized channel failed the extremality check";
        return report;
      }
      std::vector<std::vector<double>> pushforward(
          k, std::vector<double>(channel.num_outputs(), 0.0));
      for (uint32_t j = 0; j < result.channel.num_outputs(); ++j) {
        for (uint32_t x = 0; x < k; ++x) {
          pushforward[x][result.output_map[j]] += result.channel.probs[x][j];
        }
      }
      for (uint32_t x = 0; x < k; ++x) {
        for (uint32_t y = 0; y < channel.num_outputs(); ++y) {
          report.max_deviation =
              std::max(report.max_deviation,
                       std::fabs(pushforward[x][y] - channel.probs[x][y]));
        }
      }
    }
  }

  // Decomposition reconstruction over random cube points.
  for (int rep = 0; rep < 1000; ++rep) {
    const uint32_t k = 1 + rng.UniformBelow(8);
    const double exp_eps = 1.5 + 3.0 * rng.UniformDouble();
    const PrivacyBudget budget = PrivacyBudget::FromExpEpsilon(exp_eps);
    std::vector<double> v(k);
    for (double& value : v) {
      value = 1.0 + (exp_eps - 1.0) * rng.UniformDouble();
    }
    const ConvexDecomposition parts = ConvexVertexDecomposition(v, budget);
    double weight_sum = 0.0;
    std::vector<double> rebuilt(k, 0.0);
    for (size_t j = 0; j < parts.weights.size(); ++j) {
      weight_sum += parts.weights[j];
      for (uint32_t c = 0; c < k; ++c) {
        rebuilt[c] += parts.weights[j] * parts.vertices[j][c];
      }
    }
    report.max_deviation =
        std::max(report.max_deviation, std::fabs(weight_sum - 1.0));
    for (uint32_t c = 0; c < k; ++c) {
      report.max_deviation =
          std::max(report.max_deviation, std::fabs(rebuilt[c] - v[c]));
    }
  }

  report.passed = report.max_deviation <= 1e-12;
  report.detail =
      "grid: 200 random private channels (k=3, L=4, e^eps in {2,4}) plus "
      "1000 random cube points (k<=8); max pushforward/reconstruction "
      "deviation " +
      FormatDeviation(report.max_deviation) + " (limit 1e-12)";
  return report;
}

SuiteReport VerifyColumnBound() {
  SuiteReport report;
  report.suite = "lemimp";
  double worst_excess = 0.0;
  for (uint32_t k = 2; k <= 40; k += 2) {
    for (double exp_eps : {1.2, 2.0, 3.0, 5.0, 10.0}) {
      const PrivacyBudget budget = PrivacyBudget::FromExpEpsilon(exp_eps);
      const double bound = ExtremalColumnBound(k, budget);
      for (uint32_t t = 1; t <= k / 2; ++t) {
        const double objective = ExtremalColumnObjective(t, k, budget);
        worst_excess = std::max(worst_excess, objective / bound - 1.0);
      }
    }
  }
  report.max_deviation = worst_excess;
  // The bound is attained exactly at t = k/2 when e^eps < 3, so allow
  // rounding noise of 1e-12 relative.
  report.passed = worst_excess <= 1e-12;
  report.detail =
      "grid: k in {2,4,...,40}, e^eps in {1.2,2,3,5,10}, t=1..k/2; max "
      "(objective/bound - 1) over the sweep " +
      FormatDeviation(worst_excess) + " (limit 1e-12)";
  return report;
}

}  // namespace ldp
