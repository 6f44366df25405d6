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

#include "ldp/montecarlo.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <thread>

#include "ldp/estimation.h"

namespace ldp {

namespace {

// Inverse-CDF raw-sample generator over precomputed cumulative sums.
class CategorySampler {
 public:
  explicit CategorySampler(const ProbabilityVector& p) {
    cumulative_.reserve(p.k());
    double acc = 0.0;
    for (double v : p.entries()) {
      acc += v;
      cumulative_.push_back(acc);
    }
    cumulative_.back() = 1.0;
  }

  uint32_t Sample(Rng& rng) const {
    const double u = rng.UniformDouble();
    const auto it =
        std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<uint32_t>(it - cumulative_.begin()) + 1;
  }

 private:
  std::vector<double> cumulative_;
};

LossStats Summarize(const std::vector<TrialLosses>& losses,
                    double TrialLosses::*member) {
  LossStats stats;
  stats.trials = losses.size();
  double sum = 0.0;
  for (const TrialLosses& t : losses) sum += t.*member;
  stats.mean = sum / static_cast<double>(losses.size());
  if (losses.size() < 2) {
    stats.stderr_of_mean = std::numeric_limits<double>::quiet_NaN();
    return stats;
  }
  double sq = 0.0;
  for (const TrialLosses& t : losses) {
    const double diff = t.*member - stats.mean;
    sq += diff * diff;
  }
  const double variance = sq / static_cast<double>(losses.size() - 1);
  stats.stderr_of_mean =
      std::sqrt(variance / static_cast<double>(losses.size()));
  return stats;
}

}  // namespace

TrialLosses RunTrial(const SimulationPlan& plan, uint64_t trial_index) {
  if (plan.p.k() != plan.spec.k) {
    Fail(ErrorCode::kDimensionMismatch, "plan.p has wrong k");
  }
  if (plan.n < 1) Fail(ErrorCode::kEmptySample, "plan.n must be >= 1");
  Rng rng = Rng::Split(plan.seed, trial_index);
  const CategorySampler raw(plan.p);
  CountVector counts(plan.spec.k);
  const PreparedEstimator estimator(plan.spec);

  if (plan.spec.kind == MechanismSpec::Kind::kRappor) {
    RapporSampler sampler(plan.spec);
    BitObservation obs;
    for (uint64_t i = 0; i < plan.n; ++i) {
      sampler.Sample(raw.Sample(rng), rng, obs.bits);
      counts.Add(obs);
    }
  } else {
    SubsetSampler sampler(plan.spec);
    std::vector<uint32_t> members;
    for (uint64_t i = 0; i < plan.n; ++i) {
      sampler.Sample(raw.Sample(rng), rng, members);
      counts.AddMembers(members);
    }
#ifndef NDEBUG
    uint64_t total = 0;
    for (uint64_t c : counts.counts()) total += c;
    assert(total == counts.n() * plan.spec.d);
#endif
  }

  const EstimateVector estimate = estimator.Estimate(counts);
  TrialLosses losses;
  if (plan.want_l1) losses.l1 = Loss(LossKind::kL1, estimate, plan.p);
  if (plan.want_l22) {
    losses.l22 = Loss(LossKind::kL2Squared, estimate, plan.p);
  }
  return losses;
}

SimulationResult Simulate(const SimulationPlan& plan, unsigned threads) {
  if (plan.trials < 1) Fail(ErrorCode::kEmptySample, "trials must be >= 1");
  std::vector<TrialLosses> losses(plan.trials);

  unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = static_cast<unsigned>(
      std::min<uint64_t>(workers, plan.trials));

  if (workers == 1) {
    for (uint64_t t = 0; t < plan.trials; ++t) losses[t] = RunTrial(plan, t);
  } else {
    // Static contiguous partition; each trial owns its stream, so the
    // schedule cannot affect the values, only who computes them.
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const uint64_t chunk = (plan.trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const uint64_t begin = w * chunk;
      const uint64_t end = std::min<uint64_t>(begin + chunk, plan.trials);
      if (begin >= end) break;
      pool.emplace_back([&plan, &losses, begin, end] {
        for (uint64_t t = begin; t < end; ++t) losses[t] = RunTrial(plan, t);
      });
    }
    for (std::thread& worker : pool) worker.join();
  }

  SimulationResult result;
  if (plan.want_l1) result.l1 = Summarize(losses, &TrialLosses::l1);
  if (plan.want_l22) result.l22 = Summarize(losses, &TrialLosses::l22);
  if (plan.keep_per_trial) result.per_trial = std::move(losses);
  return result;
}

std::vector<double> EmpiricalChannel(const MechanismSpec& spec, uint32_t input,
                                     uint64_t draws, uint64_t seed) {
  if (draws == 0) Fail(ErrorCode::kEmptySample, "draws must be >= 1");
  constexpr uint64_t kMaxOutputs = 10000;

  Rng rng(seed);
  std::vector<uint64_t> tallies;
  if (spec.kind == MechanismSpec::Kind::kRappor) {
    if (spec.k >= 14 || (uint64_t{1} << spec.k) > kMaxOutputs) {
      Fail(ErrorCode::kAlphabetTooLarge, "2^k exceeds 10^4");
    }
    tallies.assign(uint64_t{1} << spec.k, 0);
    RapporSampler sampler(spec);
    BitObservation obs;
    for (uint64_t i = 0; i < draws; ++i) {
      sampler.Sample(input, rng, obs.bits);
      ++tallies[BitPatternRank(obs)];
    }
  } else {
    // Gate on C(k,d) without materializing the channel.
    double count = 1.0;
    for (uint32_t i = 1; i <= spec.d; ++i) {
      count = count * (spec.k - spec.d + i) / i;
      if (count > static_cast<double>(kMaxOutputs) + 0.5) {
        Fail(ErrorCode::kAlphabetTooLarge, "C(k,d) exceeds 10^4");
      }
    }
    tallies.assign(static_cast<size_t>(count + 0.5), 0);
    SubsetSampler sampler(spec);
    std::vector<uint32_t> members;
    for (uint64_t i = 0; i < draws; ++i) {
      sampler.Sample(input, rng, members);
      ++tallies[SubsetRank(spec.k, members)];
    }
  }

  std::vector<double> frequencies(tallies.size());
  for (size_t i = 0; i < tallies.size(); ++i) {
    frequencies[i] =
        static_cast<double>(tallies[i]) / static_cast<double>(draws);
  }
  return frequencies;
}

double TotalVariation(const std::vector<double>& a,
                      const std::vector<double>& b) {
  if (a.size() != b.size()) {
    Fail(ErrorCode::kDimensionMismatch, "distributions of different size");
  }
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += std::fabs(a[i] - b[i]);
  return 0.5 * sum;
}

}  // namespace ldp
