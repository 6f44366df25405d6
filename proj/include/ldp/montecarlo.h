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
//
// End-to-end simulation: draw raw categories from p, privatize each with the
// mechanism's sampler, accumulate counts, estimate, score losses, and
// aggregate over independent trials.
//
// Reproducibility contract: trial t uses the stream Rng::Split(seed, t).
// Within a trial, each of the n samples first consumes the raw-category draw
// and then that sample's privatization draws, in order. Results are
// therefore bit-identical for a fixed plan, across runs and thread counts.

#ifndef LDP_MONTECARLO_H_
#define LDP_MONTECARLO_H_

#include <cstdint>
#include <vector>

#include "ldp/core.h"
#include "ldp/mechanisms.h"

namespace ldp {

struct SimulationPlan {
  MechanismSpec spec;
  ProbabilityVector p;
  uint64_t n = 1;          // privatized samples per trial
  uint64_t trials = 1;
  uint64_t seed = 0;
  bool want_l1 = true;
  bool want_l22 = true;
  bool keep_per_trial = false;
};

struct TrialLosses {
  double l1 = 0.0;
  double l22 = 0.0;
};

struct LossStats {
  double mean = 0.0;
  double stderr_of_mean = 0.0;  // NaN when trials == 1
  uint64_t trials = 0;
};

struct SimulationResult {
  LossStats l1;
  LossStats l22;
  std::vector<TrialLosses> per_trial;  // populated iff plan.keep_per_trial
};

// One independent trial, deterministic given (plan, trial_index).
TrialLosses RunTrial(const SimulationPlan& plan, uint64_t trial_index);

// Aggregates RunTrial over plan.trials trials. `threads` caps the worker
// count (0 = hardware concurrency); the result does not depend on it.
SimulationResult Simulate(const SimulationPlan& plan, unsigned threads = 0);

// Empirical output distribution of the mechanism for one fixed input, in
// the canonical output order of BuildChannel. Requires an output alphabet
// of at most 10^4 and draws >= 1.
std::vector<double> EmpiricalChannel(const MechanismSpec& spec, uint32_t input,
                                     uint64_t draws, uint64_t seed);

// Total variation distance between two distributions on the same finite set.
double TotalVariation(const std::vector<double>& a,
                      const std::vector<double>& b);

}  // namespace ldp

#endif  // LDP_MONTECARLO_H_
