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
// Count accumulation and the closed-form unbiased estimators. Each
// mechanism's per-category output marginal is an affine function of the true
// probability; the estimator inverts it:
//
//   subset(k,d):  q_i = ((k-d)(e^eps - 1) p_i + (d-1)e^eps + k-d) / D,
//                 D = (k-1)e^eps + (k-1)(k-d)/d,
//                 p_hat_i = K (T_i/n) - B  with  K = D / ((k-d)(e^eps - 1)),
//                 B = ((d-1)e^eps + k-d) / ((k-d)(e^eps - 1)).
//   rappor(k):    q_i = (p_i (L - 1) + 1) / (1 + L),  L = e^(eps/2),
//                 p_hat_i = ((L+1)/(L-1)) (T_i/n) - 1/(L-1).
//
// T_i counts how many of the n observations reported category i present.

#ifndef LDP_ESTIMATION_H_
#define LDP_ESTIMATION_H_

#include <cstdint>
#include <vector>

#include "ldp/core.h"
#include "ldp/mechanisms.h"

namespace ldp {

// Streaming per-category tallies: counts[i-1] = T_i, n = observations seen.
// Single-writer; shard across threads and Merge for parallel accumulation.
class CountVector {
 public:
  explicit CountVector(uint32_t k) : counts_(k, 0) {}

  // Rehydrates totals recorded elsewhere (CLI input, checkpoints). Each
  // count must be at most n.
  static CountVector FromTotals(uint32_t k, uint64_t n,
                                std::vector<uint64_t> counts);

  uint32_t k() const { return static_cast<uint32_t>(counts_.size()); }
  uint64_t n() const { return n_; }
  const std::vector<uint64_t>& counts() const { return counts_; }

  void Add(const SubsetObservation& obs);
  void Add(const BitObservation& obs);
  // O(members) fast path for samplers that reuse a member buffer.
  void AddMembers(const std::vector<uint32_t>& members);
  void Merge(const CountVector& other);

 private:
  uint64_t n_ = 0;
  std::vector<uint64_t> counts_;
};

// Affine inverse of a mechanism's output marginal, prepared once per spec so
// estimating costs O(k) per call. Unbiased: E p_hat = p under the matching
// mechanism.
class PreparedEstimator {
 public:
  // Accepts subset, rr (scale/offset specialize to the classical randomized
  // response inverse), and rappor specs.
  explicit PreparedEstimator(const MechanismSpec& spec);

  double scale() const { return scale_; }
  double offset() const { return offset_; }

  EstimateVector Estimate(const CountVector& counts) const;

 private:
  uint32_t k_;
  double scale_;
  double offset_;
};

EstimateVector SubsetEstimate(const CountVector& counts,
                              const MechanismSpec& spec);
EstimateVector RapporEstimate(const CountVector& counts,
                              const MechanismSpec& spec);

// Per-category output marginal q_i = P(category i reported present) induced
// by p under a subset/rr spec. Each q_i lies in (0,1) and they sum to d.
std::vector<double> MarginalQ(const ProbabilityVector& p,
                              const MechanismSpec& spec);

}  // namespace ldp

#endif  // LDP_ESTIMATION_H_
