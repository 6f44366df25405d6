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

#include "ldp/estimation.h"

#include <cmath>

namespace ldp {

CountVector CountVector::FromTotals(uint32_t k, uint64_t n,
                                    std::vector<uint64_t> counts) {
  if (counts.size() != k) {
    Fail(ErrorCode::kDimensionMismatch, "counts have wrong k");
  }
  for (uint64_t c : counts) {
    if (c > n) {
      Fail(ErrorCode::kInvalidArgument,
           "a per-category count cannot exceed n");
    }
  }
  CountVector out(k);
  out.n_ = n;
  out.counts_ = std::move(counts);
  return out;
}

void CountVector::Add(const SubsetObservation& obs) {
  if (obs.k != k()) {
    Fail(ErrorCode::kDimensionMismatch, "observation has wrong k");
  }
  AddMembers(obs.members);
}

void CountVector::AddMembers(const std::vector<uint32_t>& members) {
  for (uint32_t m : members) ++counts_[m - 1];
  ++n_;
}

void CountVector::Add(const BitObservation& obs) {
  if (obs.k() != k()) {
    Fail(ErrorCode::kDimensionMismatch, "observation has wrong k");
  }
  for (uint32_t i = 0; i < k(); ++i) counts_[i] += obs.bits[i];
  ++n_;
}

void CountVector::Merge(const CountVector& other) {
  if (other.k() != k()) {
    Fail(ErrorCode::kDimensionMismatch, "merging counts of different k");
  }
  for (uint32_t i = 0; i < k(); ++i) counts_[i] += other.counts_[i];
  n_ += other.n_;
}

PreparedEstimator::PreparedEstimator(const MechanismSpec& spec)
    : k_(spec.k) {
  if (spec.kind == MechanismSpec::Kind::kRappor) {
    const double lambda = spec.budget.exp_half_epsilon();
    if (lambda == 1.0) {
      Fail(ErrorCode::kDegenerateBudget,
           "e^(eps/2) = 1 leaves the bit marginal uninvertible");
    }
    scale_ = (lambda + 1.0) / (lambda - 1.0);
    offset_ = 1.0 / (lambda - 1.0);
    return;
  }
  const double exp_eps = spec.budget.exp_epsilon();
  if (exp_eps == 1.0) {
    Fail(ErrorCode::kDegenerateBudget,
         "e^eps = 1 leaves the output marginal uninvertible");
  }
  const double k = spec.k;
  const double d = spec.d;
  const double denom = (k - d) * (exp_eps - 1.0);
  scale_ = ((k - 1.0) * exp_eps + (k - 1.0) * (k - d) / d) / denom;
  offset_ = ((d - 1.0) * exp_eps + (k - d)) / denom;
}

EstimateVector PreparedEstimator::Estimate(const CountVector& counts) const {
  if (counts.k() != k_) {
    Fail(ErrorCode::kDimensionMismatch, "counts have wrong k");
  }
  if (counts.n() == 0) {
    Fail(ErrorCode::kEmptySample, "no observations accumulated");
  }
  const double n = static_cast<double>(counts.n());
  std::vector<double> entries(k_);
  for (uint32_t i = 0; i < k_; ++i) {
    entries[i] = scale_ * (counts.counts()[i] / n) - offset_;
  }
  return EstimateVector::FromEntries(std::move(entries));
}

EstimateVector SubsetEstimate(const CountVector& counts,
                              const MechanismSpec& spec) {
  if (!spec.is_subset_like()) {
    Fail(ErrorCode::kInvalidArgument, "spec is not a subset mechanism");
  }
  return PreparedEstimator(spec).Estimate(counts);
}

EstimateVector RapporEstimate(const CountVector& counts,
                              const MechanismSpec& spec) {
  if (spec.kind != MechanismSpec::Kind::kRappor) {
    Fail(ErrorCode::kInvalidArgument, "spec is not a rappor mechanism");
  }
  return PreparedEstimator(spec).Estimate(counts);
}

std::vector<double> MarginalQ(const ProbabilityVector& p,
                              const MechanismSpec& spec) {
  if (!spec.is_subset_like()) {
    Fail(ErrorCode::kInvalidArgument, "spec is not a subset mechanism");
  }
  if (p.k() != spec.k) {
    Fail(ErrorCode::kDimensionMismatch, "distribution has wrong k");
  }
  const double exp_eps = spec.budget.exp_epsilon();
  const double k = spec.k;
  const double d = spec.d;
  const double denom = (k - 1.0) * exp_eps + (k - 1.0) * (k - d) / d;
  std::vector<double> q(spec.k);
  for (uint32_t i = 0; i < spec.k; ++i) {
    q[i] = ((k - d) * (exp_eps - 1.0) * p[i] + (d - 1.0) * exp_eps + (k - d)) /
           denom;
  }
  return q;
}

}  // namespace ldp
