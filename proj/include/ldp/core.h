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

#ifndef LDP_CORE_H_
#define LDP_CORE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ldp/error.h"
#include "ldp/rng.h"

namespace ldp {

enum class LossKind { kL1, kL2Squared };

std::string LossKindName(LossKind kind);  // "l1" / "l22"
LossKind LossKindFromName(const std::string& name);

// Privacy level of a randomization mechanism. The analysis works with e^eps
// throughout, so it is cached at construction. epsilon must be strictly
// positive: at eps = 0 every unbiased estimator below has a vanishing
// denominator e^eps - 1.
class PrivacyBudget {
 public:
  explicit PrivacyBudget(double epsilon);
  static PrivacyBudget FromExpEpsilon(double exp_epsilon);

  double epsilon() const { return epsilon_; }
  double exp_epsilon() const { return exp_epsilon_; }
  // e^(eps/2), used by the bit-flipping mechanism. Computed as
  // sqrt(exp_epsilon) (exactly rounded), so budgets built from an exact
  // e^eps keep exact half-level values.
  double exp_half_epsilon() const;

 private:
  PrivacyBudget(double epsilon, double exp_epsilon)
      : epsilon_(epsilon), exp_epsilon_(exp_epsilon) {}

  double epsilon_;
  double exp_epsilon_;
};

// A point of the probability simplex over categories {1..k}, k >= 2.
// Construction validates (no silent fixing of bad input: entries must be
// nonnegative and sum to 1 within 1e-9) and then renormalizes the residual
// rounding noise so downstream arithmetic sees a sum within 1e-12.
class ProbabilityVector {
 public:
  static ProbabilityVector Validate(std::vector<double> entries);
  static ProbabilityVector Uniform(uint32_t k);
  static ProbabilityVector PointMass(uint32_t k, uint32_t category);

  uint32_t k() const { return static_cast<uint32_t>(entries_.size()); }
  const std::vector<double>& entries() const { return entries_; }
  double operator[](size_t i) const { return entries_[i]; }

 private:
  explicit ProbabilityVector(std::vector<double> entries)
      : entries_(std::move(entries)) {}

  std::vector<double> entries_;
};

// Output of an estimator. Deliberately unconstrained (may leave the simplex
// and the unit cube); the unbiased estimators in estimation.h do exactly
// that, and the risk formulas assume the raw values. Only finiteness is
// enforced.
class EstimateVector {
 public:
  static EstimateVector FromEntries(std::vector<double> entries);

  uint32_t k() const { return static_cast<uint32_t>(entries_.size()); }
  const std::vector<double>& entries() const { return entries_; }
  double operator[](size_t i) const { return entries_[i]; }

 private:
  explicit EstimateVector(std::vector<double> entries)
      : entries_(std::move(entries)) {}

  std::vector<double> entries_;
};

// l1:  sum_i |e_i - p_i|
// l22: sum_i (e_i - p_i)^2
double Loss(LossKind kind, const EstimateVector& estimate,
            const ProbabilityVector& truth);

// Coordinatewise map onto [0,1]: x -> 0 for x < 0, x for 0 <= x < 1,
// 1 for x >= 1. Never increases either loss against any truth in the cube.
EstimateVector ClipToUnitCube(const EstimateVector& estimate);

// Uniform (Dirichlet(1,...,1)) draw from the k-simplex.
ProbabilityVector SampleSimplex(uint32_t k, Rng& rng);

}  // namespace ldp

#endif  // LDP_CORE_H_
