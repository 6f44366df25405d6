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
#include <cstdio>

namespace ldp {

namespace {
constexpr double kInputSumTolerance = 1e-9;
}  // namespace

std::string LossKindName(LossKind kind) {
  return kind == LossKind::kL1 ? "l1" : "l22";
}

LossKind LossKindFromName(const std::string& name) {
  if (name == "l1") return LossKind::kL1;
  if (name == "l22" || name == "l2sq") return LossKind::kL2Squared;
  Fail(ErrorCode::kInvalidArgument, "unknown loss kind: " + name);
}

PrivacyBudget::PrivacyBudget(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    Fail(ErrorCode::kDegenerateBudget,
         "epsilon must be a finite positive real");
  }
  exp_epsilon_ = std::exp(epsilon);
  if (!std::isfinite(exp_epsilon_)) {
    Fail(ErrorCode::kDegenerateBudget, "exp(epsilon) overflows");
  }
}

PrivacyBudget PrivacyBudget::FromExpEpsilon(double exp_epsilon) {
  if (!(exp_epsilon > 1.0) || !std::isfinite(exp_epsilon)) {
    Fail(ErrorCode::kDegenerateBudget,
         "exp(epsilon) must be a finite real > 1");
  }
  return PrivacyBudget(std::log(exp_epsilon), exp_epsilon);
}

double PrivacyBudget::exp_half_epsilon() const {
  return std::sqrt(exp_epsilon_);
}

ProbabilityVector ProbabilityVector::Validate(std::vector<double> entries) {
  if (entries.size() < 2) {
    Fail(ErrorCode::kTooFewCategories,
         "a distribution needs at least 2 categories, got " +
             std::to_string(entries.size()));
  }
  double sum = 0.0;
  for (double v : entries) {
    if (!std::isfinite(v)) {
      Fail(ErrorCode::kNonFiniteEntry, "non-finite probability entry");
    }
    if (v < 0.0) {
      Fail(ErrorCode::kNegativeEntry,
           "negative probability entry " + std::to_string(v));
    }
    sum += v;
  }
  if (std::fabs(sum - 1.0) > kInputSumTolerance) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", sum);
    Fail(ErrorCode::kSumNotOne,
         std::string("entries sum to ") + buf + ", expected 1");
  }
  // Scrub the residual rounding noise so the sum is exact to ~1 ulp.
  for (double& v : entries) v /= sum;
  return ProbabilityVector(std::move(entries));
}

ProbabilityVector ProbabilityVector::Uniform(uint32_t k) {
  if (k < 2) Fail(ErrorCode::kTooFewCategories, "k must be >= 2");
  return ProbabilityVector(std::vector<double>(k, 1.0 / k));
}

ProbabilityVector ProbabilityVector::PointMass(uint32_t k, uint32_t category) {
  if (k < 2) Fail(ErrorCode::kTooFewCategories, "k must be >= 2");
  if (category < 1 || category > k) {
    Fail(ErrorCode::kCategoryOutOfRange, "category out of {1..k}");
  }
  std::vector<double> entries(k, 0.0);
  entries[category - 1] = 1.0;
  return ProbabilityVector(std::move(entries));
}

EstimateVector EstimateVector::FromEntries(std::vector<double> entries) {
  for (double v : entries) {
    if (!std::isfinite(v)) {
      Fail(ErrorCode::kNonFiniteEntry, "non-finite estimate entry");
    }
  }
  return EstimateVector(std::move(entries));
}

double Loss(LossKind kind, const EstimateVector& estimate,
            const ProbabilityVector& truth) {
  if (estimate.k() != truth.k()) {
    Fail(ErrorCode::kDimensionMismatch,
         "estimate has k=" + std::to_string(estimate.k()) + ", truth has k=" +
             std::to_string(truth.k()));
  }
  double acc = 0.0;
  if (kind == LossKind::kL1) {
    for (uint32_t i = 0; i < truth.k(); ++i) {
      acc += std::fabs(estimate[i] - truth[i]);
    }
  } else {
    for (uint32_t i = 0; i < truth.k(); ++i) {
      double diff = estimate[i] - truth[i];
      acc += diff * diff;
    }
  }
  return acc;
}

EstimateVector ClipToUnitCube(const EstimateVector& estimate) {
  std::vector<double> clipped = estimate.entries();
  for (double& v : clipped) {
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
  }
  return EstimateVector::FromEntries(std::move(clipped));
}

ProbabilityVector SampleSimplex(uint32_t k, Rng& rng) {
  std::vector<double> entries(k);
  double sum = 0.0;
  for (double& v : entries) {
    // -log of a uniform draw on (0,1]; standard exponentials normalized by
    // their sum are Dirichlet(1,...,1).
    v = -std::log(1.0 - rng.UniformDouble());
    sum += v;
  }
  for (double& v : entries) v /= sum;
  return ProbabilityVector::Validate(std::move(entries));
}

}  // namespace ldp
