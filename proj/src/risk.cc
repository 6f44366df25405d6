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

#include "ldp/risk.h"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace ldp {

namespace {

constexpr double kTieTolerance = 1e-12;

void CheckSubsetParams(uint32_t k, uint32_t d) {
  if (k < 2) Fail(ErrorCode::kTooFewCategories, "k must be >= 2");
  if (d < 1 || d > k - 1) {
    Fail(ErrorCode::kInvalidD, "d must satisfy 1 <= d <= k-1");
  }
}

void CheckBudgetInvertible(const PrivacyBudget& budget) {
  if (budget.exp_epsilon() == 1.0) {
    Fail(ErrorCode::kDegenerateBudget, "e^eps = 1 gives an infinite risk");
  }
}

double SumSquares(const ProbabilityVector& p) {
  double sum = 0.0;
  for (double v : p.entries()) sum += v * v;
  return sum;
}

bool IsUniform(const ProbabilityVector& p) {
  // sum p_i^2 >= 1/k with equality only at the uniform distribution.
  return std::fabs(SumSquares(p) - 1.0 / p.k()) <= 1e-12;
}

std::string SubsetDescriptor(uint32_t k, uint32_t d,
                             const PrivacyBudget& budget) {
  char eps[32];
  std::snprintf(eps, sizeof(eps), "%.12g", budget.epsilon());
  return "subset(k=" + std::to_string(k) + ",d=" + std::to_string(d) +
         ",epsilon=" + eps + ")";
}

// The d-dependent part of the exact l22 risk (times (e^eps - 1)^2):
// g(d) = (k-2)(d e^(2 eps)/(k-d) + (k-d)/d) + e^(2 eps)/(k-d) + 1/d.
double L22Objective(uint32_t k_int, uint32_t d_int, double exp_eps) {
  const double k = k_int;
  const double d = d_int;
  const double e2 = exp_eps * exp_eps;
  return (k - 2.0) * (d * e2 / (k - d) + (k - d) / d) + e2 / (k - d) + 1.0 / d;
}

// The d-dependent factor of the uniform-p leading l1 risk (squared):
// f(d) = (e^eps - 1 + k(d-1) e^eps/(k-d) + k)(e^eps + (k-d)/d).
double L1Objective(uint32_t k_int, uint32_t d_int, double exp_eps) {
  const double k = k_int;
  const double d = d_int;
  return (exp_eps - 1.0 + k * (d - 1.0) * exp_eps / (k - d) + k) *
         (exp_eps + (k - d) / d);
}

}  // namespace

std::string RiskFlavorName(RiskFlavor flavor) {
  switch (flavor) {
    case RiskFlavor::kExactAllN:
      return "ExactAllN";
    case RiskFlavor::kAsymptoticLeading:
      return "AsymptoticLeading";
    case RiskFlavor::kUpperBound:
      return "UpperBound";
    case RiskFlavor::kLowerBound:
      return "LowerBound";
  }
  return "?";
}

RiskReport SubsetL22Risk(uint32_t k, uint32_t d, const PrivacyBudget& budget,
                         uint64_t n, const ProbabilityVector& p) {
  CheckSubsetParams(k, d);
  CheckBudgetInvertible(budget);
  if (p.k() != k) Fail(ErrorCode::kDimensionMismatch, "p has wrong k");
  if (n < 1) Fail(ErrorCode::kEmptySample, "n must be >= 1");
  const double kk = k;
  const double dd = d;
  const double e = budget.exp_epsilon();
  const double em1_sq = (e - 1.0) * (e - 1.0);
  const double value =
      ((dd * (kk - 2.0) + 1.0) * e * e / ((kk - dd) * em1_sq) +
       2.0 * (kk - 2.0) * e / em1_sq +
       ((kk - 2.0) * (kk - dd) + 1.0) / (dd * em1_sq) - SumSquares(p)) /
      static_cast<double>(n);
  return RiskReport{.scheme = SubsetDescriptor(k, d, budget),
                    .loss = LossKind::kL2Squared,
                    .n = n,
                    .value = value,
                    .flavor = RiskFlavor::kExactAllN,
                    .worst_case = IsUniform(p),
                    .formula = "subset-l22-exact"};
}

RiskReport SubsetL1RiskAsymptotic(uint32_t k, uint32_t d,
                                  const PrivacyBudget& budget, uint64_t n,
                                  const ProbabilityVector& p) {
  CheckSubsetParams(k, d);
  CheckBudgetInvertible(budget);
  if (p.k() != k) Fail(ErrorCode::kDimensionMismatch, "p has wrong k");
  if (n < 1) Fail(ErrorCode::kEmptySample, "n must be >= 1");
  const double kk = k;
  const double dd = d;
  const double e = budget.exp_epsilon();
  const double scale = 2.0 / (std::numbers::pi * static_cast<double>(n));
  double sum = 0.0;
  for (double pi : p.entries()) {
    sum += std::sqrt(scale * ((e - 1.0) * pi + (dd - 1.0) * e / (kk - dd) + 1.0) *
                     ((e - 1.0) * (1.0 - pi) + (kk - 1.0) / dd));
  }
  return RiskReport{.scheme = SubsetDescriptor(k, d, budget),
                    .loss = LossKind::kL1,
                    .n = n,
                    .value = sum / (e - 1.0),
                    .flavor = RiskFlavor::kAsymptoticLeading,
                    .worst_case = IsUniform(p),
                    .formula = "subset-l1-leading"};
}

RiskReport SubsetL1RiskUniform(uint32_t k, uint32_t d,
                               const PrivacyBudget& budget, uint64_t n) {
  CheckSubsetParams(k, d);
  CheckBudgetInvertible(budget);
  if (n < 1) Fail(ErrorCode::kEmptySample, "n must be >= 1");
  const double kk = k;
  const double e = budget.exp_epsilon();
  const double value =
      std::sqrt(2.0 * (kk - 1.0) / (std::numbers::pi * static_cast<double>(n)) *
                L1Objective(k, d, e)) /
      (e - 1.0);
  return RiskReport{.scheme = SubsetDescriptor(k, d, budget),
                    .loss = LossKind::kL1,
                    .n = n,
                    .value = value,
                    .flavor = RiskFlavor::kAsymptoticLeading,
                    .worst_case = true,
                    .formula = "subset-l1-uniform-leading"};
}

RapporRisks RapporWorstCaseRisks(uint32_t k, const PrivacyBudget& budget,
                                 uint64_t n) {
  if (k < 2) Fail(ErrorCode::kTooFewCategories, "k must be >= 2");
  if (n < 1) Fail(ErrorCode::kEmptySample, "n must be >= 1");
  const double lambda = budget.exp_half_epsilon();
  if (lambda == 1.0) {
    Fail(ErrorCode::kDegenerateBudget, "e^(eps/2) = 1 gives an infinite risk");
  }
  const double kk = k;
  const double nn = n;
  const double lm1_sq = (lambda - 1.0) * (lambda - 1.0);
  const double l22 =
      (1.0 + kk * kk * lambda / ((kk - 1.0) * lm1_sq)) * (kk - 1.0) / (nn * kk);
  const double l1 = std::sqrt(2.0 / (std::numbers::pi * nn) *
                              (lambda + kk - 1.0) * (lambda * (kk - 1.0) + 1.0) /
                              lm1_sq);
  char eps[32];
  std::snprintf(eps, sizeof(eps), "%.12g", budget.epsilon());
  const std::string descriptor =
      "rappor(k=" + std::to_string(k) + ",epsilon=" + eps + ")";
  return RapporRisks{
      RiskReport{descriptor, LossKind::kL2Squared, n, l22,
                 RiskFlavor::kExactAllN, true, "rappor-l22-uniform-exact"},
      RiskReport{descriptor, LossKind::kL1, n, l1,
                 RiskFlavor::kAsymptoticLeading, true,
                 "rappor-l1-uniform-leading"}};
}

SelectDResult SelectD(uint32_t k, const PrivacyBudget& budget, LossKind loss) {
  if (k < 2) Fail(ErrorCode::kTooFewCategories, "k must be >= 2");
  CheckBudgetInvertible(budget);
  const double e = budget.exp_epsilon();
  const double target = k / (e + 1.0);
  uint32_t lo = static_cast<uint32_t>(std::floor(target));
  uint32_t hi = static_cast<uint32_t>(std::ceil(target));
  if (lo == 0) lo = 1;  // d = 0 is not a mechanism
  if (hi == 0) hi = 1;
  const auto objective = [&](uint32_t d) {
    return loss == LossKind::kL2Squared ? L22Objective(k, d, e)
                                        : L1Objective(k, d, e);
  };
  const double obj_lo = objective(lo);
  const double obj_hi = objective(hi);
  // Prefer the ceiling on (near-)ties.
  const uint32_t d_star =
      obj_lo < obj_hi * (1.0 - kTieTolerance) ? lo : hi;
  return SelectDResult{d_star, lo, hi, obj_lo, obj_hi};
}

uint32_t DefaultSubsetSize(uint32_t k, const PrivacyBudget& budget) {
  const uint32_t d = static_cast<uint32_t>(
      std::ceil(k / (budget.exp_epsilon() + 1.0)));
  return d == 0 ? 1 : d;
}

namespace {

void CheckUpperBoundHypothesis(uint32_t k, const PrivacyBudget& budget) {
  const double e = budget.exp_epsilon();
  if (k < 4 || static_cast<double>(k) < e + 1.0) {
    char buf[96];
    std::snprintf(buf, sizeof(buf),
                  "upper bounds require k >= max(4, e^eps + 1) = max(4, %.6g), "
                  "got k = %u",
                  e + 1.0, k);
    Fail(ErrorCode::kHypothesisViolated, buf);
  }
}

std::string OptDescriptor(uint32_t k, const PrivacyBudget& budget) {
  return SubsetDescriptor(k, DefaultSubsetSize(k, budget), budget);
}

}  // namespace

RiskReport L22UpperBound(uint32_t k, const PrivacyBudget& budget, uint64_t n) {
  CheckUpperBoundHypothesis(k, budget);
  if (n < 1) Fail(ErrorCode::kEmptySample, "n must be >= 1");
  const double e = budget.exp_epsilon();
  const double kk = k;
  const double value = 4.0 * kk * e /
                       (static_cast<double>(n) * (e - 1.0) * (e - 1.0)) *
                       (1.0 + (2.0 * e + 3.0) / (4.0 * kk));
  return RiskReport{OptDescriptor(k, budget), LossKind::kL2Squared, n, value,
                    RiskFlavor::kUpperBound, true, "subset-l22-upper"};
}

RiskReport L1UpperBound(uint32_t k, const PrivacyBudget& budget, uint64_t n) {
  CheckUpperBoundHypothesis(k, budget);
  if (n < 1) Fail(ErrorCode::kEmptySample, "n must be >= 1");
  const double e = budget.exp_epsilon();
  const double kk = k;
  const double value =
      std::sqrt(8.0 * e / (std::numbers::pi * static_cast<double>(n))) * kk /
      (e - 1.0) * (1.0 + (e + 1.0) / (4.0 * kk));
  return RiskReport{OptDescriptor(k, budget), LossKind::kL1, n, value,
                    RiskFlavor::kUpperBound, true, "subset-l1-upper"};
}

double LowerBoundThreshold(uint32_t k, const PrivacyBudget& budget) {
  const double e = budget.exp_epsilon();
  const double kk = k;
  return std::max(kk * kk * (e + 1.0) * (e + 1.0) /
                      (16.0 * (e - 1.0) * (e - 1.0)),
                  kk * kk / (2.0 * (e - 1.0)));
}

RiskReport LowerBound(uint32_t k, const PrivacyBudget& budget, uint64_t n,
                      LossKind loss) {
  if (k < 2) Fail(ErrorCode::kTooFewCategories, "k must be >= 2");
  CheckBudgetInvertible(budget);
  const double threshold = LowerBoundThreshold(k, budget);
  if (!(static_cast<double>(n) > threshold)) {
    char buf[96];
    std::snprintf(buf, sizeof(buf),
                  "lower bound requires n > %.6g, got n = %llu", threshold,
                  static_cast<unsigned long long>(n));
    Fail(ErrorCode::kSampleSizeTooSmall, buf);
  }
  const double e = budget.exp_epsilon();
  const double kk = k;
  const double nn = n;
  double value;
  if (loss == LossKind::kL2Squared) {
    value = e < 3.0 ? (kk - 1.0) * (e + 1.0) * (e + 1.0) /
                          (512.0 * nn * (e - 1.0) * (e - 1.0))
                    : (kk - 1.0) / (64.0 * nn * (e - 1.0));
  } else {
    value = e < 3.0
                ? (kk - 1.0) * (e + 1.0) / (64.0 * std::sqrt(nn) * (e - 1.0))
                : (kk - 1.0) / (16.0 * std::sqrt(2.0 * nn * (e - 1.0)));
  }
  return RiskReport{"minimax", loss, n, value, RiskFlavor::kLowerBound, true,
                    loss == LossKind::kL2Squared ? "minimax-l22-lower"
                                                 : "minimax-l1-lower"};
}

double ExtremalColumnObjective(uint32_t t, uint32_t k,
                               const PrivacyBudget& budget) {
  if (k < 2 || k % 2 != 0) {
    Fail(ErrorCode::kOddK, "the column objective is defined for even k >= 2");
  }
  if (t < 1 || t > k / 2) {
    Fail(ErrorCode::kTOutOfRange, "t must satisfy 1 <= t <= k/2");
  }
  const double e = budget.exp_epsilon();
  const double tt = t;
  const double denom = tt * (e - 1.0) + k;
  return tt * (e - 1.0) * (e - 1.0) / (denom * denom);
}

double ExtremalColumnBound(uint32_t k, const PrivacyBudget& budget) {
  if (k < 2 || k % 2 != 0) {
    Fail(ErrorCode::kOddK, "the column bound is defined for even k >= 2");
  }
  const double e = budget.exp_epsilon();
  const double kk = k;
  if (e < 3.0) {
    return 2.0 * (e - 1.0) * (e - 1.0) / (kk * (e + 1.0) * (e + 1.0));
  }
  return (e - 1.0) / (4.0 * kk);
}

BoundsCertificate MakeBoundsCertificate(uint32_t k,
                                        const PrivacyBudget& budget,
                                        uint64_t n, LossKind loss) {
  const uint32_t d = DefaultSubsetSize(k, budget);
  const RiskReport lower = LowerBound(k, budget, n, loss);
  const RiskReport upper = loss == LossKind::kL2Squared
                               ? L22UpperBound(k, budget, n)
                               : L1UpperBound(k, budget, n);
  const double exact =
      loss == LossKind::kL2Squared
          ? SubsetL22Risk(k, d, budget, n, ProbabilityVector::Uniform(k)).value
          : SubsetL1RiskUniform(k, d, budget, n).value;
  return BoundsCertificate{k,           budget.epsilon(), n,     loss,
                           lower.value, exact,            upper.value};
}

SchemeComparison CompareSchemes(uint32_t k, const PrivacyBudget& budget,
                                uint64_t n) {
  if (k < 2) Fail(ErrorCode::kTooFewCategories, "k must be >= 2");
  CheckBudgetInvertible(budget);
  if (n < 1) Fail(ErrorCode::kEmptySample, "n must be >= 1");
  const double e = budget.exp_epsilon();
  const double lambda = budget.exp_half_epsilon();
  const double kk = k;
  const double nn = n;
  const uint32_t d_opt = DefaultSubsetSize(k, budget);

  // Proven lower estimates of the competitors' worst-case risks.
  const double rappor_l22_floor = kk * lambda /
                                  (nn * (lambda - 1.0) * (lambda - 1.0));
  const double rr_l22_floor =
      kk * kk / (nn * (e - 1.0) * (e - 1.0)) * (1.0 - 1.0 / kk);
  const double rappor_l1_floor =
      std::sqrt(2.0 / std::numbers::pi) * kk * std::sqrt(lambda) /
      ((lambda - 1.0) * std::sqrt(nn)) * std::sqrt(1.0 - 1.0 / kk);
  const double rr_l1_floor = std::sqrt(2.0 / std::numbers::pi) * kk *
                             std::sqrt(kk) / ((e - 1.0) * std::sqrt(nn)) *
                             std::sqrt(1.0 - 1.0 / kk);

  // The subset upper bounds need k >= max(4, e^eps + 1); outside that region
  // fall back to the exact worst-case value so a ratio is still reported.
  const bool upper_bounds_apply = k >= 4 && kk >= e + 1.0;
  const ProbabilityVector uniform = ProbabilityVector::Uniform(k);
  const double opt_l22_exact =
      SubsetL22Risk(k, d_opt, budget, n, uniform).value;
  const double opt_l1_exact = SubsetL1RiskUniform(k, d_opt, budget, n).value;
  const double opt_l22_ub =
      upper_bounds_apply ? L22UpperBound(k, budget, n).value : opt_l22_exact;
  const double opt_l1_ub =
      upper_bounds_apply ? L1UpperBound(k, budget, n).value : opt_l1_exact;

  const RapporRisks rappor = RapporWorstCaseRisks(k, budget, n);
  const double rr_l22_exact = SubsetL22Risk(k, 1, budget, n, uniform).value;
  const double rr_l1_exact = SubsetL1RiskUniform(k, 1, budget, n).value;

  SchemeComparison out;
  out.k = k;
  out.epsilon = budget.epsilon();
  out.n = n;
  out.d_opt = d_opt;
  out.bound_l22_vs_rappor = opt_l22_ub / rappor_l22_floor;
  out.bound_l22_vs_rr = opt_l22_ub / rr_l22_floor;
  out.bound_l1_vs_rappor = opt_l1_ub / rappor_l1_floor;
  out.bound_l1_vs_rr = opt_l1_ub / rr_l1_floor;
  out.exact_l22_vs_rappor = opt_l22_exact / rappor.l22.value;
  out.exact_l22_vs_rr = opt_l22_exact / rr_l22_exact;
  out.exact_l1_vs_rappor = opt_l1_exact / rappor.l1.value;
  out.exact_l1_vs_rr = opt_l1_exact / rr_l1_exact;
  out.in_medium_regime = budget.epsilon() > 3.8 && kk > 9.0 * e;
  out.pass = out.in_medium_regime && out.bound_l22_vs_rappor < 0.5 &&
             out.bound_l22_vs_rr < 0.5 && out.bound_l1_vs_rappor < 0.7 &&
             out.bound_l1_vs_rr < 0.7;
  return out;
}

}  // namespace ldp
