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
// Closed-form risk of the unbiased estimators, optimal subset-size
// selection, worst-case upper bounds, minimax lower bounds, and the
// cross-scheme comparison ratios. Conventions:
//
//  * l22 expressions are exact for every n.
//  * l1 expressions are the leading 1/sqrt(n) term of the large-n expansion
//    (normal approximation of the count marginals); the o(1/sqrt(n))
//    remainder is excluded, and results carry kAsymptoticLeading.
//  * The worst-case distribution for both losses is uniform.

#ifndef LDP_RISK_H_
#define LDP_RISK_H_

#include <cstdint>
#include <string>

#include "ldp/core.h"
#include "ldp/mechanisms.h"

namespace ldp {

enum class RiskFlavor {
  kExactAllN,
  kAsymptoticLeading,  // l1 only
  kUpperBound,
  kLowerBound,
};

std::string RiskFlavorName(RiskFlavor flavor);

struct RiskReport {
  std::string scheme;  // descriptor, e.g. "subset(k=4,d=2)"
  LossKind loss;
  uint64_t n;
  double value;
  RiskFlavor flavor;
  bool worst_case;
  std::string formula;  // identifier of the expression used
};

// Exact expected l22 loss of the unbiased subset estimator:
//   (1/n) [ (d(k-2)+1) e^(2 eps) / ((k-d)(e^eps - 1)^2)
//           + 2(k-2) e^eps / (e^eps - 1)^2
//           + ((k-2)(k-d)+1) / (d (e^eps - 1)^2)  -  sum_i p_i^2 ].
// p enters only through -sum p_i^2, so the uniform p is the worst case.
RiskReport SubsetL22Risk(uint32_t k, uint32_t d, const PrivacyBudget& budget,
                         uint64_t n, const ProbabilityVector& p);

// Leading-order expected l1 loss of the unbiased subset estimator:
//   (1/(e^eps - 1)) sum_i sqrt( (2/(pi n))
//       ((e^eps - 1) p_i + (d-1) e^eps / (k-d) + 1)
//       ((e^eps - 1)(1 - p_i) + (k-1)/d) ).
RiskReport SubsetL1RiskAsymptotic(uint32_t k, uint32_t d,
                                  const PrivacyBudget& budget, uint64_t n,
                                  const ProbabilityVector& p);

// The same leading term specialized to the uniform (worst-case) p:
//   (1/(e^eps - 1)) sqrt( (2(k-1)/(pi n))
//       (e^eps - 1 + k(d-1) e^eps / (k-d) + k) (e^eps + (k-d)/d) ).
RiskReport SubsetL1RiskUniform(uint32_t k, uint32_t d,
                               const PrivacyBudget& budget, uint64_t n);

struct RapporRisks {
  RiskReport l22;  // exact, uniform p:
                   //   (1 + k^2 L / ((k-1)(L-1)^2)) (k-1)/(n k),  L = e^(eps/2)
  RiskReport l1;   // leading term, uniform p:
                   //   sqrt( (2/(pi n)) (L+k-1)(L(k-1)+1) / (L-1)^2 )
};
RapporRisks RapporWorstCaseRisks(uint32_t k, const PrivacyBudget& budget,
                                 uint64_t n);

// Optimal subset size. The real-valued minimizer of both loss objectives is
// k/(e^eps + 1); only its two integer neighbors need to be compared, with
// floor 0 promoted to 1 and exact ties going to the ceiling.
struct SelectDResult {
  uint32_t d_star;
  uint32_t candidate_floor;  // clamped to >= 1
  uint32_t candidate_ceil;
  double objective_floor;
  double objective_ceil;
};
SelectDResult SelectD(uint32_t k, const PrivacyBudget& budget, LossKind loss);

// The default "nearly optimal" subset size ceil(k/(e^eps + 1)).
uint32_t DefaultSubsetSize(uint32_t k, const PrivacyBudget& budget);

// Worst-case risk bounds for subset(k, ceil(k/(e^eps+1))); require
// k >= max(4, e^eps + 1).
//   l22: (4 k e^eps / (n (e^eps - 1)^2)) (1 + (2 e^eps + 3)/(4k))
//   l1:  sqrt(8 e^eps / (pi n)) (k/(e^eps - 1)) (1 + (e^eps + 1)/(4k))
RiskReport L22UpperBound(uint32_t k, const PrivacyBudget& budget, uint64_t n);
RiskReport L1UpperBound(uint32_t k, const PrivacyBudget& budget, uint64_t n);

// Sample size above which the minimax lower bounds hold:
// max( k^2 (e^eps+1)^2 / (16 (e^eps-1)^2), k^2 / (2 (e^eps-1)) ).
double LowerBoundThreshold(uint32_t k, const PrivacyBudget& budget);

// Minimax lower bound over all eps-private mechanisms and all estimators,
// for n strictly above LowerBoundThreshold:
//   l22: (k-1)(e^eps+1)^2 / (512 n (e^eps-1)^2)   for e^eps < 3
//        (k-1) / (64 n (e^eps-1))                 for e^eps >= 3
//   l1:  (k-1)(e^eps+1) / (64 sqrt(n) (e^eps-1))  for e^eps < 3
//        (k-1) / (16 sqrt(2 n (e^eps-1)))         for e^eps >= 3
RiskReport LowerBound(uint32_t k, const PrivacyBudget& budget, uint64_t n,
                      LossKind loss);

// Largest per-output contribution an extremal channel column can make to the
// paired squared-difference sum that drives the lower bound. For even k and
// t in {1..k/2} boosted entries, the contribution is
//   t (e^eps - 1)^2 / (t (e^eps - 1) + k)^2,
// and its maximum over t is bounded by
//   2 (e^eps - 1)^2 / (k (e^eps + 1)^2)  for e^eps < 3   (attained at t = k/2)
//   (e^eps - 1) / (4k)                   for e^eps >= 3  (continuous max at
//                                         t = k/(e^eps - 1)).
double ExtremalColumnObjective(uint32_t t, uint32_t k,
                               const PrivacyBudget& budget);
double ExtremalColumnBound(uint32_t k, const PrivacyBudget& budget);

// lower <= exact_worst_case <= upper whenever both the upper-bound
// hypothesis and the lower-bound sample-size threshold hold.
struct BoundsCertificate {
  uint32_t k;
  double epsilon;
  uint64_t n;
  LossKind loss;
  double lower;
  double exact_worst_case;  // uniform-p risk at d = ceil(k/(e^eps+1));
                            // leading term for l1
  double upper;
};
BoundsCertificate MakeBoundsCertificate(uint32_t k,
                                        const PrivacyBudget& budget,
                                        uint64_t n, LossKind loss);

// Cross-scheme comparison at the worst-case (uniform) distribution.
// bound_* ratios divide the subset upper bounds by proven lower estimates of
// the competitors' worst-case risks:
//   rappor l22 >= k L / (n (L-1)^2),                      L = e^(eps/2)
//   rr     l22 >= (k^2 / (n (e^eps-1)^2)) (1 - 1/k)
//   rappor l1  >= sqrt(2/pi) k sqrt(L) / ((L-1) sqrt(n)) sqrt(1 - 1/k)
//   rr     l1  >= sqrt(2/pi) k sqrt(k) / ((e^eps-1) sqrt(n)) sqrt(1 - 1/k)
// In the medium-privacy regime (eps > 3.8 and k > 9 e^eps) the bound ratios
// provably stay below 1/2 (l22) and 0.7 (l1). exact_* ratios compare the
// closed-form risks directly and are reported alongside.
struct SchemeComparison {
  uint32_t k;
  double epsilon;
  uint64_t n;
  uint32_t d_opt;
  double bound_l22_vs_rappor;
  double bound_l22_vs_rr;
  double bound_l1_vs_rappor;
  double bound_l1_vs_rr;
  double exact_l22_vs_rappor;
  double exact_l22_vs_rr;
  double exact_l1_vs_rappor;
  double exact_l1_vs_rr;
  bool in_medium_regime;
  bool pass;  // thresholds met; meaningful only when in_medium_regime
};
SchemeComparison CompareSchemes(uint32_t k, const PrivacyBudget& budget,
                                uint64_t n);

}  // namespace ldp

#endif  // LDP_RISK_H_
