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
// Brute-force oracles used to validate the analytic shortcuts in risk.h and
// mechanisms.h. These deliberately do not reuse the closed forms they check:
// the l22 oracle enumerates the full output alphabet and marginalizes
// directly, and the subset-size oracle scans every admissible d.

#ifndef LDP_REFERENCE_H_
#define LDP_REFERENCE_H_

#include <cstdint>
#include <string>

#include "ldp/core.h"
#include "ldp/mechanisms.h"

namespace ldp {

// Exact expected l22 loss of the unbiased subset estimator, computed from
// first principles: enumerate all C(k,d) outputs with their literal
// conditional probabilities, marginalize to get the per-category output
// probabilities q_i, and sum the estimator's variance (K^2/n) sum q_i(1-q_i).
// Never touches the closed-form risk expression. Requires C(k,d) <= 10^5.
double ExactL22ByEnumeration(const MechanismSpec& spec,
                             const ProbabilityVector& p, uint64_t n);

// argmin over every d in {1..k-1} of the uniform-p risk (exact l22 or
// leading l1), ties broken toward larger d. Requires k <= 64.
uint32_t BruteForceSelectD(uint32_t k, const PrivacyBudget& budget,
                           LossKind loss);

// Exhaustive per-channel health report over the enumerated matrix.
struct ChannelAudit {
  double privacy_ratio;
  bool is_extremal;
  double max_row_sum_deviation;
  // max over random p and categories i of |closed-form marginal q_i -
  // enumerated marginal q_i|.
  double max_marginal_deviation;
};
ChannelAudit AuditChannel(const MechanismSpec& spec,
                          uint32_t num_random_p = 20, uint64_t seed = 2026);

// Named verification suites backing the command-line `verify` command. Each
// reruns one family of cross-checks over a fixed grid and reports the worst
// deviation observed.
struct SuiteReport {
  std::string suite;
  bool passed = false;
  double max_deviation = 0.0;
  std::string detail;
};

SuiteReport VerifyChannels(unsigned threads = 0);  // sampler law, TV < 0.005
SuiteReport VerifyRisks();      // closed form vs enumeration, <= 1e-10 rel
SuiteReport VerifySelectD();    // two-candidate rule vs exhaustive scan
SuiteReport VerifyExtremal();   // extremalization + decomposition invariants
SuiteReport VerifyColumnBound();  // exhaustive t-sweep vs analytic bound

}  // namespace ldp

#endif  // LDP_REFERENCE_H_
