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
// Privatization channels over the categories {1..k}:
//
//  * subset(k,d): the output is a size-d subset of {1..k}; subsets containing
//    the true category are e^eps times more likely than the rest. All
//    probabilities are kept in the factored form
//        P(output contains input) = d e^eps / (d e^eps + k - d),
//    divided by the number of equally likely subsets on each branch, so no
//    astronomically small raw subset probability is ever materialized.
//  * rr(k): classical k-ary randomized response; identical to subset(k,1).
//  * rappor(k): the output is the one-hot encoding of the input with every
//    bit flipped independently with probability 1/(1+e^(eps/2)).
//
// Also provides the machinery for reasoning about arbitrary finite channels:
// explicit row-stochastic matrices, privacy-ratio audits, and the rewrite of
// any eps-private channel into an equivalent "extremal" one whose per-output
// conditional-probability ratios are all 1 or e^eps.

#ifndef LDP_MECHANISMS_H_
#define LDP_MECHANISMS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ldp/core.h"
#include "ldp/rng.h"

namespace ldp {

struct MechanismSpec {
  enum class Kind { kSubset, kRr, kRappor };

  Kind kind;
  uint32_t k;
  uint32_t d;  // subset size; 1 for kRr; unused for kRappor
  PrivacyBudget budget;

  static MechanismSpec Subset(uint32_t k, uint32_t d, PrivacyBudget budget);
  static MechanismSpec Rr(uint32_t k, PrivacyBudget budget);
  static MechanismSpec Rappor(uint32_t k, PrivacyBudget budget);

  bool is_subset_like() const { return kind != Kind::kRappor; }
  std::string KindName() const;  // "subset" / "rr" / "rappor"
  std::string Describe() const;  // e.g. "subset(k=4,d=2)"
};

// One subset-mechanism output: the categories reported as present.
// `members` is strictly increasing, values in {1..k}.
struct SubsetObservation {
  uint32_t k;
  std::vector<uint32_t> members;

  static SubsetObservation Create(uint32_t k, std::vector<uint32_t> members);
};

// One rappor output: a full bit vector over the k categories.
struct BitObservation {
  std::vector<uint8_t> bits;

  uint32_t k() const { return static_cast<uint32_t>(bits.size()); }
};

// Explicit conditional-probability matrix of a finite-output channel.
// probs[x][y] = P(output y | input category x+1); every row sums to 1.
struct ChannelMatrix {
  uint32_t k = 0;
  std::vector<std::string> output_labels;
  std::vector<std::vector<double>> probs;

  uint32_t num_outputs() const {
    return static_cast<uint32_t>(output_labels.size());
  }
};

// Wraps a bare row-stochastic matrix as a ChannelMatrix with generated
// labels "y0","y1",.... Validates shape, nonnegativity, and row sums
// (within 1e-12).
ChannelMatrix ChannelFromProbs(std::vector<std::vector<double>> probs);

// P(obs | input) under a subset/rr spec. Exact in double for k <= 50;
// log-gamma binomials beyond that.
double SubsetChannelProb(const MechanismSpec& spec, uint32_t input,
                         const SubsetObservation& obs);

// P(obs | input) under a rappor spec; computed in log space.
double RapporChannelProb(const MechanismSpec& spec, uint32_t input,
                         const BitObservation& obs);

// Draws one subset observation by the two-stage procedure: first decide
// whether the true category is reported, with probability
// d e^eps / (d e^eps + k - d); then fill the remaining slots uniformly
// without replacement from the other categories. The induced law equals
// SubsetChannelProb exactly. Reuses its scratch buffer across calls, so
// use one sampler (and one Rng) per thread.
class SubsetSampler {
 public:
  explicit SubsetSampler(const MechanismSpec& spec);

  // Overwrites `members_out` with a sorted size-d subset of {1..k}.
  void Sample(uint32_t input, Rng& rng, std::vector<uint32_t>& members_out);

 private:
  uint32_t k_;
  uint32_t d_;
  double include_prob_;
  std::vector<uint32_t> pool_;
};

class RapporSampler {
 public:
  explicit RapporSampler(const MechanismSpec& spec);

  // Overwrites `bits_out` (resized to k) with a privatized one-hot vector.
  // Bits are drawn for categories 1..k in order.
  void Sample(uint32_t input, Rng& rng, std::vector<uint8_t>& bits_out);

 private:
  uint32_t k_;
  double keep_prob_;  // e^(eps/2) / (1 + e^(eps/2))
};

SubsetObservation SampleSubset(const MechanismSpec& spec, uint32_t input,
                               Rng& rng);
BitObservation SampleRappor(const MechanismSpec& spec, uint32_t input,
                            Rng& rng);

// Enumerates the full channel matrix. Canonical output order:
//  * subset/rr: size-d member lists in lexicographic order, labeled by
//    "+"-joined members ("1+3");
//  * rappor: bit patterns in integer order, pattern m having bit for
//    category i equal to (m >> (k-i)) & 1, labeled by the k-digit binary
//    string of m (leftmost digit = category 1).
// Rejects output alphabets larger than 10^6.
ChannelMatrix BuildChannel(const MechanismSpec& spec);

// Position of `members` in the canonical lexicographic enumeration of size-d
// subsets of {1..k}.
uint32_t SubsetRank(uint32_t k, const std::vector<uint32_t>& members);

// Position of `bits` in the canonical rappor output order.
uint32_t BitPatternRank(const BitObservation& obs);

// Worst-case ratio max_x Q(y|x) / min_x Q(y|x) over all outputs y, ignoring
// all-zero columns. A column with zero minimum and positive maximum gives
// +infinity.
double PrivacyRatio(const ChannelMatrix& channel);

// True iff the channel is eps-locally differentially private:
// PrivacyRatio <= e^eps (1 + 1e-12).
bool CheckLdp(const ChannelMatrix& channel, const PrivacyBudget& budget);

// True iff every nonzero output column, normalized by its smallest entry,
// has all entries equal to 1 or e^eps within 1e-9.
bool IsExtremal(const ChannelMatrix& channel, const PrivacyBudget& budget);

// Convex expansion of a point of the cube [1, e^eps]^k over the cube's
// vertices {1, e^eps}^k.
struct ConvexDecomposition {
  std::vector<std::vector<double>> vertices;
  std::vector<double> weights;
};

// Writes v as sum_j weights[j] * vertices[j], splitting coordinates left to
// right; coordinates already at a vertex value (within 1e-12) do not split,
// so at most 2^(#interior coordinates) terms appear, all with positive
// weight. Rejects entries outside [1, e^eps] by more than 1e-12.
ConvexDecomposition ConvexVertexDecomposition(const std::vector<double>& v,
                                              const PrivacyBudget& budget);

struct ExtremalizeResult {
  ChannelMatrix channel;
  // output_map[j'] = index of the original output that column j' of
  // `channel` refines; summing channel columns over {j' : output_map[j']==j}
  // reproduces original column j exactly.
  std::vector<uint32_t> output_map;
};

// Rewrites an eps-private channel as an extremal one with the same
// observable behavior: each original output splits into at most 2^k outputs
// proportional to cube vertices, with weights from ConvexVertexDecomposition
// of the output's normalized probability column. Zero-probability outputs
// are pruned. Requires CheckLdp(channel, budget) and 2^k * L <= 10^6.
ExtremalizeResult Extremalize(const ChannelMatrix& channel,
                              const PrivacyBudget& budget);

}  // namespace ldp

#endif  // LDP_MECHANISMS_H_
