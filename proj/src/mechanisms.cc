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

#include "ldp/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ldp {

namespace {

constexpr uint64_t kMaxAlphabet = 1000000;
constexpr double kCubeTolerance = 1e-12;
constexpr double kExtremalTolerance = 1e-9;

// Exact-in-double binomial coefficient for small n (C(50,25) < 2^53).
double ChooseExact(uint32_t n, uint32_t r) {
  if (r > n) return 0.0;
  r = std::min(r, n - r);
  double value = 1.0;
  for (uint32_t i = 1; i <= r; ++i) {
    value = value * (n - r + i) / i;
  }
  return value;
}

double LogChoose(uint32_t n, uint32_t r) {
  if (r > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

// C(n, r) as a double, or +inf if it exceeds `cap`. Used to gate alphabet
// enumeration without overflowing.
double ChooseCapped(uint32_t n, uint32_t r, double cap) {
  if (r > n) return 0.0;
  r = std::min(r, n - r);
  double value = 1.0;
  for (uint32_t i = 1; i <= r; ++i) {
    value = value * (n - r + i) / i;
    if (value > cap) return std::numeric_limits<double>::infinity();
  }
  return value;
}

void CheckCategory(uint32_t k, uint32_t category) {
  if (category < 1 || category > k) {
    Fail(ErrorCode::kCategoryOutOfRange,
         "category " + std::to_string(category) + " outside {1.." +
             std::to_string(k) + "}");
  }
}

// Probability that the reported subset contains the true category.
double IncludeProb(uint32_t k, uint32_t d, double exp_eps) {
  return d * exp_eps / (d * exp_eps + (k - d));
}

}  // namespace

MechanismSpec MechanismSpec::Subset(uint32_t k, uint32_t d,
                                    PrivacyBudget budget) {
  if (k < 2) Fail(ErrorCode::kTooFewCategories, "k must be >= 2");
  if (d < 1 || d > k - 1) {
    Fail(ErrorCode::kInvalidD, "subset size d must satisfy 1 <= d <= k-1, got d=" +
                                   std::to_string(d) + " with k=" +
                                   std::to_string(k));
  }
  return MechanismSpec{Kind::kSubset, k, d, budget};
}

MechanismSpec MechanismSpec::Rr(uint32_t k, PrivacyBudget budget) {
  if (k < 2) Fail(ErrorCode::kTooFewCategories, "k must be >= 2");
  return MechanismSpec{Kind::kRr, k, 1, budget};
}

MechanismSpec MechanismSpec::Rappor(uint32_t k, PrivacyBudget budget) {
  if (k < 2) Fail(ErrorCode::kTooFewCategories, "k must be >= 2");
  return MechanismSpec{Kind::kRappor, k, 0, budget};
}

std::string MechanismSpec::KindName() const {
  switch (kind) {
    case Kind::kSubset:
      return "subset";
    case Kind::kRr:
      return "rr";
    case Kind::kRappor:
      return "rappor";
  }
  return "?";
}

std::string MechanismSpec::Describe() const {
  std::string out = KindName() + "(k=" + std::to_string(k);
  if (kind == Kind::kSubset) out += ",d=" + std::to_string(d);
  return out + ")";
}

SubsetObservation SubsetObservation::Create(uint32_t k,
                                            std::vector<uint32_t> members) {
  uint32_t prev = 0;
  for (uint32_t m : members) {
    CheckCategory(k, m);
    if (m <= prev) {
      Fail(ErrorCode::kInvalidObservation,
           "subset members must be strictly increasing");
    }
    prev = m;
  }
  return SubsetObservation{k, std::move(members)};
}

ChannelMatrix ChannelFromProbs(std::vector<std::vector<double>> probs) {
  if (probs.size() < 2) {
    Fail(ErrorCode::kTooFewCategories, "a channel needs at least 2 inputs");
  }
  const size_t num_outputs = probs[0].size();
  for (const auto& row : probs) {
    if (row.size() != num_outputs) {
      Fail(ErrorCode::kDimensionMismatch, "ragged channel rows");
    }
    double sum = 0.0;
    for (double v : row) {
      if (!(v >= 0.0)) {
        Fail(ErrorCode::kNegativeEntry, "negative channel probability");
      }
      sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
      Fail(ErrorCode::kSumNotOne, "channel row does not sum to 1");
    }
  }
  ChannelMatrix channel;
  channel.k = static_cast<uint32_t>(probs.size());
  channel.probs = std::move(probs);
  for (size_t y = 0; y < num_outputs; ++y) {
    channel.output_labels.push_back("y" + std::to_string(y));
  }
  return channel;
}

double SubsetChannelProb(const MechanismSpec& spec, uint32_t input,
                         const SubsetObservation& obs) {
  if (!spec.is_subset_like()) {
    Fail(ErrorCode::kInvalidArgument, "spec is not a subset mechanism");
  }
  const uint32_t k = spec.k;
  const uint32_t d = spec.d;
  CheckCategory(k, input);
  if (obs.k != k) {
    Fail(ErrorCode::kDimensionMismatch, "observation has wrong k");
  }
  if (obs.members.size() != d) {
    Fail(ErrorCode::kWrongSubsetSize,
         "observation has " + std::to_string(obs.members.size()) +
             " members, expected d=" + std::to_string(d));
  }
  const double exp_eps = spec.budget.exp_epsilon();
  const bool contains =
      std::binary_search(obs.members.begin(), obs.members.end(), input);
  // Branch mass divided by the number of equally likely subsets:
  // included subsets number C(k-1,d-1), the rest C(k-1,d).
  const double branch = contains ? IncludeProb(k, d, exp_eps)
                                 : 1.0 - IncludeProb(k, d, exp_eps);
  if (k <= 50) {
    return branch / ChooseExact(k - 1, contains ? d - 1 : d);
  }
  return std::exp(std::log(branch) - LogChoose(k - 1, contains ? d - 1 : d));
}

double RapporChannelProb(const MechanismSpec& spec, uint32_t input,
                         const BitObservation& obs) {
  if (spec.kind != MechanismSpec::Kind::kRappor) {
    Fail(ErrorCode::kInvalidArgument, "spec is not a rappor mechanism");
  }
  const uint32_t k = spec.k;
  CheckCategory(k, input);
  if (obs.k() != k) {
    Fail(ErrorCode::kDimensionMismatch, "observation has wrong k");
  }
  const double lambda = spec.budget.exp_half_epsilon();
  const double log_keep = std::log(lambda / (1.0 + lambda));
  const double log_flip = std::log(1.0 / (1.0 + lambda));
  double log_prob = 0.0;
  for (uint32_t i = 1; i <= k; ++i) {
    const uint8_t expected = (i == input) ? 1 : 0;
    log_prob += (obs.bits[i - 1] == expected) ? log_keep : log_flip;
  }
  return std::exp(log_prob);
}

SubsetSampler::SubsetSampler(const MechanismSpec& spec)
    : k_(spec.k),
      d_(spec.d),
      include_prob_(IncludeProb(spec.k, spec.d, spec.budget.exp_epsilon())) {
  if (!spec.is_subset_like()) {
    Fail(ErrorCode::kInvalidArgument, "spec is not a subset mechanism");
  }
  pool_.reserve(k_ - 1);
}

void SubsetSampler::Sample(uint32_t input, Rng& rng,
                           std::vector<uint32_t>& members_out) {
  CheckCategory(k_, input);
  const bool include = rng.Bernoulli(include_prob_);
  const uint32_t fill = include ? d_ - 1 : d_;

  pool_.clear();
  for (uint32_t c = 1; c <= k_; ++c) {
    if (c != input) pool_.push_back(c);
  }
  // Choose `fill` distinct categories one by one, each uniform over the
  // remainder: a partial Fisher-Yates shuffle of the pool.
  for (uint32_t j = 0; j < fill; ++j) {
    const uint32_t swap_with =
        j + rng.UniformBelow(static_cast<uint32_t>(pool_.size()) - j);
    std::swap(pool_[j], pool_[swap_with]);
  }

  members_out.assign(pool_.begin(), pool_.begin() + fill);
  if (include) members_out.push_back(input);
  std::sort(members_out.begin(), members_out.end());
}

RapporSampler::RapporSampler(const MechanismSpec& spec) : k_(spec.k) {
  if (spec.kind != MechanismSpec::Kind::kRappor) {
    Fail(ErrorCode::kInvalidArgument, "spec is not a rappor mechanism");
  }
  const double lambda = spec.budget.exp_half_epsilon();
  keep_prob_ = lambda / (1.0 + lambda);
}

void RapporSampler::Sample(uint32_t input, Rng& rng,
                           std::vector<uint8_t>& bits_out) {
  CheckCategory(k_, input);
  bits_out.resize(k_);
  for (uint32_t i = 1; i <= k_; ++i) {
    const bool keep = rng.Bernoulli(keep_prob_);
    const uint8_t expected = (i == input) ? 1 : 0;
    bits_out[i - 1] = keep ? expected : (1 - expected);
  }
}

SubsetObservation SampleSubset(const MechanismSpec& spec, uint32_t input,
                               Rng& rng) {
  SubsetSampler sampler(spec);
  std::vector<uint32_t> members;
  sampler.Sample(input, rng, members);
  return SubsetObservation{spec.k, std::move(members)};
}

BitObservation SampleRappor(const MechanismSpec& spec, uint32_t input,
                            Rng& rng) {
  RapporSampler sampler(spec);
  BitObservation obs;
  sampler.Sample(input, rng, obs.bits);
  return obs;
}

namespace {

std::string SubsetLabel(const std::vector<uint32_t>& members) {
  std::string label;
  for (uint32_t m : members) {
    if (!label.empty()) label += '+';
    label += std::to_string(m);
  }
  return label;
}

// Advances `members` to the next size-d subset of {1..k} in lexicographic
// order; returns false after the last one.
bool NextSubset(uint32_t k, std::vector<uint32_t>& members) {
  const uint32_t d = static_cast<uint32_t>(members.size());
  for (uint32_t i = d; i-- > 0;) {
    if (members[i] < k - (d - 1 - i)) {
      ++members[i];
      for (uint32_t j = i + 1; j < d; ++j) members[j] = members[j - 1] + 1;
      return true;
    }
  }
  return false;
}

ChannelMatrix BuildSubsetChannel(const MechanismSpec& spec) {
  const uint32_t k = spec.k;
  const uint32_t d = spec.d;
  const double count = ChooseCapped(k, d, kMaxAlphabet);
  if (!(count <= kMaxAlphabet)) {
    Fail(ErrorCode::kAlphabetTooLarge,
         "C(k,d) exceeds the enumeration limit of 10^6");
  }

  ChannelMatrix channel;
  channel.k = k;
  channel.probs.assign(k, {});

  std::vector<uint32_t> members(d);
  for (uint32_t i = 0; i < d; ++i) members[i] = i + 1;
  do {
    channel.output_labels.push_back(SubsetLabel(members));
    SubsetObservation obs{k, members};
    for (uint32_t x = 1; x <= k; ++x) {
      channel.probs[x - 1].push_back(SubsetChannelProb(spec, x, obs));
    }
  } while (NextSubset(k, members));
  return channel;
}

ChannelMatrix BuildRapporChannel(const MechanismSpec& spec) {
  const uint32_t k = spec.k;
  if (k >= 20 || (uint64_t{1} << k) > kMaxAlphabet) {
    Fail(ErrorCode::kAlphabetTooLarge,
         "2^k exceeds the enumeration limit of 10^6");
  }
  const uint64_t num_patterns = uint64_t{1} << k;

  ChannelMatrix channel;
  channel.k = k;
  channel.probs.assign(k, {});

  BitObservation obs;
  obs.bits.resize(k);
  for (uint64_t m = 0; m < num_patterns; ++m) {
    std::string label(k, '0');
    for (uint32_t i = 1; i <= k; ++i) {
      obs.bits[i - 1] = static_cast<uint8_t>((m >> (k - i)) & 1);
      label[i - 1] = obs.bits[i - 1] ? '1' : '0';
    }
    channel.output_labels.push_back(label);
    for (uint32_t x = 1; x <= k; ++x) {
      channel.probs[x - 1].push_back(RapporChannelProb(spec, x, obs));
    }
  }
  return channel;
}

}  // namespace

ChannelMatrix BuildChannel(const MechanismSpec& spec) {
  if (spec.kind == MechanismSpec::Kind::kRappor) {
    return BuildRapporChannel(spec);
  }
  return BuildSubsetChannel(spec);
}

uint32_t SubsetRank(uint32_t k, const std::vector<uint32_t>& members) {
  // Count predecessors in lexicographic order: for each position j, the
  // subsets that agree on members[0..j-1] and take a smaller value at j.
  const uint32_t d = static_cast<uint32_t>(members.size());
  uint32_t rank = 0;
  uint32_t prev = 0;
  for (uint32_t j = 0; j < d; ++j) {
    for (uint32_t v = prev + 1; v < members[j]; ++v) {
      rank += static_cast<uint32_t>(ChooseExact(k - v, d - 1 - j));
    }
    prev = members[j];
  }
  return rank;
}

uint32_t BitPatternRank(const BitObservation& obs) {
  uint32_t rank = 0;
  for (uint8_t bit : obs.bits) rank = (rank << 1) | bit;
  return rank;
}

double PrivacyRatio(const ChannelMatrix& channel) {
  double worst = 1.0;
  for (uint32_t y = 0; y < channel.num_outputs(); ++y) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (uint32_t x = 0; x < channel.k; ++x) {
      const double v = channel.probs[x][y];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi == 0.0) continue;  // dead output, carries no information
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, hi / lo);
  }
  return worst;
}

bool CheckLdp(const ChannelMatrix& channel, const PrivacyBudget& budget) {
  return PrivacyRatio(channel) <= budget.exp_epsilon() * (1.0 + 1e-12);
}

bool IsExtremal(const ChannelMatrix& channel, const PrivacyBudget& budget) {
  const double exp_eps = budget.exp_epsilon();
  for (uint32_t y = 0; y < channel.num_outputs(); ++y) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (uint32_t x = 0; x < channel.k; ++x) {
      const double v = channel.probs[x][y];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi == 0.0) continue;
    if (lo == 0.0) return false;
    for (uint32_t x = 0; x < channel.k; ++x) {
      const double normalized = channel.probs[x][y] / lo;
      if (std::fabs(normalized - 1.0) > kExtremalTolerance &&
          std::fabs(normalized - exp_eps) > kExtremalTolerance) {
        return false;
      }
    }
  }
  return true;
}

ConvexDecomposition ConvexVertexDecomposition(const std::vector<double>& v,
                                              const PrivacyBudget& budget) {
  const double exp_eps = budget.exp_epsilon();
  for (double value : v) {
    if (value < 1.0 - kCubeTolerance || value > exp_eps + kCubeTolerance) {
      Fail(ErrorCode::kEntryOutOfCube,
           "entry " + std::to_string(value) + " outside [1, e^eps]");
    }
  }

  ConvexDecomposition result;
  result.vertices.push_back({});
  result.weights.push_back(1.0);

  for (double value : v) {
    // A coordinate already at a vertex extends every term in place; an
    // interior coordinate splits each term in two with the barycentric
    // weights of `value` between 1 and e^eps.
    if (std::fabs(value - 1.0) <= kCubeTolerance) {
      for (auto& vertex : result.vertices) vertex.push_back(1.0);
      continue;
    }
    if (std::fabs(value - exp_eps) <= kCubeTolerance) {
      for (auto& vertex : result.vertices) vertex.push_back(exp_eps);
      continue;
    }
    const double weight_low = (exp_eps - value) / (exp_eps - 1.0);
    const double weight_high = (value - 1.0) / (exp_eps - 1.0);
    const size_t current = result.vertices.size();
    for (size_t j = 0; j < current; ++j) {
      result.vertices.push_back(result.vertices[j]);
      result.vertices.back().push_back(exp_eps);
      result.weights.push_back(result.weights[j] * weight_high);
      result.vertices[j].push_back(1.0);
      result.weights[j] *= weight_low;
    }
  }
  return result;
}

ExtremalizeResult Extremalize(const ChannelMatrix& channel,
                              const PrivacyBudget& budget) {
  if (!CheckLdp(channel, budget)) {
    Fail(ErrorCode::kNotPrivate,
         "channel violates the eps-privacy ratio bound");
  }
  const uint32_t k = channel.k;
  const uint32_t num_outputs = channel.num_outputs();
  if (k >= 20 ||
      (uint64_t{1} << k) * static_cast<uint64_t>(num_outputs) > kMaxAlphabet) {
    Fail(ErrorCode::kAlphabetTooLarge,
         "2^k * L exceeds the enumeration limit of 10^6");
  }
  const double exp_eps = budget.exp_epsilon();

  ExtremalizeResult result;
  result.channel.k = k;
  result.channel.probs.assign(k, {});

  std::vector<double> normalized(k);
  for (uint32_t y = 0; y < num_outputs; ++y) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (uint32_t x = 0; x < k; ++x) {
      lo = std::min(lo, channel.probs[x][y]);
      hi = std::max(hi, channel.probs[x][y]);
    }
    if (hi == 0.0) continue;  // prune dead outputs
    for (uint32_t x = 0; x < k; ++x) {
      // CheckLdp passed, so excursions past e^eps are rounding noise.
      normalized[x] =
          std::clamp(channel.probs[x][y] / lo, 1.0, exp_eps);
    }
    ConvexDecomposition parts = ConvexVertexDecomposition(normalized, budget);
    for (size_t i = 0; i < parts.weights.size(); ++i) {
      const double mass = lo * parts.weights[i];
      if (mass == 0.0) continue;
      result.output_map.push_back(y);
      result.channel.output_labels.push_back(
          channel.output_labels.empty()
              ? std::to_string(y) + "/" + std::to_string(i)
              : channel.output_labels[y] + "/" + std::to_string(i));
      for (uint32_t x = 0; x < k; ++x) {
        result.channel.probs[x].push_back(mass * parts.vertices[i][x]);
      }
    }
  }
  return result;
}

}  // namespace ldp
