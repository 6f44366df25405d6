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
// ldpest: batch CLI over the privatization mechanisms, risk formulas,
// bounds, comparisons, simulations, and verification suites.
//
// Machine-readable JSON/CSV goes to stdout, human-readable notes to stderr.
// Exit codes: 0 ok, 2 usage error, 3 hypothesis violation (the inequality is
// named on stderr), 4 internal oracle mismatch.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ldp/core.h"
#include "ldp/estimation.h"
#include "ldp/io.h"
#include "ldp/mechanisms.h"
#include "ldp/montecarlo.h"
#include "ldp/reference.h"
#include "ldp/risk.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitHypothesis = 3;
constexpr int kExitOracleMismatch = 4;

struct BudgetFlags {
  std::optional<double> epsilon;
  std::optional<double> exp_epsilon;

  void Register(CLI::App* cmd) {
    cmd->add_option("--epsilon", epsilon, "privacy level (natural-log scale)");
    cmd->add_option("--exp-epsilon", exp_epsilon,
                    "privacy level given directly as e^epsilon");
  }

  ldp::PrivacyBudget Resolve() const {
    if (epsilon.has_value() == exp_epsilon.has_value()) {
      ldp::Fail(ldp::ErrorCode::kInvalidArgument,
                "give exactly one of --epsilon / --exp-epsilon");
    }
    return epsilon ? ldp::PrivacyBudget(*epsilon)
                   : ldp::PrivacyBudget::FromExpEpsilon(*exp_epsilon);
  }
};

ldp::MechanismSpec MakeSpec(const std::string& scheme, uint32_t k,
                            std::optional<uint32_t> d,
                            const ldp::PrivacyBudget& budget) {
  if (scheme == "subset") {
    const uint32_t subset_size = d ? *d : ldp::DefaultSubsetSize(k, budget);
    return ldp::MechanismSpec::Subset(k, subset_size, budget);
  }
  if (d) {
    ldp::Fail(ldp::ErrorCode::kInvalidArgument,
              "--d applies only to --scheme subset");
  }
  if (scheme == "rr") return ldp::MechanismSpec::Rr(k, budget);
  if (scheme == "rappor") return ldp::MechanismSpec::Rappor(k, budget);
  ldp::Fail(ldp::ErrorCode::kInvalidArgument, "unknown scheme: " + scheme);
}

void EmitRiskReport(const ldp::RiskReport& report) {
  ldp::JsonWriter json;
  json.BeginObject()
      .Key("scheme")
      .Value(report.scheme)
      .Key("loss")
      .Value(ldp::LossKindName(report.loss))
      .Key("n")
      .Value(report.n)
      .Key("value")
      .Value(report.value)
      .Key("flavor")
      .Value(ldp::RiskFlavorName(report.flavor))
      .Key("worst_case")
      .Value(report.worst_case)
      .Key("formula")
      .Value(report.formula)
      .EndObject();
  std::cout << json.str() << "\n";
  if (report.flavor == ldp::RiskFlavor::kAsymptoticLeading) {
    std::cerr << "note: l1 value is the leading 1/sqrt(n) term; the"
                 " o(1/sqrt(n)) remainder is not included\n";
  }
}

int CmdRisk(const std::string& scheme, uint32_t k, std::optional<uint32_t> d,
            const ldp::PrivacyBudget& budget, uint64_t n,
            const std::string& loss_name, const std::string& dist) {
  const ldp::LossKind loss = ldp::LossKindFromName(loss_name);
  if (scheme == "rappor") {
    if (dist != "uniform") {
      ldp::Fail(ldp::ErrorCode::kInvalidArgument,
                "rappor risk formulas cover the worst-case (uniform) "
                "distribution only");
    }
    const ldp::RapporRisks risks = ldp::RapporWorstCaseRisks(k, budget, n);
    EmitRiskReport(loss == ldp::LossKind::kL2Squared ? risks.l22 : risks.l1);
    return kExitOk;
  }
  const ldp::MechanismSpec spec = MakeSpec(scheme, k, d, budget);
  const ldp::ProbabilityVector p = ldp::LoadDistribution(dist, k);
  ldp::RiskReport report =
      loss == ldp::LossKind::kL2Squared
          ? ldp::SubsetL22Risk(k, spec.d, budget, n, p)
          : ldp::SubsetL1RiskAsymptotic(k, spec.d, budget, n, p);
  if (scheme == "rr") {
    // The formulas are shared with subset(k,1); label the report with the
    // scheme the caller asked for.
    char eps[32];
    std::snprintf(eps, sizeof(eps), "%.12g", budget.epsilon());
    report.scheme = "rr(k=" + std::to_string(k) + ",epsilon=" + eps + ")";
  }
  EmitRiskReport(report);
  return kExitOk;
}

int CmdSelectD(uint32_t k, const ldp::PrivacyBudget& budget,
               const std::string& loss_name) {
  const ldp::SelectDResult result =
      ldp::SelectD(k, budget, ldp::LossKindFromName(loss_name));
  ldp::JsonWriter json;
  json.BeginObject()
      .Key("k")
      .Value(k)
      .Key("epsilon")
      .Value(budget.epsilon())
      .Key("loss")
      .Value(loss_name)
      .Key("d_star")
      .Value(result.d_star)
      .Key("candidates")
      .BeginArray()
      .Value(result.candidate_floor)
      .Value(result.candidate_ceil)
      .EndArray()
      .Key("objectives")
      .BeginArray()
      .Value(result.objective_floor)
      .Value(result.objective_ceil)
      .EndArray()
      .EndObject();
  std::cout << json.str() << "\n";
  return kExitOk;
}

void EmitCertificate(const ldp::BoundsCertificate& cert,
                     ldp::JsonWriter& json) {
  json.BeginObject()
      .Key("k")
      .Value(cert.k)
      .Key("epsilon")
      .Value(cert.epsilon)
      .Key("n")
      .Value(cert.n)
      .Key("lower")
      .Value(cert.lower)
      .Key("exact_worst_case")
      .Value(cert.exact_worst_case)
      .Key("upper")
      .Value(cert.upper)
      .Key("formula")
      .Value(ldp::LossKindName(cert.loss) + "-sandwich")
      .EndObject();
}

int CmdBounds(uint32_t k, const ldp::PrivacyBudget& budget, uint64_t n,
              const std::string& loss_name, bool grid, uint32_t grid_k_max) {
  const ldp::LossKind loss = ldp::LossKindFromName(loss_name);
  if (!grid) {
    const ldp::BoundsCertificate cert =
        ldp::MakeBoundsCertificate(k, budget, n, loss);
    ldp::JsonWriter json;
    EmitCertificate(cert, json);
    std::cout << json.str() << "\n";
    return kExitOk;
  }
  // Grid mode: every k up to --k-max for which the hypotheses hold, with n
  // set to 10x the lower-bound threshold.
  std::cout << "k,epsilon,n,lower,exact_worst_case,upper,formula\n";
  for (uint32_t kk = 2; kk <= grid_k_max; ++kk) {
    if (kk < 4 || static_cast<double>(kk) < budget.exp_epsilon() + 1.0) {
      continue;
    }
    const uint64_t grid_n = static_cast<uint64_t>(
        std::ceil(10.0 * ldp::LowerBoundThreshold(kk, budget)));
    const ldp::BoundsCertificate cert =
        ldp::MakeBoundsCertificate(kk, budget, grid_n, loss);
    std::cout << kk << ',' << ldp::JsonWriter::FormatDouble(cert.epsilon)
              << ',' << grid_n << ','
              << ldp::JsonWriter::FormatDouble(cert.lower) << ','
              << ldp::JsonWriter::FormatDouble(cert.exact_worst_case) << ','
              << ldp::JsonWriter::FormatDouble(cert.upper) << ','
              << ldp::LossKindName(cert.loss) << "-sandwich\n";
  }
  return kExitOk;
}

int CmdCompare(uint32_t k, const ldp::PrivacyBudget& budget, uint64_t n) {
  const ldp::SchemeComparison cmp = ldp::CompareSchemes(k, budget, n);
  const std::string status =
      !cmp.in_medium_regime ? "NOT-APPLICABLE" : (cmp.pass ? "PASS" : "FAIL");
  ldp::JsonWriter json;
  json.BeginObject()
      .Key("k")
      .Value(cmp.k)
      .Key("epsilon")
      .Value(cmp.epsilon)
      .Key("n")
      .Value(cmp.n)
      .Key("d_opt")
      .Value(cmp.d_opt)
      .Key("bound_ratios")
      .BeginObject()
      .Key("l22_vs_rappor")
      .Value(cmp.bound_l22_vs_rappor)
      .Key("l22_vs_rr")
      .Value(cmp.bound_l22_vs_rr)
      .Key("l1_vs_rappor")
      .Value(cmp.bound_l1_vs_rappor)
      .Key("l1_vs_rr")
      .Value(cmp.bound_l1_vs_rr)
      .EndObject()
      .Key("exact_ratios")
      .BeginObject()
      .Key("l22_vs_rappor")
      .Value(cmp.exact_l22_vs_rappor)
      .Key("l22_vs_rr")
      .Value(cmp.exact_l22_vs_rr)
      .Key("l1_vs_rappor")
      .Value(cmp.exact_l1_vs_rappor)
      .Key("l1_vs_rr")
      .Value(cmp.exact_l1_vs_rr)
      .EndObject()
      .Key("status")
      .Value(status)
      .EndObject();
  std::cout << json.str() << "\n";
  if (!cmp.in_medium_regime) {
    std::cerr << "note: outside the medium-privacy regime (epsilon > 3.8 and "
                 "k > 9 e^epsilon); thresholds not claimed\n";
  }
  return kExitOk;
}

int CmdSimulate(const ldp::MechanismSpec& spec, const std::string& dist,
                uint64_t n, uint64_t trials, uint64_t seed, unsigned threads) {
  ldp::SimulationPlan plan{spec, ldp::LoadDistribution(dist, spec.k),
                           n,    trials,
                           seed, true,
                           true, false};
  const ldp::SimulationResult result = ldp::Simulate(plan, threads);
  ldp::JsonWriter json;
  json.BeginObject()
      .Key("scheme")
      .Value(spec.KindName())
      .Key("k")
      .Value(spec.k);
  json.Key("d");
  if (spec.is_subset_like()) {
    json.Value(spec.d);
  } else {
    json.Null();
  }
  json.Key("epsilon")
      .Value(spec.budget.epsilon())
      .Key("n")
      .Value(n)
      .Key("trials")
      .Value(trials)
      .Key("seed")
      .Value(seed)
      .Key("losses")
      .BeginObject()
      .Key("l1")
      .BeginObject()
      .Key("mean")
      .Value(result.l1.mean)
      .Key("stderr")
      .Value(result.l1.stderr_of_mean)
      .EndObject()
      .Key("l22")
      .BeginObject()
      .Key("mean")
      .Value(result.l22.mean)
      .Key("stderr")
      .Value(result.l22.stderr_of_mean)
      .EndObject()
      .EndObject()
      .EndObject();
  std::cout << json.str() << "\n";
  return kExitOk;
}

int CmdSample(const ldp::MechanismSpec& spec, uint32_t input, uint64_t draws,
              uint64_t seed) {
  ldp::Rng rng(seed);
  ldp::JsonWriter json;
  json.BeginObject()
      .Key("scheme")
      .Value(spec.KindName())
      .Key("k")
      .Value(spec.k);
  json.Key("d");
  if (spec.is_subset_like()) {
    json.Value(spec.d);
  } else {
    json.Null();
  }
  json.Key("epsilon")
      .Value(spec.budget.epsilon())
      .Key("input")
      .Value(input)
      .Key("draws")
      .Value(draws)
      .Key("seed")
      .Value(seed)
      .Key("observations")
      .BeginArray();
  if (spec.kind == ldp::MechanismSpec::Kind::kRappor) {
    ldp::RapporSampler sampler(spec);
    std::vector<uint8_t> bits;
    for (uint64_t i = 0; i < draws; ++i) {
      sampler.Sample(input, rng, bits);
      std::string pattern(spec.k, '0');
      for (uint32_t j = 0; j < spec.k; ++j) {
        pattern[j] = bits[j] ? '1' : '0';
      }
      json.Value(pattern);
    }
  } else {
    ldp::SubsetSampler sampler(spec);
    std::vector<uint32_t> members;
    for (uint64_t i = 0; i < draws; ++i) {
      sampler.Sample(input, rng, members);
      json.BeginArray();
      for (uint32_t m : members) json.Value(m);
      json.EndArray();
    }
  }
  json.EndArray().EndObject();
  std::cout << json.str() << "\n";
  return kExitOk;
}

int CmdEstimate(const ldp::MechanismSpec& spec, const std::string& counts_csv,
                uint64_t n, bool clip) {
  const std::vector<double> raw = ldp::ParseNumberList(counts_csv);
  if (raw.size() != spec.k) {
    ldp::Fail(ldp::ErrorCode::kDimensionMismatch,
              "--counts needs exactly k values");
  }
  std::vector<uint64_t> tallies(spec.k);
  for (uint32_t i = 0; i < spec.k; ++i) {
    if (raw[i] < 0 || raw[i] != std::floor(raw[i])) {
      ldp::Fail(ldp::ErrorCode::kInvalidArgument,
                "--counts entries must be nonnegative integers");
    }
    tallies[i] = static_cast<uint64_t>(raw[i]);
  }
  const ldp::CountVector counts =
      ldp::CountVector::FromTotals(spec.k, n, std::move(tallies));
  const ldp::EstimateVector estimate =
      ldp::PreparedEstimator(spec).Estimate(counts);
  const ldp::EstimateVector output =
      clip ? ldp::ClipToUnitCube(estimate) : estimate;
  ldp::JsonWriter json;
  json.BeginObject()
      .Key("scheme")
      .Value(spec.KindName())
      .Key("k")
      .Value(spec.k)
      .Key("n")
      .Value(n)
      .Key("clipped")
      .Value(clip)
      .Key("estimate")
      .BeginArray();
  for (double v : output.entries()) json.Value(v);
  json.EndArray().EndObject();
  std::cout << json.str() << "\n";
  return kExitOk;
}

int CmdChannel(const ldp::MechanismSpec& spec) {
  ldp::WriteChannelCsv(ldp::BuildChannel(spec), std::cout);
  return kExitOk;
}

int CmdVerify(const std::string& suite, unsigned threads) {
  ldp::SuiteReport report;
  if (suite == "channels") {
    report = ldp::VerifyChannels(threads);
  } else if (suite == "risks") {
    report = ldp::VerifyRisks();
  } else if (suite == "select-d") {
    report = ldp::VerifySelectD();
  } else if (suite == "extremal") {
    report = ldp::VerifyExtremal();
  } else if (suite == "lemimp") {
    report = ldp::VerifyColumnBound();
  } else {
    ldp::Fail(ldp::ErrorCode::kInvalidArgument, "unknown suite: " + suite);
  }
  ldp::JsonWriter json;
  json.BeginObject()
      .Key("suite")
      .Value(report.suite)
      .Key("passed")
      .Value(report.passed)
      .Key("max_deviation")
      .Value(report.max_deviation)
      .Key("detail")
      .Value(report.detail)
      .EndObject();
  std::cout << json.str() << "\n";
  std::cerr << (report.passed ? "PASS " : "FAIL ") << report.suite << ": "
            << report.detail << "\n";
  return report.passed ? kExitOk : kExitOracleMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locally differentially private discrete distribution "
               "estimation toolkit"};
  app.require_subcommand(1);

  // Common flag storage. Each subcommand registers only what it uses.
  std::string scheme = "subset";
  uint32_t k = 0;
  std::optional<uint32_t> d;
  BudgetFlags budget_flags;
  uint64_t n = 1;
  uint64_t trials = 1;
  uint64_t seed = 0;
  uint64_t draws = 1;
  uint32_t input = 1;
  unsigned threads = 0;
  std::string loss_name = "l22";
  std::string dist = "uniform";
  std::string counts_csv;
  std::string suite;
  bool clip = false;
  bool grid = false;
  uint32_t grid_k_max = 32;

  const auto add_scheme = [&](CLI::App* cmd, bool with_d = true) {
    cmd->add_option("--scheme", scheme, "subset | rr | rappor")
        ->check(CLI::IsMember({"subset", "rr", "rappor"}));
    cmd->add_option("--k", k, "number of categories")->required();
    if (with_d) {
      cmd->add_option("--d", d,
                      "subset size (default ceil(k/(e^epsilon+1)))");
    }
    budget_flags.Register(cmd);
  };

  CLI::App* risk_cmd = app.add_subcommand("risk", "closed-form risk");
  add_scheme(risk_cmd);
  risk_cmd->add_option("--n", n, "sample size")->required();
  risk_cmd->add_option("--loss", loss_name, "l1 | l22")
      ->check(CLI::IsMember({"l1", "l22"}));
  risk_cmd->add_option("--dist", dist, "'uniform', inline CSV, or a file");

  CLI::App* select_cmd =
      app.add_subcommand("select-d", "optimal subset size");
  select_cmd->add_option("--k", k, "number of categories")->required();
  budget_flags.Register(select_cmd);
  select_cmd->add_option("--loss", loss_name, "l1 | l22")
      ->check(CLI::IsMember({"l1", "l22"}));

  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "lower/exact/upper certificate");
  bounds_cmd->add_option("--k", k, "number of categories")->required();
  budget_flags.Register(bounds_cmd);
  bounds_cmd->add_option("--n", n, "sample size");
  bounds_cmd->add_option("--loss", loss_name, "l1 | l22")
      ->check(CLI::IsMember({"l1", "l22"}));
  bounds_cmd->add_flag("--grid", grid, "emit a CSV grid of certificates");
  bounds_cmd->add_option("--k-max", grid_k_max, "grid upper end for k");

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "scheme comparison ratios");
  compare_cmd->add_option("--k", k, "number of categories")->required();
  budget_flags.Register(compare_cmd);
  compare_cmd->add_option("--n", n, "sample size");

  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Monte Carlo loss estimate");
  add_scheme(simulate_cmd);
  simulate_cmd->add_option("--n", n, "samples per trial")->required();
  simulate_cmd->add_option("--trials", trials, "independent trials")
      ->required();
  simulate_cmd->add_option("--seed", seed, "master seed");
  simulate_cmd->add_option("--dist", dist, "'uniform', inline CSV, or a file");
  simulate_cmd->add_option("--threads", threads,
                           "worker cap (0 = hardware, never affects values)");

  CLI::App* sample_cmd =
      app.add_subcommand("sample", "draw privatized observations");
  add_scheme(sample_cmd);
  sample_cmd->add_option("--input", input, "true category in {1..k}")
      ->required();
  sample_cmd->add_option("--draws", draws, "number of observations");
  sample_cmd->add_option("--seed", seed, "master seed");

  CLI::App* estimate_cmd =
      app.add_subcommand("estimate", "invert accumulated counts");
  add_scheme(estimate_cmd);
  estimate_cmd
      ->add_option("--counts", counts_csv, "comma-separated T_1..T_k")
      ->required();
  estimate_cmd->add_option("--n", n, "observations behind the counts")
      ->required();
  estimate_cmd->add_flag("--clip", clip, "clip the estimate to [0,1]^k");

  CLI::App* channel_cmd =
      app.add_subcommand("channel", "emit the channel matrix as CSV");
  add_scheme(channel_cmd);

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run a verification suite");
  verify_cmd
      ->add_option("--suite", suite,
                   "channels | risks | select-d | extremal | lemimp")
      ->required()
      ->check(CLI::IsMember(
          {"channels", "risks", "select-d", "extremal", "lemimp"}));
  verify_cmd->add_option("--threads", threads, "worker cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (risk_cmd->parsed()) {
      return CmdRisk(scheme, k, d, budget_flags.Resolve(), n, loss_name, dist);
    }
    if (select_cmd->parsed()) {
      return CmdSelectD(k, budget_flags.Resolve(), loss_name);
    }
    if (bounds_cmd->parsed()) {
      return CmdBounds(k, budget_flags.Resolve(), n, loss_name, grid,
                       grid_k_max);
    }
    if (compare_cmd->parsed()) {
      return CmdCompare(k, budget_flags.Resolve(), n);
    }
    if (simulate_cmd->parsed()) {
      return CmdSimulate(MakeSpec(scheme, k, d, budget_flags.Resolve()), dist,
                         n, trials, seed, threads);
    }
    if (sample_cmd->parsed()) {
      return CmdSample(MakeSpec(scheme, k, d, budget_flags.Resolve()), input,
                       draws, seed);
    }
    if (estimate_cmd->parsed()) {
      return CmdEstimate(MakeSpec(scheme, k, d, budget_flags.Resolve()),
                         counts_csv, n, clip);
    }
    if (channel_cmd->parsed()) {
      return CmdChannel(MakeSpec(scheme, k, d, budget_flags.Resolve()));
    }
    if (verify_cmd->parsed()) {
      return CmdVerify(suite, threads);
    }
  } catch (const ldp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == ldp::ErrorCode::kHypothesisViolated ||
        e.code() == ldp::ErrorCode::kSampleSizeTooSmall) {
      return kExitHypothesis;
    }
    return kExitUsage;
  }
  return kExitUsage;
}
