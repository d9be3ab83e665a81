// Copyright 2026 The PEON Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "peon/error.h"
#include "peon/io.h"
#include "peon/numerics.h"
#include "peon/probability.h"
#include "peon/rng.h"
#include "peon/sampling.h"
#include "peon/simulator.h"
#include "peon/statistics.h"

namespace peon::cli {
namespace {

using Json = nlohmann::ordered_json;

struct Config {
  std::string peon;
  double alpha = 0.2;
  double power = 0.8;
  double rel_tol = 0.1;
  std::uint64_t seed = 0;
  std::uint64_t cap = kDefaultEnumerationCap;
};

// Defaults from the JSON file named by PEON_CONFIG, if any.
Config LoadConfig() {
  Config c;
  const char* path = std::getenv("PEON_CONFIG");
  if (path == nullptr || *path == '\0') return c;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("config: ") + e.what());
  }
  if (j.contains("peon")) c.peon = j.at("peon").get<std::string>();
  if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
  if (j.contains("power")) c.power = j.at("power").get<double>();
  if (j.contains("rel_tol")) c.rel_tol = j.at("rel_tol").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("cap")) c.cap = j.at("cap").get<std::uint64_t>();
  return c;
}

void Diagnose(std::ostream& err, std::string_view code, const std::string& message) {
  Json d;
  d["error"] = std::string(code);
  d["message"] = message;
  err << d.dump() << '\n';
}

void Emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kParseError, "cannot write '" + path + "'");
  f << text;
}

template <typename Writer>
std::string Render(Writer&& write) {
  std::ostringstream ss;
  write(ss);
  return ss.str();
}

std::string RequirePath(const std::string& given, const std::string& fallback, const char* what) {
  if (!given.empty()) return given;
  if (!fallback.empty()) return fallback;
  throw Error(ErrorCode::kInvalidArgument, std::string("missing ") + what + " (argument or PEON_CONFIG)");
}

std::map<std::uint64_t, std::int64_t> ReadObserved(const std::string& path, const Ontology& o) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open '" + path + "'");
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    std::map<std::uint64_t, std::int64_t> counts;
    const CampaignResult campaign = ReadCampaignCsv(in);
    for (const auto& [flat, c] : campaign.partitions())
      if (c.executed > 0) counts[flat] = c.executed;
    return counts;
  }
  return ReadSuiteJsonl(in, o).Counts();
}

struct Common {
  std::string output;
  std::string format;
  std::uint64_t seed = 0;
  std::uint64_t cap = kDefaultEnumerationCap;
};

void AddCommon(CLI::App* sub, Common& c, const Config& cfg, const std::string& default_format,
               std::vector<std::string> formats) {
  c.seed = cfg.seed;
  c.cap = cfg.cap;
  c.format = default_format;
  sub->add_option("-o,--output", c.output, "Output file (default: standard output)");
  sub->add_option("--seed", c.seed, "Master seed");
  sub->add_option("--cap", c.cap, "Enumeration cap for dense materialization");
  if (!formats.empty())
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember(formats));
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  try {
    cfg = LoadConfig();
  } catch (const Error& e) {
    Diagnose(err, ErrorCodeName(e.code()), e.what());
    return kExitUsage;
  }

  CLI::App app{"Probabilistic ontology test planning and generation", "peon"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // validate
  Common validate_c;
  std::string validate_peon;
  bool describe = false;
  auto* validate = app.add_subcommand("validate", "Validate an ontology or PEON document");
  validate->add_option("peon", validate_peon, "Ontology / PEON JSON");
  validate->add_flag("--describe", describe, "Print the materialized phi table");
  AddCommon(validate, validate_c, cfg, "json", {"json", "csv"});

  // plan
  Common plan_c;
  double p0 = 0.0;
  double alpha = cfg.alpha;
  double power = cfg.power;
  double rel_tol = cfg.rel_tol;
  bool one_sided = false;
  bool two_sided = false;
  auto* plan = app.add_subcommand("plan", "Exact binomial sample-size plan");
  plan->add_option("--p0", p0, "Claimed failure probability")->required();
  plan->add_option("--rel-tol", rel_tol, "Relative tolerance");
  plan->add_option("--alpha", alpha, "Size of the test");
  plan->add_option("--power", power, "Power at p0 * (1 + rel_tol)");
  auto* one_flag = plan->add_flag("--one-sided", one_sided, "One-sided upper test");
  plan->add_flag("--two-sided", two_sided, "Two-sided test (default)")->excludes(one_flag);
  AddCommon(plan, plan_c, cfg, "json", {});

  // sample
  Common sample_c;
  std::string sample_peon;
  std::int64_t count = 0;
  std::string strategy = "peon_random";
  std::string allocation_path;
  auto* sample = app.add_subcommand("sample", "Sample abstract test cases");
  sample->add_option("peon", sample_peon, "PEON JSON");
  sample->add_option("--count", count, "Number of cases");
  sample->add_option("--strategy", strategy, "Sampling strategy")
      ->check(CLI::IsMember({"peon_random", "uniform_random", "marginal_only"}));
  sample->add_option("--allocation", allocation_path, "Allocation JSON for a stratified suite");
  AddCommon(sample, sample_c, cfg, "jsonl", {"jsonl", "csv"});

  // nwise
  Common nwise_c;
  std::string nwise_peon;
  int nwise_n = 2;
  bool exclude_impossible = false;
  bool fill = false;
  int candidates = 20;
  auto* nwise = app.add_subcommand("nwise", "Greedy N-wise covering suite");
  nwise->add_option("peon", nwise_peon, "Ontology / PEON JSON");
  nwise->add_option("-n,--n", nwise_n, "Interaction strength N")->check(CLI::PositiveNumber);
  nwise->add_flag("--exclude-impossible", exclude_impossible, "Drop partitions with phi = 0");
  nwise->add_flag("--fill", fill, "Redraw don't-care classes from the PEON");
  nwise->add_option("--candidates", candidates, "Candidate rows per step")->check(CLI::PositiveNumber);
  AddCommon(nwise, nwise_c, cfg, "jsonl", {"jsonl", "csv"});

  // allocate
  Common allocate_c;
  std::string allocate_peon;
  std::int64_t budget = 0;
  std::string method = "neyman";
  std::string pilot_path;
  double mu_claimed = 0.05;
  bool use_estimate = false;
  std::string form = "variance";
  auto* allocate = app.add_subcommand("allocate", "Allocate a test budget over partitions");
  allocate->add_option("peon", allocate_peon, "PEON JSON");
  allocate->add_option("--budget", budget, "Total number of tests")->required()->check(CLI::NonNegativeNumber);
  allocate->add_option("--method", method, "Allocation method")
      ->check(CLI::IsMember({"neyman", "proportional", "uniform"}));
  allocate->add_option("--campaign", pilot_path, "Pilot campaign CSV for per-partition rates");
  allocate->add_option("--mu-claimed", mu_claimed, "Claimed failure rate");
  allocate->add_flag("--use-estimate", use_estimate, "Use the stratified estimate instead of the claim");
  allocate->add_option("--form", form, "Neyman score form")->check(CLI::IsMember({"variance", "sd"}));
  AddCommon(allocate, allocate_c, cfg, "json", {"json", "csv"});

  // evaluate
  Common evaluate_c;
  std::string plan_path;
  std::string campaign_path;
  std::string evaluate_peon;
  auto* evaluate = app.add_subcommand("evaluate", "Check a campaign against a plan");
  evaluate->add_option("--plan", plan_path, "Plan JSON")->required();
  evaluate->add_option("--campaign", campaign_path, "Campaign CSV")->required();
  evaluate->add_option("--peon", evaluate_peon, "PEON JSON for the stratified estimate");
  AddCommon(evaluate, evaluate_c, cfg, "json", {});

  // balance
  Common balance_c;
  std::string balance_peon;
  std::string observed_path;
  double significance = 0.001;
  std::string rank_class;
  auto* balance = app.add_subcommand("balance", "Chi-squared balance test of a sample against the PEON");
  balance->add_option("peon", balance_peon, "PEON JSON");
  balance->add_option("--observed", observed_path, "Suite JSONL or campaign CSV")->required();
  balance->add_option("--significance", significance, "Test significance")->check(CLI::Range(0.0, 1.0));
  balance->add_option("--rank-test", rank_class, "Also run Mann-Whitney U on this class's ranks");
  AddCommon(balance, balance_c, cfg, "json", {});

  // simulate
  Common simulate_c;
  std::string simulate_peon;
  std::string sut_path;
  std::string suite_path;
  std::int64_t simulate_count = 0;
  std::string simulate_plan;
  auto* simulate = app.add_subcommand("simulate", "Run a suite against a synthetic SUT");
  simulate->add_option("peon", simulate_peon, "PEON JSON");
  simulate->add_option("--sut", sut_path, "SUT profile JSON")->required();
  auto* suite_opt = simulate->add_option("--suite", suite_path, "Suite JSONL");
  simulate->add_option("--count", simulate_count, "Sample this many PEON cases instead")->excludes(suite_opt);
  simulate->add_option("--plan", simulate_plan, "Sample n_required PEON cases from this plan")
      ->excludes(suite_opt);
  AddCommon(simulate, simulate_c, cfg, "csv", {});

  // compare
  Common compare_c;
  std::string compare_peon;
  std::string experiment_path;
  int replications = 0;
  auto* compare = app.add_subcommand("compare", "Strategy comparison experiment");
  compare->add_option("peon", compare_peon, "PEON JSON");
  compare->add_option("--experiment", experiment_path, "Experiment JSON")->required();
  compare->add_option("--replications", replications, "Override the replication count");
  AddCommon(compare, compare_c, cfg, "json", {"json", "csv"});

  // audit-uniformity
  Common audit_c;
  std::string audit_peon;
  std::vector<std::string> protected_classes;
  double tol = 0.05;
  auto* audit = app.add_subcommand("audit-uniformity", "Compare protected class marginals to uniform");
  audit->add_option("peon", audit_peon, "PEON JSON");
  audit->add_option("--classes", protected_classes, "Protected classes")->required()->delimiter(',');
  audit->add_option("--tol", tol, "Maximum absolute deviation");
  AddCommon(audit, audit_c, cfg, "json", {});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    Diagnose(err, "UsageError", e.what());
    return kExitUsage;
  }

  auto load = [&](const std::string& given) { return LoadPeon(RequirePath(given, cfg.peon, "PEON document")); };

  // Commands other than validate and plan map every library error to 2.
  int error_exit = kExitUsage;
  try {
    if (validate->parsed()) {
      error_exit = kExitFail;
      const Peon peon = load(validate_peon);
      const std::uint64_t space = peon.ontology->SpaceSize();
      if (peon.joint && space <= validate_c.cap) {
        const auto table = peon.joint->DenseTable(validate_c.cap);
        double total = 0.0;
        for (double p : table) total += p;
        if (std::abs(total - 1.0) > kDenseNormalizationTolerance)
          throw Error(ErrorCode::kUnnormalized, "joint sums to " + std::to_string(total));
      }
      if (describe) {
        Emit(validate_c.format == "csv"
                 ? Render([&](std::ostream& s) { WriteDescribeCsv(s, peon, validate_c.cap); })
                 : DescribeJson(peon, validate_c.cap),
             validate_c.output, out);
      } else {
        Json summary;
        summary["valid"] = true;
        summary["classes"] = peon.ontology->class_count();
        summary["partitions"] = space;
        summary["has_distribution"] = peon.joint.has_value();
        Emit(summary.dump(2) + "\n", validate_c.output, out);
      }
      return kExitOk;
    }

    if (plan->parsed()) {
      const Sidedness side = one_sided ? Sidedness::kOneSidedUpper : Sidedness::kTwoSided;
      try {
        Emit(PlanToJson(PlanBernoulli(p0, rel_tol, alpha, power, side)), plan_c.output, out);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kInfeasibleTolerance || e.code() == ErrorCode::kNonConvergence) {
          Diagnose(err, ErrorCodeName(e.code()), e.what());
          return kExitFail;
        }
        throw;
      }
      return kExitOk;
    }

    if (sample->parsed()) {
      const Peon peon = load(sample_peon);
      TestSuite suite;
      if (!allocation_path.empty()) {
        suite = StratifiedSuite(*peon.ontology, AllocationFromJson(ReadFile(allocation_path)), sample_c.seed);
      } else {
        if (count < 1) throw Error(ErrorCode::kInvalidArgument, "--count must be >= 1");
        if (strategy == "uniform_random") suite = SampleUniform(*peon.ontology, count, sample_c.seed);
        else if (strategy == "marginal_only") suite = SampleMarginalOnly(peon.RequireJoint(), count, sample_c.seed);
        else suite = SampleAbstract(peon.RequireJoint(), count, sample_c.seed);
      }
      Emit(Render([&](std::ostream& s) {
             if (sample_c.format == "csv") WriteSuiteCsv(s, *peon.ontology, suite);
             else WriteSuiteJsonl(s, *peon.ontology, suite);
           }),
           sample_c.output, out);
      return kExitOk;
    }

    if (nwise->parsed()) {
      const Peon peon = load(nwise_peon);
      NwiseOptions options;
      options.candidates = candidates;
      options.exclude_impossible = exclude_impossible;
      options.fill_from_joint = fill;
      options.cap = nwise_c.cap;
      if (exclude_impossible || fill) options.joint = &peon.RequireJoint();
      const TestSuite suite = NwiseSuite(*peon.ontology, nwise_n, nwise_c.seed, options);
      Emit(Render([&](std::ostream& s) {
             if (nwise_c.format == "csv") WriteSuiteCsv(s, *peon.ontology, suite);
             else WriteSuiteJsonl(s, *peon.ontology, suite);
           }),
           nwise_c.output, out);
      return kExitOk;
    }

    if (allocate->parsed()) {
      const Peon peon = load(allocate_peon);
      const std::vector<double> phi = peon.RequireJoint().DenseTable(allocate_c.cap);
      Allocation a;
      if (method == "proportional") {
        a = ProportionalAllocation(phi, budget);
      } else if (method == "uniform") {
        a = UniformAllocation(phi, budget);
      } else {
        std::vector<double> mu(phi.size(), mu_claimed);
        double claim = mu_claimed;
        if (!pilot_path.empty()) {
          std::ifstream in(pilot_path, std::ios::binary);
          if (!in) throw Error(ErrorCode::kParseError, "cannot open '" + pilot_path + "'");
          const CampaignResult pilot = ReadCampaignCsv(in);
          const StratifiedEstimate est = EstimateStratified(pilot, phi);
          mu = est.mu_i;
          if (use_estimate) claim = est.mu;
        } else if (use_estimate) {
          throw Error(ErrorCode::kInvalidArgument, "--use-estimate needs --campaign");
        }
        a = NeymanAllocation(phi, mu, claim, budget, form == "sd" ? NeymanForm::kStandardDeviation : NeymanForm::kVariance);
      }
      Emit(allocate_c.format == "csv" ? Render([&](std::ostream& s) { WriteAllocationCsv(s, a); })
                                      : AllocationToJson(a),
           allocate_c.output, out);
      return kExitOk;
    }

    if (evaluate->parsed()) {
      const TestPlan tp = PlanFromJson(ReadFile(plan_path));
      std::ifstream in(campaign_path, std::ios::binary);
      if (!in) throw Error(ErrorCode::kParseError, "cannot open '" + campaign_path + "'");
      const CampaignResult r = ReadCampaignCsv(in);
      std::optional<StratifiedEstimate> est;
      if (!evaluate_peon.empty()) {
        const Peon peon = LoadPeon(evaluate_peon);
        est = EstimateStratified(r, peon.RequireJoint().DenseTable(evaluate_c.cap));
      }
      const ClaimReport report = EvaluateClaim(tp, r);
      Emit(ClaimReportToJson(report, tp, est), evaluate_c.output, out);
      return report.decision == Decision::kConfirmed ? kExitOk : kExitFail;
    }

    if (balance->parsed()) {
      const Peon peon = load(balance_peon);
      const JointDistribution& j = peon.RequireJoint();
      const auto observed = ReadObserved(observed_path, *peon.ontology);
      const BalanceResult b = Chi2Balance(observed, j.DenseTable(balance_c.cap), significance);
      std::optional<MannWhitneyResult> rank;
      if (!rank_class.empty()) {
        const std::size_t ci = peon.ontology->ClassIndex(rank_class);
        std::vector<double> a;
        for (const auto& [flat, n] : observed)
          a.insert(a.end(), static_cast<std::size_t>(n), Decode(*peon.ontology, flat).coords[ci]);
        const TestSuite ref = SampleAbstract(j, static_cast<std::int64_t>(a.size()), balance_c.seed);
        std::vector<double> r;
        for (const auto& c : ref.cases) r.push_back(c.partition.coords[ci]);
        rank = MannWhitneyU(a, r);
      }
      Emit(BalanceToJson(b, rank, rank_class), balance_c.output, out);
      const bool pass = b.pass && (!rank || rank->p_value >= significance);
      return pass ? kExitOk : kExitFail;
    }

    if (simulate->parsed()) {
      const Peon peon = load(simulate_peon);
      const JointDistribution& j = peon.RequireJoint();
      const SyntheticSut sut = MakeSut(j, SutProfileFromJson(ReadFile(sut_path)), simulate_c.cap);
      TestSuite suite;
      if (!suite_path.empty()) {
        std::ifstream in(suite_path, std::ios::binary);
        if (!in) throw Error(ErrorCode::kParseError, "cannot open '" + suite_path + "'");
        suite = ReadSuiteJsonl(in, *peon.ontology);
      } else {
        std::int64_t n = simulate_count;
        if (!simulate_plan.empty()) n = PlanFromJson(ReadFile(simulate_plan)).n_required;
        if (n < 1) throw Error(ErrorCode::kInvalidArgument, "simulate needs --suite, --count or --plan");
        suite = SampleAbstract(j, n, DeriveSeed(simulate_c.seed, {kStreamSample}));
      }
      const CampaignResult r = RunCampaign(sut, suite, simulate_c.seed);
      Emit(Render([&](std::ostream& s) { WriteCampaignCsv(s, r); }), simulate_c.output, out);
      return kExitOk;
    }

    if (compare->parsed()) {
      const Peon peon = load(compare_peon);
      const JointDistribution& j = peon.RequireJoint();
      ExperimentSpec e = ExperimentFromJson(ReadFile(experiment_path));
      if (replications > 0) e.replications = replications;
      const SyntheticSut sut = MakeSut(j, e.sut, compare_c.cap);
      const ExperimentReport report =
          StrategyComparison(j, sut, e.strategies, e.suite_size, e.replications, e.seed, e.options);
      Emit(compare_c.format == "csv" ? Render([&](std::ostream& s) { WriteExperimentReportCsv(s, report); })
                                     : ExperimentReportToJson(report),
           compare_c.output, out);
      return kExitOk;
    }

    if (audit->parsed()) {
      const Peon peon = load(audit_peon);
      const UniformityReport r = UniformityAudit(peon.RequireJoint(), protected_classes, tol);
      Emit(UniformityToJson(r), audit_c.output, out);
      return r.pass ? kExitOk : kExitFail;
    }
  } catch (const Error& e) {
    Diagnose(err, ErrorCodeName(e.code()), e.what());
    return error_exit;
  } catch (const std::exception& e) {
    Diagnose(err, "InternalError", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace peon::cli
