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

#include "peon/io.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "peon/error.h"

namespace peon {
namespace {

using Json = nlohmann::json;
using OJson = nlohmann::ordered_json;

[[noreturn]] void ParseFail(const std::string& message) {
  throw Error(ErrorCode::kParseError, message);
}

Json ParseJson(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    ParseFail(std::string("malformed JSON: ") + e.what());
  }
}

const Json& Field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) ParseFail(where + ": missing field '" + key + "'");
  return obj.at(key);
}

std::string String(const Json& v, const std::string& where) {
  if (!v.is_string()) ParseFail(where + ": expected a string");
  return v.get<std::string>();
}

double Number(const Json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return ToDouble(ParseRational(v.get<std::string>()));
  ParseFail(where + ": expected a number");
}

std::int64_t Integer(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) ParseFail(where + ": expected an integer");
  return v.get<std::int64_t>();
}

bool Bool(const Json& v, const std::string& where) {
  if (!v.is_boolean()) ParseFail(where + ": expected true or false");
  return v.get<bool>();
}

// Decimal strings parse exactly; JSON numbers go through their shortest
// round-trip text.
Rational ExactValue(const Json& v, const std::string& where) {
  if (v.is_string()) return ParseRational(v.get<std::string>());
  if (v.is_number()) return ParseRational(v.dump());
  ParseFail(where + ": expected a decimal string or number");
}

Bound ParseBound(const Json& obj, const char* key, const char* closed_key, bool upper,
                 const std::string& where) {
  const bool closed = obj.contains(closed_key) && Bool(obj.at(closed_key), where);
  if (!obj.contains(key) || obj.at(key).is_null()) return upper ? Bound::PosInf() : Bound::NegInf();
  const Json& v = obj.at(key);
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "-inf" && !upper) return Bound::NegInf();
    if ((s == "inf" || s == "+inf") && upper) return Bound::PosInf();
  }
  return Bound::At(ExactValue(v, where), closed);
}

Interval ParseInterval(const Json& obj, const std::string& where) {
  if (!obj.is_object()) ParseFail(where + ": interval must be an object");
  return {ParseBound(obj, "lo", "lo_closed", false, where),
          ParseBound(obj, "hi", "hi_closed", true, where)};
}

OntologySpec ParseOntologySpec(const Json& doc) {
  OntologySpec spec;
  if (doc.contains("version")) spec.version = doc.at("version").is_string()
                                                  ? doc.at("version").get<std::string>()
                                                  : doc.at("version").dump();
  const Json& classes = Field(doc, "classes", "document");
  if (!classes.is_array()) ParseFail("'classes' must be an array");
  for (const Json& c : classes) {
    ClassSpec cs;
    cs.name = String(Field(c, "name", "class"), "class name");
    const std::string where = "class '" + cs.name + "'";
    if (c.contains("domain")) cs.domain = ParseInterval(c.at("domain"), where + " domain");
    if (c.contains("covering")) cs.covering = Bool(c.at("covering"), where + " covering");
    const Json& ranges = Field(c, "ranges", where);
    if (!ranges.is_array()) ParseFail(where + ": 'ranges' must be an array");
    for (const Json& r : ranges) {
      RangeSpec rs;
      rs.label = String(Field(r, "label", where + " range"), where + " range label");
      const std::string rw = where + " range '" + rs.label + "'";
      if (r.contains("interval")) {
        rs.kind = ParseInterval(r.at("interval"), rw);
      } else if (r.contains("token")) {
        rs.kind = String(r.at("token"), rw + " token");
      } else {
        rs.kind = rs.label;
      }
      if (r.contains("rank")) rs.rank = static_cast<int>(Integer(r.at("rank"), rw + " rank"));
      cs.ranges.push_back(std::move(rs));
    }
    spec.classes.push_back(std::move(cs));
  }
  return spec;
}

Marginal ParseMarginal(const ClassDef& c, const Json& v) {
  const std::string where = "marginal of '" + c.name + "'";
  std::vector<Json> entries(c.size());
  if (v.is_array()) {
    if (v.size() != c.size())
      throw Error(ErrorCode::kMissingMarginal, where + " has " + std::to_string(v.size()) +
                                                   " entries, class has " + std::to_string(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i) entries[i] = v[i];
  } else if (v.is_object()) {
    for (const auto& [label, p] : v.items()) {
      auto idx = c.FindRange(label);
      if (!idx) throw Error(ErrorCode::kUnknownRange, where + ": no range '" + label + "'");
      entries[*idx] = p;
    }
    for (std::size_t i = 0; i < c.size(); ++i)
      if (entries[i].is_null())
        throw Error(ErrorCode::kMissingMarginal, where + ": no entry for '" + c.ranges[i].label + "'");
  } else {
    ParseFail(where + ": expected an array or an object");
  }
  bool exact = true;
  for (const Json& e : entries) exact = exact && e.is_string();
  if (exact) {
    std::vector<Rational> probs;
    for (const Json& e : entries) probs.push_back(ExactValue(e, where));
    return Marginal::FromRationals(c.name, std::move(probs));
  }
  std::vector<double> probs;
  for (const Json& e : entries) probs.push_back(Number(e, where));
  return Marginal::FromDoubles(c.name, std::move(probs));
}

std::vector<std::uint32_t> RangeSet(const ClassDef& c, const Json& v, const std::string& where) {
  if (!v.is_array()) ParseFail(where + ": expected a list of range labels");
  std::vector<std::uint32_t> out;
  for (const Json& label : v) {
    auto idx = c.FindRange(String(label, where));
    if (!idx) throw Error(ErrorCode::kUnknownRange, where + ": no range '" + label.get<std::string>() + "'");
    out.push_back(static_cast<std::uint32_t>(*idx));
  }
  return out;
}

Coupling ParseCoupling(const Ontology& o, const Marginal& px, const Marginal& py, const Json& dep,
                       const std::string& where) {
  const std::string kind = String(Field(dep, "kind", where), where + " kind");
  const Json params = dep.contains("params") ? dep.at("params") : Json::object();
  const ClassDef& cx = o.cls(o.ClassIndex(px.class_name()));
  const ClassDef& cy = o.cls(o.ClassIndex(py.class_name()));
  if (kind == "boolean") {
    return BooleanConstraintCoupling(px, py, RangeSet(cx, Field(params, "premise", where), where),
                                     RangeSet(cy, Field(params, "conclusion", where), where));
  }
  if (kind == "monotone") {
    const Json& rho = Field(params, "rho", where);
    if (rho.is_string()) return MonotoneCoupling(o, px, py, ParseRational(rho.get<std::string>()));
    return MonotoneCoupling(o, px, py, Number(rho, where));
  }
  if (kind == "explicit") {
    const Json& table = Field(params, "table", where);
    if (!table.is_array() || table.size() != px.size())
      throw Error(ErrorCode::kInvalidCoupling, where + ": table needs one row per parent range");
    bool exact = true;
    std::vector<Json> flat;
    for (const Json& row : table) {
      if (!row.is_array() || row.size() != py.size())
        throw Error(ErrorCode::kInvalidCoupling, where + ": table row has the wrong length");
      for (const Json& e : row) {
        exact = exact && e.is_string();
        flat.push_back(e);
      }
    }
    if (exact) {
      std::vector<Rational> t;
      for (const Json& e : flat) t.push_back(ExactValue(e, where));
      return ExplicitCouplingExact(px, py, std::move(t));
    }
    std::vector<double> t;
    for (const Json& e : flat) t.push_back(Number(e, where));
    return ExplicitCoupling(px, py, std::move(t));
  }
  if (kind == "product") return ProductCoupling(px, py);
  ParseFail(where + ": unknown dependency kind '" + kind + "'");
}

std::vector<std::string> Labels(const Ontology& o, const PartitionIndex& p) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < p.coords.size(); ++i) labels.push_back(o.cls(i).ranges[p.coords[i]].label);
  return labels;
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::int64_t ParseInt(const std::string& s, const std::string& where) {
  std::size_t pos = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    ParseFail(where + ": expected an integer, got '" + s + "'");
  }
  if (pos != s.size()) ParseFail(where + ": expected an integer, got '" + s + "'");
  return v;
}

std::string Trimmed(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

OJson CriticalJson(const CriticalValues& cv) {
  return OJson{{"max_failures", cv.max_failures}, {"min_failures", cv.min_failures}};
}

}  // namespace

const JointDistribution& Peon::RequireJoint() const {
  if (!joint) throw Error(ErrorCode::kMissingMarginal, "document has no marginals or dense joint");
  return *joint;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ParseFail("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Peon ParsePeon(std::string_view json_text) {
  const Json doc = ParseJson(json_text);
  if (!doc.is_object()) ParseFail("document must be a JSON object");
  Peon peon;
  auto ontology = std::make_shared<const Ontology>(ValidateOntology(ParseOntologySpec(doc)));
  peon.ontology = ontology;
  const Ontology& o = *ontology;

  if (doc.contains("joint")) {
    const Json& dense = Field(doc.at("joint"), "dense", "joint");
    if (!dense.is_array()) ParseFail("joint.dense must be an array");
    std::vector<double> table;
    for (const Json& v : dense) table.push_back(Number(v, "joint.dense"));
    peon.joint = JointDistribution::Dense(ontology, std::move(table));
    return peon;
  }
  if (!doc.contains("marginals")) {
    if (doc.contains("dependencies"))
      throw Error(ErrorCode::kMissingMarginal, "dependencies given without marginals");
    return peon;
  }
  const Json& ms = doc.at("marginals");
  if (!ms.is_object()) ParseFail("'marginals' must be an object keyed by class name");
  for (const auto& [name, v] : ms.items()) o.ClassIndex(name);
  std::vector<Marginal> marginals;
  for (const ClassDef& c : o.classes()) {
    if (!ms.contains(c.name)) throw Error(ErrorCode::kMissingMarginal, "no marginal for class '" + c.name + "'");
    marginals.push_back(ParseMarginal(c, ms.at(c.name)));
  }
  DependencyGraph graph(o.class_count());
  if (doc.contains("dependencies")) {
    const Json& deps = doc.at("dependencies");
    if (!deps.is_array()) ParseFail("'dependencies' must be an array");
    for (const Json& dep : deps) {
      const std::string child = String(Field(dep, "child", "dependency"), "dependency child");
      const std::string parent = String(Field(dep, "parent", "dependency"), "dependency parent");
      const std::string where = "dependency " + parent + " -> " + child;
      const std::size_t ci = o.ClassIndex(child);
      const std::size_t pi = o.ClassIndex(parent);
      graph.AddEdge(o, ci, pi, ParseCoupling(o, marginals[pi], marginals[ci], dep, where));
    }
  }
  peon.joint = JointFromGraph(ontology, std::move(marginals), std::move(graph));
  return peon;
}

Peon LoadPeon(const std::string& path) { return ParsePeon(ReadFile(path)); }

void WriteSuiteJsonl(std::ostream& out, const Ontology& o, const TestSuite& suite) {
  for (const auto& c : suite.cases) {
    OJson line;
    line["id"] = c.id;
    line["flat"] = c.partition.flat;
    line["coords"] = c.partition.coords;
    line["labels"] = Labels(o, c.partition);
    if (suite.strategy.kind == StrategyKind::kNwise) line["free"] = c.free;
    out << line.dump() << '\n';
  }
}

void WriteSuiteCsv(std::ostream& out, const Ontology& o, const TestSuite& suite) {
  out << "id,flat";
  for (const auto& c : o.classes()) out << ',' << c.name;
  out << '\n';
  for (const auto& c : suite.cases) {
    out << c.id << ',' << c.partition.flat;
    for (const auto& label : Labels(o, c.partition)) out << ',' << label;
    out << '\n';
  }
}

TestSuite ReadSuiteJsonl(std::istream& in, const Ontology& o) {
  TestSuite suite;
  std::string line;
  std::size_t lineno = 0;
  const std::uint64_t space = o.SpaceSize();
  while (std::getline(in, line)) {
    ++lineno;
    if (Trimmed(line).empty()) continue;
    const std::string where = "suite line " + std::to_string(lineno);
    const Json v = ParseJson(line);
    AbstractTestCase c;
    c.id = static_cast<std::uint64_t>(Integer(Field(v, "id", where), where));
    const std::int64_t flat = Integer(Field(v, "flat", where), where);
    if (flat < 0 || static_cast<std::uint64_t>(flat) >= space)
      throw Error(ErrorCode::kUnknownPartition, where + ": partition outside the space");
    c.partition = Decode(o, static_cast<std::uint64_t>(flat));
    if (v.contains("coords") && v.at("coords") != Json(c.partition.coords))
      throw Error(ErrorCode::kParseError, where + ": coords disagree with flat index");
    if (v.contains("free")) {
      suite.strategy.kind = StrategyKind::kNwise;
      c.free = v.at("free").get<std::vector<bool>>();
    }
    suite.cases.push_back(std::move(c));
  }
  return suite;
}

void WriteCampaignCsv(std::ostream& out, const CampaignResult& r) {
  out << "flat_partition,executed,failed\n";
  for (const auto& [flat, c] : r.partitions()) out << flat << ',' << c.executed << ',' << c.failed << '\n';
}

CampaignResult ReadCampaignCsv(std::istream& in) {
  CampaignResult r;
  std::string line;
  if (!std::getline(in, line) || Trimmed(line) != "flat_partition,executed,failed")
    ParseFail("campaign CSV must start with 'flat_partition,executed,failed'");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = Trimmed(line);
    if (line.empty()) continue;
    const std::string where = "campaign line " + std::to_string(lineno);
    const auto cells = SplitCsv(line);
    if (cells.size() != 3) ParseFail(where + ": expected 3 columns");
    const std::int64_t flat = ParseInt(cells[0], where);
    if (flat < 0) ParseFail(where + ": negative partition index");
    r.Add(static_cast<std::uint64_t>(flat), ParseInt(cells[1], where), ParseInt(cells[2], where));
  }
  return r;
}

std::string PlanToJson(const TestPlan& plan) {
  OJson j;
  j["p0"] = plan.p0;
  j["rel_tol"] = plan.rel_tol;
  j["alpha"] = plan.alpha;
  j["power"] = plan.power;
  j["sidedness"] = std::string(SidednessName(plan.sidedness));
  j["p1"] = plan.p1;
  j["n_required"] = plan.n_required;
  j["max_failures"] = plan.max_failures;
  j["min_failures"] = plan.min_failures;
  j["achieved_size"] = plan.achieved_size;
  j["achieved_power"] = plan.achieved_power;
  j["normal_approximation"] = {{"n_required", plan.normal.n_required},
                               {"max_failures", plan.normal.max_failures}};
  return j.dump(2) + "\n";
}

TestPlan PlanFromJson(std::string_view json_text) {
  const Json j = ParseJson(json_text);
  const std::string w = "plan";
  TestPlan plan;
  plan.p0 = Number(Field(j, "p0", w), w);
  plan.rel_tol = Number(Field(j, "rel_tol", w), w);
  plan.alpha = Number(Field(j, "alpha", w), w);
  plan.power = Number(Field(j, "power", w), w);
  const std::string side = String(Field(j, "sidedness", w), w);
  if (side == "two-sided") plan.sidedness = Sidedness::kTwoSided;
  else if (side == "one-sided-upper") plan.sidedness = Sidedness::kOneSidedUpper;
  else ParseFail("plan: unknown sidedness '" + side + "'");
  plan.p1 = plan.p0 * (1 + plan.rel_tol);
  plan.n_required = Integer(Field(j, "n_required", w), w);
  plan.max_failures = Integer(Field(j, "max_failures", w), w);
  plan.min_failures = j.contains("min_failures") ? Integer(j.at("min_failures"), w) : 0;
  if (j.contains("achieved_size")) plan.achieved_size = Number(j.at("achieved_size"), w);
  if (j.contains("achieved_power")) plan.achieved_power = Number(j.at("achieved_power"), w);
  if (plan.n_required < 1 || plan.max_failures >= plan.n_required)
    ParseFail("plan: need n_required >= 1 and max_failures < n_required");
  return plan;
}

std::string ClaimReportToJson(const ClaimReport& report, const TestPlan& plan,
                              const std::optional<StratifiedEstimate>& stratified) {
  OJson j;
  j["decision"] = report.decision == Decision::kConfirmed ? "confirmed" : "rejected";
  j["executed"] = report.executed;
  j["failed"] = report.failed;
  j["observed_rate"] = report.observed_rate;
  j["accuracy"] = report.accuracy;
  j["claimed_rate"] = plan.p0;
  j["sidedness"] = std::string(SidednessName(plan.sidedness));
  j["thresholds"] = CriticalJson(report.thresholds);
  j["p_value"] = report.p_value;
  if (stratified) {
    j["stratified"] = {{"mu", stratified->mu},
                       {"accuracy", 1.0 - stratified->mu},
                       {"var", stratified->var},
                       {"estimator_var", stratified->estimator_var},
                       {"mu_raw", stratified->mu_raw}};
  }
  return j.dump(2) + "\n";
}

std::string AllocationToJson(const Allocation& a) {
  OJson j;
  j["method"] = std::string(AllocationMethodName(a.method));
  j["budget"] = a.budget;
  j["counts"] = a.counts;
  return j.dump(2) + "\n";
}

Allocation AllocationFromJson(std::string_view json_text) {
  const Json j = ParseJson(json_text);
  Allocation a;
  const std::string method = String(Field(j, "method", "allocation"), "allocation method");
  if (method == "neyman") a.method = AllocationMethod::kNeyman;
  else if (method == "proportional") a.method = AllocationMethod::kProportional;
  else if (method == "uniform") a.method = AllocationMethod::kUniform;
  else ParseFail("allocation: unknown method '" + method + "'");
  a.budget = Integer(Field(j, "budget", "allocation"), "allocation budget");
  const Json& counts = Field(j, "counts", "allocation");
  if (!counts.is_array()) ParseFail("allocation counts must be an array");
  std::int64_t total = 0;
  for (const Json& c : counts) {
    a.counts.push_back(Integer(c, "allocation count"));
    total += a.counts.back();
  }
  if (total != a.budget) ParseFail("allocation counts do not sum to the budget");
  return a;
}

void WriteAllocationCsv(std::ostream& out, const Allocation& a) {
  out << "flat_partition,count\n";
  for (std::size_t f = 0; f < a.counts.size(); ++f) out << f << ',' << a.counts[f] << '\n';
}

std::string BalanceToJson(const BalanceResult& b, const std::optional<MannWhitneyResult>& rank,
                          const std::string& rank_class) {
  OJson j;
  j["verdict"] = b.pass ? "pass" : "fail";
  j["statistic"] = std::isinf(b.statistic) ? OJson("inf") : OJson(b.statistic);
  j["dof"] = b.dof;
  j["p_value"] = b.p_value;
  j["significance"] = b.significance;
  j["total"] = b.total;
  j["pooled_cells"] = b.pooled_cells;
  if (rank) {
    j["rank_test"] = {{"class", rank_class}, {"u", rank->u}, {"z", rank->z}, {"p_value", rank->p_value}};
  }
  return j.dump(2) + "\n";
}

std::string UniformityToJson(const UniformityReport& r) {
  OJson j;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["findings"] = OJson::array();
  for (const auto& f : r.findings)
    j["findings"].push_back({{"class", f.class_name}, {"max_abs_deviation", f.max_abs_deviation}, {"pass", f.pass}});
  return j.dump(2) + "\n";
}

namespace {

SutProfile SutFromJson(const Json& j) {
  const std::string w = "sut";
  const std::string profile = String(Field(j, "profile", w), "sut profile");
  if (profile == "uniform") return SutProfile::Uniform(Number(Field(j, "p", w), w));
  if (profile == "skewed") {
    const double hot = Number(Field(j, "p_hot", w), w);
    const double cold = Number(Field(j, "p_cold", w), w);
    if (j.contains("hotspots")) {
      std::vector<std::uint64_t> spots;
      for (const Json& h : j.at("hotspots")) spots.push_back(static_cast<std::uint64_t>(Integer(h, w)));
      return SutProfile::Skewed(std::move(spots), hot, cold);
    }
    return SutProfile::SkewedByMass(Number(Field(j, "hot_mass", w), w), hot, cold);
  }
  if (profile == "random") {
    return SutProfile::Random(Number(Field(j, "alpha", w), w), Number(Field(j, "beta", w), w),
                              j.contains("seed") ? static_cast<std::uint64_t>(Integer(j.at("seed"), w)) : 0);
  }
  if (profile == "explicit") {
    std::vector<double> failure;
    for (const Json& v : Field(j, "failure", w)) failure.push_back(Number(v, w));
    return SutProfile::Explicit(std::move(failure));
  }
  throw Error(ErrorCode::kInvalidProfile, "unknown SUT profile '" + profile + "'");
}

}  // namespace

SutProfile SutProfileFromJson(std::string_view json_text) { return SutFromJson(ParseJson(json_text)); }

ExperimentSpec ExperimentFromJson(std::string_view json_text) {
  const Json j = ParseJson(json_text);
  const std::string w = "experiment";
  ExperimentSpec e;
  e.sut = SutFromJson(Field(j, "sut", w));
  for (const Json& s : Field(j, "strategies", w)) e.strategies.push_back(ParseStrategy(String(s, w)));
  if (j.contains("suite_size")) e.suite_size = Integer(j.at("suite_size"), w);
  if (j.contains("replications")) e.replications = static_cast<int>(Integer(j.at("replications"), w));
  if (j.contains("seed")) e.seed = static_cast<std::uint64_t>(Integer(j.at("seed"), w));
  if (j.contains("nwise_fill")) e.options.nwise_fill = Bool(j.at("nwise_fill"), w);
  if (j.contains("exclude_impossible")) e.options.exclude_impossible = Bool(j.at("exclude_impossible"), w);
  if (j.contains("mu_claimed")) e.options.mu_claimed = Number(j.at("mu_claimed"), w);
  return e;
}

std::string ExperimentReportToJson(const ExperimentReport& r) {
  OJson j;
  j["ground_truth_accuracy"] = r.ground_truth;
  j["replications"] = r.replications;
  j["suite_size"] = r.suite_size;
  j["seed"] = r.seed;
  j["strategies"] = OJson::array();
  for (const auto& s : r.strategies) {
    j["strategies"].push_back({{"strategy", s.name},
                               {"mean_accuracy", s.mean_accuracy},
                               {"sd_accuracy", s.sd_accuracy},
                               {"mean_abs_deviation", s.mean_abs_deviation},
                               {"mad_se", s.mad_se}});
  }
  return j.dump(2) + "\n";
}

void WriteExperimentReportCsv(std::ostream& out, const ExperimentReport& r) {
  out << "strategy,mean_accuracy,sd_accuracy,mean_abs_deviation,mad_se,ground_truth\n";
  for (const auto& s : r.strategies) {
    out << s.name << ',' << OJson(s.mean_accuracy).dump() << ',' << OJson(s.sd_accuracy).dump() << ','
        << OJson(s.mean_abs_deviation).dump() << ',' << OJson(s.mad_se).dump() << ','
        << OJson(r.ground_truth).dump() << '\n';
  }
}

std::string DescribeJson(const Peon& peon, std::uint64_t cap) {
  const Ontology& o = *peon.ontology;
  const std::vector<double> phi = peon.RequireJoint().DenseTable(cap);
  OJson j;
  j["classes"] = OJson::array();
  for (const auto& c : o.classes()) j["classes"].push_back(c.name);
  j["partitions"] = OJson::array();
  for (std::uint64_t f = 0; f < phi.size(); ++f) {
    const PartitionIndex p = Decode(o, f);
    j["partitions"].push_back({{"flat", f}, {"labels", Labels(o, p)}, {"phi", phi[f]}});
  }
  return j.dump(2) + "\n";
}

void WriteDescribeCsv(std::ostream& out, const Peon& peon, std::uint64_t cap) {
  const Ontology& o = *peon.ontology;
  const std::vector<double> phi = peon.RequireJoint().DenseTable(cap);
  out << "flat";
  for (const auto& c : o.classes()) out << ',' << c.name;
  out << ",phi\n";
  for (std::uint64_t f = 0; f < phi.size(); ++f) {
    out << f;
    for (const auto& label : Labels(o, Decode(o, f))) out << ',' << label;
    out << ',' << OJson(phi[f]).dump() << '\n';
  }
}

}  // namespace peon
