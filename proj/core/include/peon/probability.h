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

#ifndef PEON_PROBABILITY_H_
#define PEON_PROBABILITY_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "peon/ontology.h"
#include "peon/rational.h"

namespace peon {

// Row/column sum tolerance for float-path couplings and marginals.
inline constexpr double kCouplingTolerance = 1e-12;
// Tolerance for declared-vs-coupling marginal agreement in a graph.
inline constexpr double kMarginalMatchTolerance = 1e-9;
// Normalization tolerance for dense joint tables.
inline constexpr double kDenseNormalizationTolerance = 1e-9;

// Distribution over the ranges of one class, in canonical range order.
// `exact` is present when every entry was given as a rational; it is then
// normalized exactly and `probs` holds its rounded image.
class Marginal {
 public:
  // Errors: NegativeProbability, Unnormalized (|sum - 1| > 1e-12).
  static Marginal FromDoubles(std::string class_name, std::vector<double> probs);
  // Errors: NegativeProbability, Unnormalized (sum != 1 exactly).
  static Marginal FromRationals(std::string class_name, std::vector<Rational> probs);
  static Marginal Uniform(std::string class_name, std::size_t size);

  const std::string& class_name() const { return class_name_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t j) const { return probs_[j]; }
  std::span<const double> probs() const { return probs_; }
  const std::optional<std::vector<Rational>>& exact() const { return exact_; }

 private:
  Marginal() = default;

  std::string class_name_;
  std::vector<double> probs_;
  std::optional<std::vector<Rational>> exact_;
};

enum class CouplingKind { kProduct, kBooleanConstraint, kMonotone, kExplicit };

std::string_view CouplingKindName(CouplingKind kind);

// Bivariate distribution over ranges(X) x ranges(Y) whose row sums are p_X
// and column sums are p_Y. X is the parent (rows), Y the child (columns).
class Coupling {
 public:
  const std::string& class_x() const { return class_x_; }
  const std::string& class_y() const { return class_y_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t x, std::size_t y) const { return table_[x * cols_ + y]; }
  std::span<const double> table() const { return table_; }
  const std::optional<std::vector<Rational>>& exact() const { return exact_; }
  CouplingKind kind() const { return kind_; }

  // Provenance parameters (empty / unset when not applicable).
  const std::vector<std::uint32_t>& constraint_premise() const { return premise_; }
  const std::vector<std::uint32_t>& constraint_conclusion() const { return conclusion_; }
  double rho() const { return rho_; }

  std::vector<double> RowSums() const;
  std::vector<double> ColSums() const;
  double Mass(std::span<const std::uint32_t> xs, std::span<const std::uint32_t> ys) const;

 private:
  friend Coupling ProductCoupling(const Marginal&, const Marginal&);
  friend Coupling BooleanConstraintCoupling(const Marginal&, const Marginal&,
                                            std::span<const std::uint32_t>,
                                            std::span<const std::uint32_t>);
  friend Coupling MonotoneCouplingImpl(const Marginal&, const Marginal&, double,
                                       const std::optional<Rational>&);
  friend Coupling ExplicitCoupling(const Marginal&, const Marginal&, std::vector<double>);
  friend Coupling ExplicitCouplingExact(const Marginal&, const Marginal&,
                                        std::vector<Rational>);

  Coupling() = default;

  std::string class_x_;
  std::string class_y_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> table_;
  std::optional<std::vector<Rational>> exact_;
  CouplingKind kind_ = CouplingKind::kExplicit;
  std::vector<std::uint32_t> premise_;
  std::vector<std::uint32_t> conclusion_;
  double rho_ = 0.0;
};

// p_X (x) p_Y.
Coupling ProductCoupling(const Marginal& px, const Marginal& py);

// Coupling that imposes "x in I implies y in J":
//
//   p(x,y) = pX(x) pY(y) [ chi_I(x) chi_J(y) / pY(J)
//                          + chi_Ic(x) / (1 - pX(I))
//                          - pX(I) chi_Ic(x) chi_J(y) / ((1 - pX(I)) pY(J)) ]
//
// Mass on I x J^c is exactly zero and both marginals are preserved. The
// (I^c, J) entries are pX pY (pY(J) - pX(I)) / ((1 - pX(I)) pY(J)), so the
// table is a valid distribution iff pY(J) >= pX(I). Computed in exact
// rationals when both marginals are exact.
// Errors: DegenerateSet (pX(I) in {0, 1}), InfeasibleConstraint.
Coupling BooleanConstraintCoupling(const Marginal& px, const Marginal& py,
                                   std::span<const std::uint32_t> premise,
                                   std::span<const std::uint32_t> conclusion);

// rho * Q + (1 - rho) * (pX (x) pY), Q the comonotone (north-west corner /
// quantile) coupling of the two ordered marginals.
// Errors: UnorderedClass, InvalidArgument (rho outside [0, 1]).
Coupling MonotoneCoupling(const Ontology& o, const Marginal& px, const Marginal& py,
                          double rho);
Coupling MonotoneCoupling(const Ontology& o, const Marginal& px, const Marginal& py,
                          const Rational& rho);

// Comonotone coupling alone (rho = 1), exposed for the transport tests.
std::vector<double> ComonotoneTable(std::span<const double> px, std::span<const double> py);

// Row-major table with marginals checked against px/py to 1e-12.
// Errors: InvalidCoupling (shape, negativity, marginals).
Coupling ExplicitCoupling(const Marginal& px, const Marginal& py, std::vector<double> table);
Coupling ExplicitCouplingExact(const Marginal& px, const Marginal& py,
                               std::vector<Rational> table);

// Row x normalized. Errors: ZeroMassCondition.
std::vector<double> Conditional(const Coupling& c, std::size_t x);

// Forest over canonically ordered classes: each class has at most one
// parent, which must come strictly earlier.
class DependencyGraph {
 public:
  struct Edge {
    std::size_t parent;
    Coupling coupling;
  };

  explicit DependencyGraph(std::size_t class_count) : edges_(class_count) {}

  // Errors: InvalidGraph (later/self parent, second parent, class name
  // mismatch with the coupling).
  void AddEdge(const Ontology& o, std::size_t child, std::size_t parent, Coupling coupling);

  std::size_t class_count() const { return edges_.size(); }
  const std::optional<Edge>& edge(std::size_t child) const { return edges_[child]; }
  std::optional<std::size_t> parent(std::size_t child) const {
    return edges_[child] ? std::optional(edges_[child]->parent) : std::nullopt;
  }
  bool empty() const;

 private:
  std::vector<std::optional<Edge>> edges_;
};

// Distribution over the partition space, either as marginals + forest
// (factored) or as a dense table indexed by flat partition index.
class JointDistribution {
 public:
  enum class Mode { kFactored, kDense };

  // Errors: Unnormalized (1e-9), NegativeProbability, CapExceeded.
  static JointDistribution Dense(std::shared_ptr<const Ontology> o, std::vector<double> table,
                                 std::uint64_t cap = kDefaultEnumerationCap);

  Mode mode() const { return mode_; }
  const Ontology& ontology() const { return *ontology_; }
  const std::shared_ptr<const Ontology>& ontology_ptr() const { return ontology_; }

  // Factored form only.
  const std::vector<Marginal>& marginals() const { return marginals_; }
  const DependencyGraph& graph() const { return *graph_; }

  // p(tuple): product along the forest (factored) or a table lookup.
  double Probability(std::span<const std::uint32_t> coords) const;
  double Probability(std::uint64_t flat) const;

  // P(class i = v | parent draw) for the factored chain; `parent_value` is
  // ignored for roots.
  std::span<const double> ChainRow(std::size_t i, std::uint32_t parent_value) const;

  // Dense table. The factored path builds it class by class (outer products
  // along the chain), not by calling Probability per tuple.
  // Errors: CapExceeded.
  std::vector<double> DenseTable(std::uint64_t cap = kDefaultEnumerationCap) const;
  JointDistribution Materialize(std::uint64_t cap = kDefaultEnumerationCap) const;

 private:
  friend JointDistribution ProductMeasure(std::shared_ptr<const Ontology>, std::vector<Marginal>);
  friend JointDistribution JointFromGraph(std::shared_ptr<const Ontology>, std::vector<Marginal>,
                                          DependencyGraph);

  JointDistribution() = default;
  void BuildChain();

  Mode mode_ = Mode::kFactored;
  std::shared_ptr<const Ontology> ontology_;
  std::vector<Marginal> marginals_;
  std::shared_ptr<const DependencyGraph> graph_;
  // chain_[i]: roots -> marginal (1 row); children -> row-normalized
  // conditional table (parent size x own size).
  std::vector<std::vector<double>> chain_;
  std::vector<double> dense_;
};

// Errors: MissingMarginal, Unnormalized.
JointDistribution ProductMeasure(std::shared_ptr<const Ontology> o, std::vector<Marginal> marginals);

// Errors: MissingMarginal, MarginalMismatch.
JointDistribution JointFromGraph(std::shared_ptr<const Ontology> o, std::vector<Marginal> marginals,
                                 DependencyGraph graph);

// Factored: propagated analytically along the forest. Dense: summed.
Marginal MarginalOf(const JointDistribution& j, std::size_t class_index);
Marginal MarginalOf(const JointDistribution& j, std::string_view class_name);

// Product of all class marginals of `j` (couplings dropped).
JointDistribution MarginalProduct(const JointDistribution& j);

struct UniformityFinding {
  std::string class_name;
  double max_abs_deviation = 0.0;
  bool pass = false;
};

struct UniformityReport {
  double tolerance = 0.0;
  std::vector<UniformityFinding> findings;
  bool pass = true;
};

// Compares the marginal of each protected class against uniform.
UniformityReport UniformityAudit(const JointDistribution& j,
                                 std::span<const std::string> protected_classes, double tol);

}  // namespace peon

#endif  // PEON_PROBABILITY_H_
