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

#include "peon/probability.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "peon/error.h"

namespace peon {
namespace {

[[noreturn]] void Throw(ErrorCode code, std::string message) {
  throw Error(code, std::move(message));
}

template <typename T>
T SumOf(const std::vector<T>& v) {
  T total = 0;
  for (const T& x : v) total += x;
  return total;
}

std::vector<double> ToDoubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(ToDouble(x));
  return out;
}

std::vector<bool> Indicator(std::span<const std::uint32_t> set, std::size_t n,
                            const std::string& class_name) {
  std::vector<bool> in(n, false);
  for (std::uint32_t j : set) {
    if (j >= n) Throw(ErrorCode::kOutOfRange, "range index out of range for class '" + class_name + "'");
    in[j] = true;
  }
  return in;
}

// Closed form of the boolean-constraint coupling for T = double or Rational.
template <typename T>
std::vector<T> BooleanTable(const std::vector<T>& px, const std::vector<T>& py,
                            const std::vector<bool>& in_i, const std::vector<bool>& in_j,
                            const T& a, const T& b) {
  std::vector<T> table(px.size() * py.size(), T(0));
  for (std::size_t x = 0; x < px.size(); ++x) {
    for (std::size_t y = 0; y < py.size(); ++y) {
      T& cell = table[x * py.size() + y];
      if (in_i[x]) {
        cell = in_j[y] ? T(px[x] * py[y] / b) : T(0);
      } else if (in_j[y]) {
        cell = px[x] * py[y] * (b - a) / ((1 - a) * b);
      } else {
        cell = px[x] * py[y] / (1 - a);
      }
    }
  }
  return table;
}

template <typename T>
std::vector<T> OuterProduct(const std::vector<T>& px, const std::vector<T>& py) {
  std::vector<T> table(px.size() * py.size());
  for (std::size_t x = 0; x < px.size(); ++x)
    for (std::size_t y = 0; y < py.size(); ++y) table[x * py.size() + y] = px[x] * py[y];
  return table;
}

// North-west corner on exact marginals.
std::vector<Rational> ComonotoneExact(const std::vector<Rational>& px,
                                      const std::vector<Rational>& py) {
  std::vector<Rational> table(px.size() * py.size(), Rational(0));
  std::size_t x = 0;
  std::size_t y = 0;
  Rational rx = px.empty() ? Rational(0) : px[0];
  Rational ry = py.empty() ? Rational(0) : py[0];
  while (x < px.size() && y < py.size()) {
    Rational m = rx < ry ? rx : ry;
    table[x * py.size() + y] += m;
    rx -= m;
    ry -= m;
    if (rx == 0 && ++x < px.size()) rx = px[x];
    if (ry == 0 && ++y < py.size()) ry = py[y];
  }
  return table;
}

void CheckTableMarginals(std::span<const double> table, const Marginal& px, const Marginal& py,
                         double tol, ErrorCode code, const std::string& what) {
  for (std::size_t x = 0; x < px.size(); ++x) {
    double row = 0.0;
    for (std::size_t y = 0; y < py.size(); ++y) row += table[x * py.size() + y];
    if (std::abs(row - px[x]) > tol)
      Throw(code, what + ": row " + std::to_string(x) + " sums to " + std::to_string(row) +
                      ", marginal of '" + px.class_name() + "' is " + std::to_string(px[x]));
  }
  for (std::size_t y = 0; y < py.size(); ++y) {
    double col = 0.0;
    for (std::size_t x = 0; x < px.size(); ++x) col += table[x * py.size() + y];
    if (std::abs(col - py[y]) > tol)
      Throw(code, what + ": column " + std::to_string(y) + " sums to " + std::to_string(col) +
                      ", marginal of '" + py.class_name() + "' is " + std::to_string(py[y]));
  }
}

}  // namespace

// ---------------------------------------------------------------- Marginal

Marginal Marginal::FromDoubles(std::string class_name, std::vector<double> probs) {
  if (probs.empty()) Throw(ErrorCode::kUnnormalized, "marginal of '" + class_name + "' is empty");
  for (double p : probs)
    if (!(p >= 0.0) || !std::isfinite(p))
      Throw(ErrorCode::kNegativeProbability, "marginal of '" + class_name + "' has a negative entry");
  double total = SumOf(probs);
  if (std::abs(total - 1.0) > kCouplingTolerance)
    Throw(ErrorCode::kUnnormalized,
          "marginal of '" + class_name + "' sums to " + std::to_string(total));
  Marginal m;
  m.class_name_ = std::move(class_name);
  m.probs_ = std::move(probs);
  return m;
}

Marginal Marginal::FromRationals(std::string class_name, std::vector<Rational> probs) {
  if (probs.empty()) Throw(ErrorCode::kUnnormalized, "marginal of '" + class_name + "' is empty");
  for (const auto& p : probs)
    if (p < 0) Throw(ErrorCode::kNegativeProbability, "marginal of '" + class_name + "' has a negative entry");
  Rational total = SumOf(probs);
  if (total != 1)
    Throw(ErrorCode::kUnnormalized,
          "marginal of '" + class_name + "' sums to " + FormatRational(total));
  Marginal m;
  m.class_name_ = std::move(class_name);
  m.probs_ = ToDoubles(probs);
  m.exact_ = std::move(probs);
  return m;
}

Marginal Marginal::Uniform(std::string class_name, std::size_t size) {
  std::vector<Rational> probs(size, Rational(1, static_cast<long>(size)));
  return FromRationals(std::move(class_name), std::move(probs));
}

// ---------------------------------------------------------------- Coupling

std::string_view CouplingKindName(CouplingKind kind) {
  switch (kind) {
    case CouplingKind::kProduct: return "product";
    case CouplingKind::kBooleanConstraint: return "boolean";
    case CouplingKind::kMonotone: return "monotone";
    case CouplingKind::kExplicit: return "explicit";
  }
  return "unknown";
}

std::vector<double> Coupling::RowSums() const {
  std::vector<double> sums(rows_, 0.0);
  for (std::size_t x = 0; x < rows_; ++x)
    for (std::size_t y = 0; y < cols_; ++y) sums[x] += at(x, y);
  return sums;
}

std::vector<double> Coupling::ColSums() const {
  std::vector<double> sums(cols_, 0.0);
  for (std::size_t x = 0; x < rows_; ++x)
    for (std::size_t y = 0; y < cols_; ++y) sums[y] += at(x, y);
  return sums;
}

double Coupling::Mass(std::span<const std::uint32_t> xs, std::span<const std::uint32_t> ys) const {
  double total = 0.0;
  for (std::uint32_t x : xs)
    for (std::uint32_t y : ys) total += at(x, y);
  return total;
}

Coupling ProductCoupling(const Marginal& px, const Marginal& py) {
  Coupling c;
  c.class_x_ = px.class_name();
  c.class_y_ = py.class_name();
  c.rows_ = px.size();
  c.cols_ = py.size();
  c.kind_ = CouplingKind::kProduct;
  if (px.exact() && py.exact()) {
    c.exact_ = OuterProduct(*px.exact(), *py.exact());
    c.table_ = ToDoubles(*c.exact_);
  } else {
    c.table_ = OuterProduct(std::vector<double>(px.probs().begin(), px.probs().end()),
                            std::vector<double>(py.probs().begin(), py.probs().end()));
  }
  return c;
}

Coupling BooleanConstraintCoupling(const Marginal& px, const Marginal& py,
                                   std::span<const std::uint32_t> premise,
                                   std::span<const std::uint32_t> conclusion) {
  const auto in_i = Indicator(premise, px.size(), px.class_name());
  const auto in_j = Indicator(conclusion, py.size(), py.class_name());
  const std::string what = "constraint " + px.class_name() + " -> " + py.class_name();

  Coupling c;
  c.class_x_ = px.class_name();
  c.class_y_ = py.class_name();
  c.rows_ = px.size();
  c.cols_ = py.size();
  c.kind_ = CouplingKind::kBooleanConstraint;
  c.premise_.assign(premise.begin(), premise.end());
  c.conclusion_.assign(conclusion.begin(), conclusion.end());
  std::sort(c.premise_.begin(), c.premise_.end());
  std::sort(c.conclusion_.begin(), c.conclusion_.end());

  if (px.exact() && py.exact()) {
    const auto& ex = *px.exact();
    const auto& ey = *py.exact();
    Rational a = 0;
    Rational b = 0;
    for (std::size_t x = 0; x < ex.size(); ++x) if (in_i[x]) a += ex[x];
    for (std::size_t y = 0; y < ey.size(); ++y) if (in_j[y]) b += ey[y];
    if (a == 0 || a == 1)
      Throw(ErrorCode::kDegenerateSet, what + ": premise probability is " + FormatRational(a));
    if (b < a)
      Throw(ErrorCode::kInfeasibleConstraint,
            what + ": pY(J) = " + FormatRational(b) + " < pX(I) = " + FormatRational(a));
    c.exact_ = BooleanTable(ex, ey, in_i, in_j, a, b);
    c.table_ = ToDoubles(*c.exact_);
    return c;
  }

  std::vector<double> vx(px.probs().begin(), px.probs().end());
  std::vector<double> vy(py.probs().begin(), py.probs().end());
  double a = 0.0;
  double b = 0.0;
  for (std::size_t x = 0; x < vx.size(); ++x) if (in_i[x]) a += vx[x];
  for (std::size_t y = 0; y < vy.size(); ++y) if (in_j[y]) b += vy[y];
  if (a <= kCouplingTolerance || a >= 1.0 - kCouplingTolerance)
    Throw(ErrorCode::kDegenerateSet, what + ": premise probability is " + std::to_string(a));
  if (b < a - kCouplingTolerance)
    Throw(ErrorCode::kInfeasibleConstraint,
          what + ": pY(J) = " + std::to_string(b) + " < pX(I) = " + std::to_string(a));
  c.table_ = BooleanTable(vx, vy, in_i, in_j, a, std::max(a, b));
  for (double& v : c.table_) v = std::max(v, 0.0);
  return c;
}

std::vector<double> ComonotoneTable(std::span<const double> px, std::span<const double> py) {
  // Quantile coupling: cell (x, y) gets the overlap of the x-th slab of
  // [0, 1] under F_X with the y-th slab under F_Y.
  std::vector<double> fx(px.size() + 1, 0.0);
  std::vector<double> fy(py.size() + 1, 0.0);
  for (std::size_t x = 0; x < px.size(); ++x) fx[x + 1] = fx[x] + px[x];
  for (std::size_t y = 0; y < py.size(); ++y) fy[y + 1] = fy[y] + py[y];
  const double top = std::max(fx.back(), fy.back());
  fx.back() = top;
  fy.back() = top;
  std::vector<double> table(px.size() * py.size(), 0.0);
  for (std::size_t x = 0; x < px.size(); ++x) {
    for (std::size_t y = 0; y < py.size(); ++y) {
      double overlap = std::min(fx[x + 1], fy[y + 1]) - std::max(fx[x], fy[y]);
      if (overlap > 0.0) table[x * py.size() + y] = overlap;
    }
  }
  return table;
}

Coupling MonotoneCouplingImpl(const Marginal& px, const Marginal& py, double rho,
                              const std::optional<Rational>& exact_rho) {
  if (!(rho >= 0.0 && rho <= 1.0))
    Throw(ErrorCode::kInvalidArgument, "monotone coupling strength must lie in [0, 1]");
  Coupling c;
  c.class_x_ = px.class_name();
  c.class_y_ = py.class_name();
  c.rows_ = px.size();
  c.cols_ = py.size();
  c.kind_ = CouplingKind::kMonotone;
  c.rho_ = rho;

  if (exact_rho && px.exact() && py.exact()) {
    auto q = ComonotoneExact(*px.exact(), *py.exact());
    auto prod = OuterProduct(*px.exact(), *py.exact());
    std::vector<Rational> table(q.size());
    for (std::size_t k = 0; k < q.size(); ++k)
      table[k] = *exact_rho * q[k] + (1 - *exact_rho) * prod[k];
    c.table_ = ToDoubles(table);
    c.exact_ = std::move(table);
    return c;
  }
  auto q = ComonotoneTable(px.probs(), py.probs());
  c.table_.resize(q.size());
  for (std::size_t x = 0; x < px.size(); ++x)
    for (std::size_t y = 0; y < py.size(); ++y)
      c.table_[x * py.size() + y] = rho * q[x * py.size() + y] + (1.0 - rho) * px[x] * py[y];
  return c;
}

namespace {

void RequireOrdered(const Ontology& o, const Marginal& m) {
  const ClassDef& c = o.cls(o.ClassIndex(m.class_name()));
  if (!c.ordered)
    Throw(ErrorCode::kUnorderedClass,
          "class '" + c.name + "' has no declared ranks; a monotone coupling needs an order");
  if (c.size() != m.size())
    Throw(ErrorCode::kMissingMarginal, "marginal of '" + c.name + "' has the wrong size");
}

}  // namespace

Coupling MonotoneCoupling(const Ontology& o, const Marginal& px, const Marginal& py, double rho) {
  RequireOrdered(o, px);
  RequireOrdered(o, py);
  return MonotoneCouplingImpl(px, py, rho, std::nullopt);
}

Coupling MonotoneCoupling(const Ontology& o, const Marginal& px, const Marginal& py,
                          const Rational& rho) {
  RequireOrdered(o, px);
  RequireOrdered(o, py);
  if (rho < 0 || rho > 1)
    Throw(ErrorCode::kInvalidArgument, "monotone coupling strength must lie in [0, 1]");
  return MonotoneCouplingImpl(px, py, ToDouble(rho), rho);
}

Coupling ExplicitCoupling(const Marginal& px, const Marginal& py, std::vector<double> table) {
  const std::string what = "explicit coupling " + px.class_name() + " -> " + py.class_name();
  if (table.size() != px.size() * py.size())
    Throw(ErrorCode::kInvalidCoupling, what + " has the wrong shape");
  for (double v : table)
    if (!(v >= 0.0) || !std::isfinite(v)) Throw(ErrorCode::kInvalidCoupling, what + " has a negative entry");
  CheckTableMarginals(table, px, py, kCouplingTolerance, ErrorCode::kInvalidCoupling, what);
  Coupling c;
  c.class_x_ = px.class_name();
  c.class_y_ = py.class_name();
  c.rows_ = px.size();
  c.cols_ = py.size();
  c.kind_ = CouplingKind::kExplicit;
  c.table_ = std::move(table);
  return c;
}

Coupling ExplicitCouplingExact(const Marginal& px, const Marginal& py, std::vector<Rational> table) {
  const std::string what = "explicit coupling " + px.class_name() + " -> " + py.class_name();
  if (table.size() != px.size() * py.size())
    Throw(ErrorCode::kInvalidCoupling, what + " has the wrong shape");
  for (const auto& v : table)
    if (v < 0) Throw(ErrorCode::kInvalidCoupling, what + " has a negative entry");
  if (px.exact() && py.exact()) {
    for (std::size_t x = 0; x < px.size(); ++x) {
      Rational row = 0;
      for (std::size_t y = 0; y < py.size(); ++y) row += table[x * py.size() + y];
      if (row != (*px.exact())[x])
        Throw(ErrorCode::kInvalidCoupling, what + ": row " + std::to_string(x) + " sums to " +
                                               FormatRational(row));
    }
    for (std::size_t y = 0; y < py.size(); ++y) {
      Rational col = 0;
      for (std::size_t x = 0; x < px.size(); ++x) col += table[x * py.size() + y];
      if (col != (*py.exact())[y])
        Throw(ErrorCode::kInvalidCoupling, what + ": column " + std::to_string(y) + " sums to " +
                                               FormatRational(col));
    }
  }
  Coupling c = ExplicitCoupling(px, py, ToDoubles(table));
  c.exact_ = std::move(table);
  return c;
}

std::vector<double> Conditional(const Coupling& c, std::size_t x) {
  if (x >= c.rows()) Throw(ErrorCode::kOutOfRange, "conditioning index out of range");
  double row = 0.0;
  for (std::size_t y = 0; y < c.cols(); ++y) row += c.at(x, y);
  if (!(row > 0.0))
    Throw(ErrorCode::kZeroMassCondition, "range " + std::to_string(x) + " of '" + c.class_x() +
                                             "' has zero probability");
  std::vector<double> out(c.cols());
  for (std::size_t y = 0; y < c.cols(); ++y) out[y] = c.at(x, y) / row;
  return out;
}

// ---------------------------------------------------------- DependencyGraph

void DependencyGraph::AddEdge(const Ontology& o, std::size_t child, std::size_t parent,
                              Coupling coupling) {
  if (child >= edges_.size() || parent >= edges_.size())
    Throw(ErrorCode::kInvalidGraph, "edge endpoint out of range");
  const std::string& cname = o.cls(child).name;
  const std::string& pname = o.cls(parent).name;
  if (parent >= child)
    Throw(ErrorCode::kInvalidGraph,
          "parent '" + pname + "' of '" + cname + "' must precede it in class order");
  if (edges_[child])
    Throw(ErrorCode::kInvalidGraph, "class '" + cname + "' already has a parent");
  if (coupling.class_x() != pname || coupling.class_y() != cname)
    Throw(ErrorCode::kInvalidGraph, "coupling endpoints do not match edge " + pname + " -> " + cname);
  if (coupling.rows() != o.cls(parent).size() || coupling.cols() != o.cls(child).size())
    Throw(ErrorCode::kInvalidGraph, "coupling shape does not match edge " + pname + " -> " + cname);
  edges_[child] = Edge{parent, std::move(coupling)};
}

bool DependencyGraph::empty() const {
  return std::none_of(edges_.begin(), edges_.end(), [](const auto& e) { return e.has_value(); });
}

// ------------------------------------------------------- JointDistribution

namespace {

void CheckMarginals(const Ontology& o, const std::vector<Marginal>& marginals) {
  if (marginals.size() != o.class_count())
    Throw(ErrorCode::kMissingMarginal, "expected " + std::to_string(o.class_count()) +
                                           " marginals, got " + std::to_string(marginals.size()));
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    const ClassDef& c = o.cls(i);
    if (marginals[i].class_name() != c.name)
      Throw(ErrorCode::kMissingMarginal, "marginal " + std::to_string(i) + " is for '" +
                                             marginals[i].class_name() + "', expected '" + c.name + "'");
    if (marginals[i].size() != c.size())
      Throw(ErrorCode::kMissingMarginal, "marginal of '" + c.name + "' has " +
                                             std::to_string(marginals[i].size()) + " entries, class has " +
                                             std::to_string(c.size()));
    double total = 0.0;
    for (double p : marginals[i].probs()) total += p;
    if (std::abs(total - 1.0) > kCouplingTolerance)
      Throw(ErrorCode::kUnnormalized, "marginal of '" + c.name + "' is not normalized");
  }
}

}  // namespace

void JointDistribution::BuildChain() {
  const Ontology& o = *ontology_;
  chain_.assign(o.class_count(), {});
  for (std::size_t i = 0; i < o.class_count(); ++i) {
    const auto& edge = graph_->edge(i);
    if (!edge) {
      chain_[i].assign(marginals_[i].probs().begin(), marginals_[i].probs().end());
      continue;
    }
    const Coupling& c = edge->coupling;
    chain_[i].assign(c.rows() * c.cols(), 0.0);
    for (std::size_t x = 0; x < c.rows(); ++x) {
      double row = 0.0;
      for (std::size_t y = 0; y < c.cols(); ++y) row += c.at(x, y);
      // A parent range of zero mass is never drawn; its row stays zero.
      if (row > 0.0)
        for (std::size_t y = 0; y < c.cols(); ++y) chain_[i][x * c.cols() + y] = c.at(x, y) / row;
    }
  }
}

JointDistribution ProductMeasure(std::shared_ptr<const Ontology> o, std::vector<Marginal> marginals) {
  CheckMarginals(*o, marginals);
  JointDistribution j;
  j.mode_ = JointDistribution::Mode::kFactored;
  j.graph_ = std::make_shared<const DependencyGraph>(o->class_count());
  j.ontology_ = std::move(o);
  j.marginals_ = std::move(marginals);
  j.BuildChain();
  return j;
}

JointDistribution JointFromGraph(std::shared_ptr<const Ontology> o, std::vector<Marginal> marginals,
                                 DependencyGraph graph) {
  CheckMarginals(*o, marginals);
  if (graph.class_count() != o->class_count())
    Throw(ErrorCode::kInvalidGraph, "graph does not match the ontology");
  for (std::size_t i = 0; i < graph.class_count(); ++i) {
    const auto& edge = graph.edge(i);
    if (!edge) continue;
    CheckTableMarginals(edge->coupling.table(), marginals[edge->parent], marginals[i],
                        kMarginalMatchTolerance, ErrorCode::kMarginalMismatch,
                        "coupling " + o->cls(edge->parent).name + " -> " + o->cls(i).name);
  }
  JointDistribution j;
  j.mode_ = JointDistribution::Mode::kFactored;
  j.ontology_ = std::move(o);
  j.marginals_ = std::move(marginals);
  j.graph_ = std::make_shared<const DependencyGraph>(std::move(graph));
  j.BuildChain();
  return j;
}

JointDistribution JointDistribution::Dense(std::shared_ptr<const Ontology> o, std::vector<double> table,
                                           std::uint64_t cap) {
  std::uint64_t count = o->SpaceSize();
  if (count > cap) Throw(ErrorCode::kCapExceeded, "dense joint exceeds the enumeration cap");
  if (table.size() != count)
    Throw(ErrorCode::kInvalidArgument, "dense joint has " + std::to_string(table.size()) +
                                           " entries, space has " + std::to_string(count));
  double total = 0.0;
  for (double p : table) {
    if (!(p >= 0.0) || !std::isfinite(p))
      Throw(ErrorCode::kNegativeProbability, "dense joint has a negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > kDenseNormalizationTolerance)
    Throw(ErrorCode::kUnnormalized, "dense joint sums to " + std::to_string(total));
  JointDistribution j;
  j.mode_ = Mode::kDense;
  j.ontology_ = std::move(o);
  j.dense_ = std::move(table);
  return j;
}

double JointDistribution::Probability(std::span<const std::uint32_t> coords) const {
  if (mode_ == Mode::kDense) return dense_[Encode(*ontology_, coords).flat];
  const auto& radices = ontology_->radices();
  if (coords.size() != radices.size()) Throw(ErrorCode::kOutOfRange, "wrong number of coordinates");
  double p = 1.0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] >= radices[i]) Throw(ErrorCode::kOutOfRange, "coordinate out of range");
    const auto parent = graph_->parent(i);
    p *= parent ? chain_[i][coords[*parent] * radices[i] + coords[i]] : chain_[i][coords[i]];
  }
  return p;
}

double JointDistribution::Probability(std::uint64_t flat) const {
  if (mode_ == Mode::kDense) {
    if (flat >= dense_.size()) Throw(ErrorCode::kOutOfRange, "flat index out of range");
    return dense_[flat];
  }
  return Probability(Decode(*ontology_, flat).coords);
}

std::span<const double> JointDistribution::ChainRow(std::size_t i, std::uint32_t parent_value) const {
  const std::size_t n = ontology_->radices()[i];
  if (!graph_->parent(i)) return {chain_[i].data(), n};
  return {chain_[i].data() + static_cast<std::size_t>(parent_value) * n, n};
}

std::vector<double> JointDistribution::DenseTable(std::uint64_t cap) const {
  std::uint64_t count = ontology_->SpaceSize();
  if (count > cap)
    Throw(ErrorCode::kCapExceeded, std::to_string(count) + " partitions exceed the enumeration cap " +
                                       std::to_string(cap));
  if (mode_ == Mode::kDense) return dense_;

  const auto& radices = ontology_->radices();
  std::vector<double> table{1.0};
  for (std::size_t i = 0; i < radices.size(); ++i) {
    const std::size_t n = radices[i];
    const auto parent = graph_->parent(i);
    // Within the table over classes 0..i-1, the coordinate of class `p` is
    // (idx / stride_p) % radix_p with stride_p the product of radices p+1..i-1.
    std::size_t stride = 1;
    if (parent)
      for (std::size_t k = *parent + 1; k < i; ++k) stride *= radices[k];
    std::vector<double> next(table.size() * n);
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
      const double* row = parent ? chain_[i].data() + ((idx / stride) % radices[*parent]) * n
                                 : chain_[i].data();
      for (std::size_t v = 0; v < n; ++v) next[idx * n + v] = table[idx] * row[v];
    }
    table = std::move(next);
  }
  return table;
}

JointDistribution JointDistribution::Materialize(std::uint64_t cap) const {
  if (mode_ == Mode::kDense) return *this;
  JointDistribution j;
  j.mode_ = Mode::kDense;
  j.ontology_ = ontology_;
  j.dense_ = DenseTable(cap);
  return j;
}

Marginal MarginalOf(const JointDistribution& j, std::size_t class_index) {
  const Ontology& o = j.ontology();
  if (class_index >= o.class_count()) Throw(ErrorCode::kUnknownClass, "class index out of range");
  const auto& radices = o.radices();
  if (j.mode() == JointDistribution::Mode::kDense) {
    std::vector<double> probs(radices[class_index], 0.0);
    std::uint64_t stride = 1;
    for (std::size_t k = class_index + 1; k < radices.size(); ++k) stride *= radices[k];
    auto table = j.DenseTable(std::numeric_limits<std::uint64_t>::max());
    for (std::uint64_t flat = 0; flat < table.size(); ++flat)
      probs[(flat / stride) % radices[class_index]] += table[flat];
    return Marginal::FromDoubles(o.cls(class_index).name, std::move(probs));
  }
  // Propagate p(class k) = sum_x p(parent = x) P(k | x) in class order.
  std::vector<std::vector<double>> marg(class_index + 1);
  for (std::size_t i = 0; i <= class_index; ++i) {
    const auto parent = j.graph().parent(i);
    if (!parent) {
      marg[i].assign(j.marginals()[i].probs().begin(), j.marginals()[i].probs().end());
      continue;
    }
    marg[i].assign(radices[i], 0.0);
    for (std::uint32_t x = 0; x < radices[*parent]; ++x) {
      auto row = j.ChainRow(i, x);
      for (std::size_t v = 0; v < row.size(); ++v) marg[i][v] += marg[*parent][x] * row[v];
    }
  }
  if (!j.graph().parent(class_index)) return j.marginals()[class_index];
  return Marginal::FromDoubles(o.cls(class_index).name, std::move(marg[class_index]));
}

Marginal MarginalOf(const JointDistribution& j, std::string_view class_name) {
  return MarginalOf(j, j.ontology().ClassIndex(class_name));
}

JointDistribution MarginalProduct(const JointDistribution& j) {
  std::vector<Marginal> marginals;
  for (std::size_t i = 0; i < j.ontology().class_count(); ++i) marginals.push_back(MarginalOf(j, i));
  return ProductMeasure(j.ontology_ptr(), std::move(marginals));
}

UniformityReport UniformityAudit(const JointDistribution& j,
                                 std::span<const std::string> protected_classes, double tol) {
  UniformityReport report;
  report.tolerance = tol;
  for (const std::string& name : protected_classes) {
    Marginal m = MarginalOf(j, name);
    const double uniform = 1.0 / static_cast<double>(m.size());
    double worst = 0.0;
    for (double p : m.probs()) worst = std::max(worst, std::abs(p - uniform));
    UniformityFinding f{name, worst, worst <= tol};
    report.pass = report.pass && f.pass;
    report.findings.push_back(std::move(f));
  }
  return report;
}

}  // namespace peon
