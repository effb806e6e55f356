#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace lcbp {

using VarId = int;

struct Variable {
  VarId id = 0;
  int cardinality = 1;
};

// Assignment of states to variables; states are 0-based.
using JointState = std::map<VarId, int>;

// Dense non-negative table over an ascending set of discrete variables.
// Layout: the first (lowest-id) variable is the fastest-changing index.
// An empty scope is allowed and holds a single scalar value.
class FactorTable {
 public:
  FactorTable() : values_(1, 1.0) {}  // scalar 1

  FactorTable(std::vector<VarId> vars, std::vector<int> cards);  // zero-filled
  FactorTable(std::vector<VarId> vars, std::vector<int> cards, std::vector<double> values);

  static FactorTable scalar(double v);
  static FactorTable uniform(std::vector<VarId> vars, std::vector<int> cards);  // constant 1/size
  static FactorTable ones(std::vector<VarId> vars, std::vector<int> cards);

  const std::vector<VarId>& vars() const { return vars_; }
  const std::vector<int>& cards() const { return cards_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  std::size_t size() const { return values_.size(); }
  std::size_t arity() const { return vars_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }

  bool has_var(VarId v) const;
  int card_of(VarId v) const;  // throws if absent

  double sum() const;
  double max_value() const;

 private:
  std::vector<VarId> vars_;   // strictly ascending
  std::vector<int> cards_;    // per variable, >= 1
  std::vector<double> values_;

  void check_shape() const;
};

// Flat offset of an assignment: sum over k of state(vars[k]) * prod_{m<k} cards[m].
std::size_t linear_index(std::span<const VarId> vars, std::span<const int> cards,
                         const JointState& state);

// Inverse of linear_index over the same scope.
JointState unlinear_index(std::span<const VarId> vars, std::span<const int> cards,
                          std::size_t index);

// Pointwise product over the union scope, broadcasting each operand.
FactorTable table_multiply(const FactorTable& a, const FactorTable& b);

// Sums out every variable not in `keep` (keep must be a subset of a.vars).
FactorTable table_marginalize(const FactorTable& a, std::span<const VarId> keep);

// Scales to total 1. Throws degenerate_error on an all-zero table.
FactorTable table_normalize(const FactorTable& a);

// Fixes variable v to state s; v leaves the scope, values are the raw slice.
FactorTable table_slice(const FactorTable& a, VarId v, int s);

// Broadcasts onto a superset scope (missing variables become uniform axes).
FactorTable table_expand(const FactorTable& a, std::span<const VarId> vars,
                         std::span<const int> cards);

// Elementwise power; 0^p stays 0 for p > 0.
FactorTable table_pow(const FactorTable& a, double p);

// Max |a-b| over entries; scopes must match exactly.
double table_max_abs_diff(const FactorTable& a, const FactorTable& b);

// Entrywise geometric mean of same-scope tables, computed in the log domain.
// A zero in any operand makes that output entry zero. The empty list is the
// scalar 1.
FactorTable table_geomean(std::span<const FactorTable> tables);

namespace detail {
// Per-variable strides of `scope` inside table t (0 where t lacks the variable).
std::vector<std::size_t> strides_in(const FactorTable& t, std::span<const VarId> scope_vars);
}  // namespace detail

}  // namespace lcbp
