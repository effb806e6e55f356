#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "lcbp/table.hpp"

namespace lcbp {

// Bipartite variable/factor structure. Immutable after construction; safe to
// share across threads. Variable ids must be unique; fresh graphs use ids
// contiguous from 0, but derived graphs (after clamping) may have gaps.
class FactorGraph {
 public:
  FactorGraph() = default;
  FactorGraph(std::vector<Variable> variables, std::vector<FactorTable> factors);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<FactorTable>& factors() const { return factors_; }
  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_factors() const { return factors_.size(); }

  bool has_variable(VarId v) const { return pos_.count(v) != 0; }
  std::size_t position_of(VarId v) const;  // index into variables()
  int cardinality(VarId v) const;

  // N(i): indices of factors containing i, ascending.
  const std::vector<int>& nbv(VarId v) const;
  // Scope of factor f (ascending variable ids).
  const std::vector<VarId>& nbf(int f) const { return factors_[static_cast<std::size_t>(f)].vars(); }
  // Delta(i) = union of N(i) scopes, includes i itself when i has factors.
  const std::vector<VarId>& delta(VarId v) const;
  // Markov blanket: delta(i) minus i.
  const std::vector<VarId>& blanket(VarId v) const;

  std::vector<int> cards_of(std::span<const VarId> vars) const;

 private:
  std::vector<Variable> vars_;  // ascending by id
  std::vector<FactorTable> factors_;
  std::unordered_map<VarId, std::size_t> pos_;
  std::vector<std::vector<int>> nbv_;
  std::vector<std::vector<VarId>> delta_, blanket_;
};

// Slices every factor containing i at x_i = s (unnormalized) and drops i.
FactorGraph clamp_variable(const FactorGraph& g, VarId i, int s);

// Multiplies factors sharing an identical scope into one, keeping first-seen
// order. Optional pass; duplicate scopes are otherwise permitted.
FactorGraph merge_duplicate_scopes(const FactorGraph& g);

// Text format:
//   line 1: F (factor count), then per factor a blank-line-separated block:
//   n / n variable ids / n cardinalities / nnz / nnz lines "index value".
// Omitted entries are zero; '#' starts a comment line. Variables are the
// union of the factor scopes.
FactorGraph read_factor_graph(std::istream& in);
void write_factor_graph(std::ostream& out, const FactorGraph& g,
                        const std::string& header_comment = "");

FactorGraph load_factor_graph(const std::string& path);
void save_factor_graph(const std::string& path, const FactorGraph& g,
                       const std::string& header_comment = "");

// Shortest round-trip decimal form of a double (used by all text formats).
std::string format_double(double v);

}  // namespace lcbp
