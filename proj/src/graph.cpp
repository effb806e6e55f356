#include "lcbp/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lcbp/errors.hpp"

namespace lcbp {

FactorGraph::FactorGraph(std::vector<Variable> variables, std::vector<FactorTable> factors)
    : vars_(std::move(variables)), factors_(std::move(factors)) {
  std::sort(vars_.begin(), vars_.end(),
            [](const Variable& a, const Variable& b) { return a.id < b.id; });
  for (std::size_t k = 0; k < vars_.size(); ++k) {
    if (vars_[k].cardinality < 1) throw std::domain_error("variable cardinality must be >= 1");
    if (!pos_.emplace(vars_[k].id, k).second)
      throw std::domain_error("duplicate variable id " + std::to_string(vars_[k].id));
  }
  nbv_.assign(vars_.size(), {});
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    const FactorTable& t = factors_[f];
    for (std::size_t k = 0; k < t.arity(); ++k) {
      auto it = pos_.find(t.vars()[k]);
      if (it == pos_.end())
        throw std::domain_error("factor references unknown variable " +
                                std::to_string(t.vars()[k]));
      if (vars_[it->second].cardinality != t.cards()[k])
        throw std::domain_error("factor cardinality disagrees with variable " +
                                std::to_string(t.vars()[k]));
      nbv_[it->second].push_back(static_cast<int>(f));
    }
  }
  delta_.assign(vars_.size(), {});
  blanket_.assign(vars_.size(), {});
  for (std::size_t k = 0; k < vars_.size(); ++k) {
    std::vector<VarId> d;
    for (int f : nbv_[k])
      for (VarId v : factors_[static_cast<std::size_t>(f)].vars()) d.push_back(v);
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    blanket_[k] = d;
    std::erase(blanket_[k], vars_[k].id);
    delta_[k] = std::move(d);
    if (delta_[k].empty()) delta_[k].push_back(vars_[k].id);
    else if (!std::binary_search(delta_[k].begin(), delta_[k].end(), vars_[k].id))
      throw std::domain_error("internal: delta misses its own variable");
  }
}

std::size_t FactorGraph::position_of(VarId v) const {
  auto it = pos_.find(v);
  if (it == pos_.end())
    throw std::domain_error("unknown variable " + std::to_string(v));
  return it->second;
}

int FactorGraph::cardinality(VarId v) const { return vars_[position_of(v)].cardinality; }

const std::vector<int>& FactorGraph::nbv(VarId v) const { return nbv_[position_of(v)]; }
const std::vector<VarId>& FactorGraph::delta(VarId v) const { return delta_[position_of(v)]; }
const std::vector<VarId>& FactorGraph::blanket(VarId v) const { return blanket_[position_of(v)]; }

std::vector<int> FactorGraph::cards_of(std::span<const VarId> vars) const {
  std::vector<int> out;
  out.reserve(vars.size());
  for (VarId v : vars) out.push_back(cardinality(v));
  return out;
}

FactorGraph clamp_variable(const FactorGraph& g, VarId i, int s) {
  if (!g.has_variable(i)) throw std::domain_error("clamp: unknown variable");
  if (s < 0 || s >= g.cardinality(i)) throw std::domain_error("clamp: state out of range");
  std::vector<Variable> vars;
  vars.reserve(g.num_variables() - 1);
  for (const Variable& v : g.variables())
    if (v.id != i) vars.push_back(v);
  std::vector<FactorTable> factors;
  factors.reserve(g.num_factors());
  for (const FactorTable& t : g.factors())
    factors.push_back(t.has_var(i) ? table_slice(t, i, s) : t);
  return FactorGraph(std::move(vars), std::move(factors));
}

FactorGraph merge_duplicate_scopes(const FactorGraph& g) {
  std::map<std::vector<VarId>, std::size_t> seen;  // scope -> output index
  std::vector<FactorTable> out;
  for (const FactorTable& t : g.factors()) {
    auto [it, fresh] = seen.emplace(t.vars(), out.size());
    if (fresh)
      out.push_back(t);
    else
      out[it->second] = table_multiply(out[it->second], t);
  }
  return FactorGraph(g.variables(), std::move(out));
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, p);
}

namespace {

// Reads the next non-comment, non-blank line; returns false at EOF.
bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    std::size_t k = line.find_first_not_of(" \t\r");
    if (k == std::string::npos) continue;
    if (line[k] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

FactorGraph read_factor_graph(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw std::domain_error("factor graph file: empty input");
  std::size_t nfactors = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> nfactors)) throw std::domain_error("factor graph file: bad factor count");
  }
  std::map<VarId, int> cards_seen;
  std::vector<FactorTable> factors;
  factors.reserve(nfactors);
  for (std::size_t f = 0; f < nfactors; ++f) {
    if (!next_content_line(in, line))
      throw std::domain_error("factor graph file: truncated factor block");
    std::size_t n = 0;
    {
      std::istringstream ls(line);
      if (!(ls >> n)) throw std::domain_error("factor graph file: bad variable count");
    }
    std::vector<VarId> ids(n);
    std::vector<int> cards(n);
    if (n > 0) {
      if (!next_content_line(in, line)) throw std::domain_error("factor graph file: missing ids");
      std::istringstream ls(line);
      for (auto& v : ids)
        if (!(ls >> v)) throw std::domain_error("factor graph file: bad variable id");
      if (!next_content_line(in, line))
        throw std::domain_error("factor graph file: missing cardinalities");
      std::istringstream cs(line);
      for (auto& c : cards)
        if (!(cs >> c) || c < 1) throw std::domain_error("factor graph file: bad cardinality");
    } else {
      // Scalar factor: no id/cardinality lines.
    }
    std::size_t total = 1;
    for (int c : cards) total *= static_cast<std::size_t>(c);
    if (!next_content_line(in, line)) throw std::domain_error("factor graph file: missing nnz");
    std::size_t nnz = 0;
    {
      std::istringstream ls(line);
      if (!(ls >> nnz)) throw std::domain_error("factor graph file: bad nnz");
    }
    std::vector<double> values(total, 0.0);
    for (std::size_t e = 0; e < nnz; ++e) {
      if (!next_content_line(in, line))
        throw std::domain_error("factor graph file: truncated entries");
      std::istringstream ls(line);
      std::size_t idx;
      double val;
      if (!(ls >> idx >> val)) throw std::domain_error("factor graph file: bad entry line");
      if (idx >= total) throw std::domain_error("factor graph file: entry index out of range");
      if (!(val >= 0.0)) throw std::domain_error("factor graph file: negative entry");
      values[idx] = val;
    }
    // Canonicalize to ascending scope, permuting the layout if needed.
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
    for (std::size_t k = 1; k < n; ++k)
      if (ids[order[k - 1]] == ids[order[k]])
        throw std::domain_error("factor graph file: repeated variable in one factor");
    std::vector<VarId> sids(n);
    std::vector<int> scards(n);
    for (std::size_t k = 0; k < n; ++k) {
      sids[k] = ids[order[k]];
      scards[k] = cards[order[k]];
    }
    std::vector<double> svalues;
    if (order.empty() || std::is_sorted(ids.begin(), ids.end())) {
      svalues = std::move(values);
    } else {
      svalues.assign(total, 0.0);
      std::vector<std::size_t> in_stride(n, 1), out_stride_of_input(n, 0);
      for (std::size_t k = 1; k < n; ++k)
        in_stride[k] = in_stride[k - 1] * static_cast<std::size_t>(cards[k - 1]);
      std::size_t stride = 1;
      for (std::size_t k = 0; k < n; ++k) {
        out_stride_of_input[order[k]] = stride;
        stride *= static_cast<std::size_t>(scards[k]);
      }
      for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx, oidx = 0;
        for (std::size_t k = 0; k < n; ++k) {
          std::size_t st = rest % static_cast<std::size_t>(cards[k]);
          rest /= static_cast<std::size_t>(cards[k]);
          oidx += st * out_stride_of_input[k];
        }
        svalues[oidx] = values[idx];
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      auto [it, fresh] = cards_seen.emplace(sids[k], scards[k]);
      if (!fresh && it->second != scards[k])
        throw std::domain_error("factor graph file: inconsistent cardinality for variable " +
                                std::to_string(sids[k]));
    }
    factors.emplace_back(std::move(sids), std::move(scards), std::move(svalues));
  }
  std::vector<Variable> vars;
  vars.reserve(cards_seen.size());
  for (auto& [id, c] : cards_seen) vars.push_back(Variable{id, c});
  return FactorGraph(std::move(vars), std::move(factors));
}

void write_factor_graph(std::ostream& out, const FactorGraph& g,
                        const std::string& header_comment) {
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  out << g.num_factors() << "\n";
  for (const FactorTable& t : g.factors()) {
    out << "\n" << t.arity() << "\n";
    if (t.arity() > 0) {
      for (std::size_t k = 0; k < t.arity(); ++k)
        out << (k ? " " : "") << t.vars()[k];
      out << "\n";
      for (std::size_t k = 0; k < t.arity(); ++k)
        out << (k ? " " : "") << t.cards()[k];
      out << "\n";
    }
    std::size_t nnz = 0;
    for (double v : t.values())
      if (v != 0.0) ++nnz;
    out << nnz << "\n";
    for (std::size_t k = 0; k < t.size(); ++k)
      if (t[k] != 0.0) out << k << " " << format_double(t[k]) << "\n";
  }
}

FactorGraph load_factor_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot open " + path);
  return read_factor_graph(in);
}

void save_factor_graph(const std::string& path, const FactorGraph& g,
                       const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw std::domain_error("cannot open " + path + " for writing");
  write_factor_graph(out, g, header_comment);
}

}  // namespace lcbp
