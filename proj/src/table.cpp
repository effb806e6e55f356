#include "lcbp/table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lcbp/errors.hpp"

namespace lcbp {

namespace {

std::size_t checked_size(const std::vector<int>& cards) {
  std::size_t n = 1;
  for (int c : cards) {
    if (c < 1) throw std::domain_error("cardinality must be >= 1");
    n *= static_cast<std::size_t>(c);
  }
  return n;
}

}  // namespace

void FactorTable::check_shape() const {
  if (vars_.size() != cards_.size())
    throw std::domain_error("vars/cards length mismatch");
  for (std::size_t k = 1; k < vars_.size(); ++k)
    if (vars_[k - 1] >= vars_[k])
      throw std::domain_error("table scope must be strictly ascending");
  if (values_.size() != checked_size(cards_))
    throw std::domain_error("table values length does not match cardinalities");
  for (double v : values_)
    if (!(v >= 0.0))
      throw std::domain_error("table values must be non-negative");
}

FactorTable::FactorTable(std::vector<VarId> vars, std::vector<int> cards)
    : vars_(std::move(vars)), cards_(std::move(cards)) {
  values_.assign(checked_size(cards_), 0.0);
  check_shape();
}

FactorTable::FactorTable(std::vector<VarId> vars, std::vector<int> cards,
                         std::vector<double> values)
    : vars_(std::move(vars)), cards_(std::move(cards)), values_(std::move(values)) {
  check_shape();
}

FactorTable FactorTable::scalar(double v) {
  return FactorTable({}, {}, {v});
}

FactorTable FactorTable::uniform(std::vector<VarId> vars, std::vector<int> cards) {
  FactorTable t(std::move(vars), std::move(cards));
  const double w = 1.0 / static_cast<double>(t.size());
  std::fill(t.values_.begin(), t.values_.end(), w);
  return t;
}

FactorTable FactorTable::ones(std::vector<VarId> vars, std::vector<int> cards) {
  FactorTable t(std::move(vars), std::move(cards));
  std::fill(t.values_.begin(), t.values_.end(), 1.0);
  return t;
}

bool FactorTable::has_var(VarId v) const {
  return std::binary_search(vars_.begin(), vars_.end(), v);
}

int FactorTable::card_of(VarId v) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
  if (it == vars_.end() || *it != v)
    throw std::domain_error("variable " + std::to_string(v) + " not in table scope");
  return cards_[static_cast<std::size_t>(it - vars_.begin())];
}

double FactorTable::sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

double FactorTable::max_value() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

std::size_t linear_index(std::span<const VarId> vars, std::span<const int> cards,
                         const JointState& state) {
  std::size_t idx = 0, stride = 1;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    auto it = state.find(vars[k]);
    if (it == state.end())
      throw std::domain_error("assignment misses variable " + std::to_string(vars[k]));
    if (it->second < 0 || it->second >= cards[k])
      throw std::domain_error("state out of range for variable " + std::to_string(vars[k]));
    idx += static_cast<std::size_t>(it->second) * stride;
    stride *= static_cast<std::size_t>(cards[k]);
  }
  return idx;
}

JointState unlinear_index(std::span<const VarId> vars, std::span<const int> cards,
                          std::size_t index) {
  JointState s;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    s[vars[k]] = static_cast<int>(index % static_cast<std::size_t>(cards[k]));
    index /= static_cast<std::size_t>(cards[k]);
  }
  if (index != 0) throw std::domain_error("linear index out of range");
  return s;
}

namespace detail {

std::vector<std::size_t> strides_in(const FactorTable& t, std::span<const VarId> scope_vars) {
  std::vector<std::size_t> out(scope_vars.size(), 0);
  for (std::size_t k = 0; k < scope_vars.size(); ++k) {
    std::size_t stride = 1;
    for (std::size_t m = 0; m < t.vars().size(); ++m) {
      if (t.vars()[m] == scope_vars[k]) {
        out[k] = stride;
        break;
      }
      stride *= static_cast<std::size_t>(t.cards()[m]);
    }
  }
  return out;
}

}  // namespace detail

namespace {

// Walks every joint state of a scope while tracking aligned linear offsets in
// up to two operand tables (stride 0 = broadcast axis).
struct Odometer {
  std::span<const int> cards;
  std::vector<int> state;
  explicit Odometer(std::span<const int> c) : cards(c), state(c.size(), 0) {}

  // Returns false after the last state.
  bool advance(std::size_t& ia, std::span<const std::size_t> sa,
               std::size_t& ib, std::span<const std::size_t> sb) {
    for (std::size_t k = 0; k < state.size(); ++k) {
      ++state[k];
      ia += sa[k];
      ib += sb[k];
      if (state[k] < cards[k]) return true;
      state[k] = 0;
      ia -= sa[k] * static_cast<std::size_t>(cards[k]);
      ib -= sb[k] * static_cast<std::size_t>(cards[k]);
    }
    return false;
  }
};

}  // namespace

FactorTable table_multiply(const FactorTable& a, const FactorTable& b) {
  // Union scope, ascending; verify shared cardinalities.
  std::vector<VarId> vars;
  std::vector<int> cards;
  std::size_t ka = 0, kb = 0;
  while (ka < a.arity() || kb < b.arity()) {
    if (kb == b.arity() || (ka < a.arity() && a.vars()[ka] < b.vars()[kb])) {
      vars.push_back(a.vars()[ka]);
      cards.push_back(a.cards()[ka]);
      ++ka;
    } else if (ka == a.arity() || b.vars()[kb] < a.vars()[ka]) {
      vars.push_back(b.vars()[kb]);
      cards.push_back(b.cards()[kb]);
      ++kb;
    } else {
      if (a.cards()[ka] != b.cards()[kb])
        throw std::domain_error("mismatched cardinalities for shared variable " +
                                std::to_string(a.vars()[ka]));
      vars.push_back(a.vars()[ka]);
      cards.push_back(a.cards()[ka]);
      ++ka;
      ++kb;
    }
  }
  FactorTable out(std::move(vars), std::move(cards));
  const auto sa = detail::strides_in(a, out.vars());
  const auto sb = detail::strides_in(b, out.vars());
  Odometer od(out.cards());
  std::size_t ia = 0, ib = 0;
  for (std::size_t r = 0;; ++r) {
    out[r] = a[ia] * b[ib];
    if (!od.advance(ia, sa, ib, sb)) break;
  }
  return out;
}

FactorTable table_marginalize(const FactorTable& a, std::span<const VarId> keep) {
  std::vector<VarId> kv(keep.begin(), keep.end());
  std::sort(kv.begin(), kv.end());
  std::vector<int> kc;
  kc.reserve(kv.size());
  for (VarId v : kv) {
    if (!a.has_var(v))
      throw std::domain_error("marginalize keep-set is not a subset of the scope");
    kc.push_back(a.card_of(v));
  }
  FactorTable out(std::move(kv), std::move(kc));
  const auto so = detail::strides_in(out, a.vars());
  static const std::vector<std::size_t> no_strides;
  std::vector<std::size_t> zero(a.arity(), 0);
  Odometer od(a.cards());
  std::size_t io = 0, unused = 0;
  for (std::size_t r = 0;; ++r) {
    out[io] += a[r];
    if (!od.advance(io, so, unused, zero)) break;
  }
  return out;
}

FactorTable table_normalize(const FactorTable& a) {
  const double z = a.sum();
  if (z <= 0.0) throw degenerate_error("cannot normalize an all-zero table");
  FactorTable out = a;
  for (double& v : out.values()) v /= z;
  return out;
}

FactorTable table_slice(const FactorTable& a, VarId v, int s) {
  if (!a.has_var(v)) throw std::domain_error("slice variable not in scope");
  if (s < 0 || s >= a.card_of(v)) throw std::domain_error("slice state out of range");
  std::vector<VarId> vars;
  std::vector<int> cards;
  std::size_t vstride = 1;
  for (std::size_t k = 0; k < a.arity(); ++k) {
    if (a.vars()[k] == v) break;
    vstride *= static_cast<std::size_t>(a.cards()[k]);
  }
  for (std::size_t k = 0; k < a.arity(); ++k) {
    if (a.vars()[k] == v) continue;
    vars.push_back(a.vars()[k]);
    cards.push_back(a.cards()[k]);
  }
  FactorTable out(std::move(vars), std::move(cards));
  const auto sa = detail::strides_in(a, out.vars());
  std::vector<std::size_t> zero(out.arity(), 0);
  Odometer od(out.cards());
  std::size_t ia = static_cast<std::size_t>(s) * vstride, unused = 0;
  for (std::size_t r = 0;; ++r) {
    out[r] = a[ia];
    if (!od.advance(ia, sa, unused, zero)) break;
  }
  return out;
}

FactorTable table_expand(const FactorTable& a, std::span<const VarId> vars,
                         std::span<const int> cards) {
  for (VarId v : a.vars())
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      throw std::domain_error("expand target scope must contain the table scope");
  FactorTable ones_t = FactorTable::ones(std::vector<VarId>(vars.begin(), vars.end()),
                                         std::vector<int>(cards.begin(), cards.end()));
  return table_multiply(a, ones_t);
}

FactorTable table_pow(const FactorTable& a, double p) {
  FactorTable out = a;
  for (double& v : out.values()) v = (v == 0.0) ? 0.0 : std::pow(v, p);
  return out;
}

double table_max_abs_diff(const FactorTable& a, const FactorTable& b) {
  if (a.vars() != b.vars() || a.cards() != b.cards())
    throw std::domain_error("table_max_abs_diff requires identical scopes");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

FactorTable table_geomean(std::span<const FactorTable> tables) {
  if (tables.empty()) return FactorTable::scalar(1.0);
  const FactorTable& first = tables.front();
  for (const FactorTable& t : tables)
    if (t.vars() != first.vars() || t.cards() != first.cards())
      throw std::domain_error("table_geomean requires identical scopes");
  FactorTable out(first.vars(), first.cards());
  const double inv_n = 1.0 / static_cast<double>(tables.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    double acc = 0.0;
    bool zero = false;
    for (const FactorTable& t : tables) {
      if (t[k] == 0.0) {
        zero = true;
        break;
      }
      acc += std::log(t[k]);
    }
    out[k] = zero ? 0.0 : std::exp(acc * inv_n);
  }
  return out;
}

}  // namespace lcbp
