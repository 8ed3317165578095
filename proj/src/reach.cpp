#include "imcv/reach.hpp"

#include <algorithm>
#include <cmath>

#include "imcv/errors.hpp"

namespace imcv {

double InducedMc::at(std::size_t q, std::size_t c) const {
  for (const auto& [col, p] : rows[q])
    if (col == c) return p;
  return 0.0;
}

std::vector<std::pair<std::uint32_t, double>> greedy_row(
    std::span<const IntervalEntry> row, const std::vector<double>& value,
    const std::vector<char>* prefer) {
  std::vector<std::uint32_t> order(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    double va = value[row[a].col], vb = value[row[b].col];
    if (va != vb) return va > vb;
    if (prefer) {
      char pa = (*prefer)[row[a].col], pb = (*prefer)[row[b].col];
      if (pa != pb) return pa > pb;
    }
    return row[a].col < row[b].col;
  });

  double slack = 1.0;
  for (const auto& e : row) slack -= e.lo;
  std::vector<std::pair<std::uint32_t, double>> out;
  std::vector<double> p(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) p[i] = row[i].lo;
  for (auto i : order) {
    if (slack <= 0.0) break;
    double add = std::min(row[i].hi - row[i].lo, slack);
    p[i] += add;
    slack -= add;
  }
  for (std::size_t i = 0; i < row.size(); ++i)
    if (p[i] > 0.0) out.emplace_back(row[i].col, p[i]);
  return out;
}

namespace {

double greedy_value(std::span<const IntervalEntry> row, const std::vector<double>& value) {
  double slack = 1.0, v = 0.0;
  for (const auto& e : row) slack -= e.lo;
  std::vector<std::uint32_t> order(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    double va = value[row[a].col], vb = value[row[b].col];
    if (va != vb) return va > vb;
    return row[a].col < row[b].col;
  });
  for (const auto& e : row) v += e.lo * value[e.col];
  for (auto i : order) {
    if (slack <= 0.0) break;
    double add = std::min(row[i].hi - row[i].lo, slack);
    v += add * value[row[i].col];
    slack -= add;
  }
  return v;
}

}  // namespace

ReachResult max_reach(const ProductImc& product, const StateSet& target, double tol,
                      std::size_t max_iters) {
  if (target.empty()) throw ModelError("max_reach: empty target set");
  const std::size_t n = product.n_states();
  std::vector<char> is_target(n, 0);
  for (auto q : target) is_target[q] = 1;

  // Sweep states sinks-first so values propagate backwards in one pass.
  std::vector<std::uint32_t> sweep;
  sweep.reserve(n);
  for (const auto& scc : tarjan_scc(optimistic_graph(product)))
    for (auto q : scc) sweep.push_back(q);

  ValueVector vv;
  vv.v.assign(n, 0.0);
  for (auto q : target) vv.v[q] = 1.0;

  double residual = 0.0;
  std::size_t iter = 0;
  for (; iter < max_iters; ++iter) {
    residual = 0.0;
    for (auto q : sweep) {
      if (is_target[q]) continue;
      double nv = greedy_value(product.trans.row(q), vv.v);
      nv = std::clamp(nv, 0.0, 1.0);
      residual = std::max(residual, std::abs(nv - vv.v[q]));
      vv.v[q] = nv;
    }
    if (residual < tol) break;
  }
  if (iter == max_iters)
    throw ConvergenceError("max_reach: no convergence after " +
                               std::to_string(max_iters) + " sweeps",
                           residual);
  vv.iterations = iter + 1;
  vv.residual = residual;

  // Witness MC. Greedy rows satisfy the fixpoint; to make them attain it,
  // states with positive value must route positive mass toward the target.
  // Grow a set D from the target, preferring D-members inside equal-value
  // tiers, and fix a row as soon as it touches D.
  InducedMc mc;
  mc.rows.resize(n);
  std::vector<char> in_d = is_target;
  std::vector<char> fixed(n, 0);
  for (std::size_t q = 0; q < n; ++q)
    if (is_target[q] || vv.v[q] <= 0.0) {
      mc.rows[q] = greedy_row(product.trans.row(q), vv.v);
      fixed[q] = 1;
    }
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (std::size_t q = 0; q < n; ++q) {
      if (fixed[q]) continue;
      auto row = greedy_row(product.trans.row(q), vv.v, &in_d);
      bool touches = false;
      for (const auto& [c, p] : row)
        if (in_d[c] && p > 0.0) {
          touches = true;
          break;
        }
      if (touches) {
        mc.rows[q] = std::move(row);
        fixed[q] = 1;
        in_d[q] = 1;
        progressed = true;
      }
    }
  }
  for (std::size_t q = 0; q < n; ++q)
    if (!fixed[q]) mc.rows[q] = greedy_row(product.trans.row(q), vv.v);

  return {std::move(vv), std::move(mc)};
}

namespace {

/// Feasible row supported inside `allowed`, interpolating lower bounds
/// toward the capped upper bounds so every usable edge into the set is on.
std::vector<std::pair<std::uint32_t, double>> confined_row(
    std::span<const IntervalEntry> row, const std::vector<char>& allowed) {
  double lo_sum = 0.0, hi_sum = 0.0;
  for (const auto& e : row) {
    if (!allowed[e.col]) continue;
    lo_sum += e.lo;
    hi_sum += e.hi;
  }
  double lambda = hi_sum > lo_sum ? (1.0 - lo_sum) / (hi_sum - lo_sum) : 0.0;
  lambda = std::clamp(lambda, 0.0, 1.0);
  std::vector<std::pair<std::uint32_t, double>> out;
  for (const auto& e : row) {
    if (!allowed[e.col]) continue;
    double p = e.lo + lambda * (e.hi - e.lo);
    if (p > 0.0) out.emplace_back(e.col, p);
  }
  return out;
}

/// Replace rows of component states with confined allocations: BSCC states
/// stay inside their smallest same-status BSCC (realizing it), the rest of
/// the component stays inside the component, so every component state is
/// absorbed into a same-status BSCC with probability 1. `side_accepting`
/// selects the winning (true) or losing (false) side.
void override_component_rows(const ProductImc& product, const ComponentSets& cs,
                             bool side_accepting, InducedMc& mc) {
  const std::size_t n = product.n_states();
  const StateSet largest = side_accepting ? cs.wc_largest() : cs.lc_largest();

  std::vector<std::size_t> smallest_bscc(n, SIZE_MAX);
  for (std::size_t b = 0; b < cs.bsccs.size(); ++b) {
    if (cs.bsccs[b].accepting != side_accepting) continue;
    for (auto q : cs.bsccs[b].states)
      if (smallest_bscc[q] == SIZE_MAX ||
          cs.bsccs[b].states.size() < cs.bsccs[smallest_bscc[q]].states.size())
        smallest_bscc[q] = b;
  }

  std::vector<char> in_largest(n, 0);
  for (auto q : largest) in_largest[q] = 1;
  std::vector<char> allowed(n, 0);
  for (auto q : largest) {
    if (smallest_bscc[q] != SIZE_MAX) {
      const StateSet& confine = cs.bsccs[smallest_bscc[q]].states;
      std::fill(allowed.begin(), allowed.end(), 0);
      for (auto x : confine) allowed[x] = 1;
      mc.rows[q] = confined_row(product.trans.row(q), allowed);
    } else {
      mc.rows[q] = confined_row(product.trans.row(q), in_largest);
    }
  }
}

}  // namespace

ExtremalMcs extremal_product_mcs(const ProductImc& product, const ComponentSets& cs,
                                 double tol, std::size_t max_iters) {
  ExtremalMcs out;
  StateSet wc = cs.wc_largest(), lc = cs.lc_largest();
  const std::size_t n = product.n_states();

  auto solve_side = [&](const StateSet& target, bool accepting) -> ReachResult {
    if (target.empty()) {
      // No component of this kind: value identically 0, any feasible rows.
      ReachResult r;
      r.values.v.assign(n, 0.0);
      r.values.iterations = 0;
      r.values.residual = 0.0;
      std::vector<double> zero(n, 0.0);
      r.mc.rows.resize(n);
      for (std::size_t q = 0; q < n; ++q)
        r.mc.rows[q] = greedy_row(product.trans.row(q), zero);
      return r;
    }
    ReachResult r = max_reach(product, target, tol, max_iters);
    override_component_rows(product, cs, accepting, r.mc);
    return r;
  };

  out.upper = solve_side(wc, true);
  out.lower = solve_side(lc, false);
  return out;
}

}  // namespace imcv
