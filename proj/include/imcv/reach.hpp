#pragma once

#include "imcv/components.hpp"

namespace imcv {

/// Row-stochastic matrix induced by an interval matrix (entries within the
/// bounds, rows summing to 1).
struct InducedMc {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;

  std::size_t n_states() const { return rows.size(); }
  double at(std::size_t q, std::size_t c) const;
};

struct ValueVector {
  std::vector<double> v;
  std::size_t iterations = 0;
  double residual = 0.0;
};

struct ReachResult {
  ValueVector values;
  InducedMc mc;
};

/// Largest value-maximizing allocation of one interval row against a value
/// vector: successors sorted by value (descending, ties by ascending index,
/// with optional preference flags inside equal-value groups), each given its
/// lower bound plus capped slack in order.
std::vector<std::pair<std::uint32_t, double>> greedy_row(
    std::span<const IntervalEntry> row, const std::vector<double>& value,
    const std::vector<char>* prefer = nullptr);

/// Least upper bound on the probability of reaching `target` over all
/// adversaries, by interval value iteration (Gauss-Seidel sweeps in reverse
/// topological order). The returned MC attains the values; rows of states
/// with positive value carry positive probability towards the target.
/// Throws ConvergenceError when max_iters is exceeded.
ReachResult max_reach(const ProductImc& product, const StateSet& target,
                      double tol = 1e-9, std::size_t max_iters = 100000);

struct ExtremalMcs {
  ReachResult upper;  // best case: maximizes reach of the winning components
  ReachResult lower;  // worst case: maximizes reach of the losing components
};

/// Best-case and worst-case induced product MCs. Component-internal rows are
/// filled with confined allocations so that every largest-winning-component
/// state of the best case reaches an accepting BSCC with probability 1 (and
/// symmetrically for the worst case); p_max(q) = upper value, p_min(q) =
/// 1 - lower value.
ExtremalMcs extremal_product_mcs(const ProductImc& product, const ComponentSets& cs,
                                 double tol = 1e-9, std::size_t max_iters = 100000);

}  // namespace imcv
