#pragma once

#include "imcv/product.hpp"

namespace imcv {

/// Sorted, duplicate-free set of product-state indices.
using StateSet = std::vector<std::uint32_t>;

struct Digraph {
  std::vector<std::vector<std::uint32_t>> adj;
  std::size_t n() const { return adj.size(); }
};

/// Graph of transitions that can carry positive probability in at least one
/// induced MC. Plain hi > 0 overstates connectivity on rows whose lower
/// bounds already sum to 1, so the slack condition is part of the edge test.
Digraph optimistic_graph(const ProductImc& product);

/// Maximal SCCs in reverse topological order (sinks first), states sorted.
std::vector<StateSet> tarjan_scc(const Digraph& g);

/// True iff q can place all its probability mass inside `inside` in some
/// induced MC: all lower bounds to the outside are 0 and the upper bounds
/// into `inside` sum to at least 1.
bool can_confine(const ProductImc& product, std::uint32_t q,
                 const std::vector<char>& inside);

/// States of `universe` from which every induced MC has a path to `targets`
/// (targets themselves included). Greatest-fixpoint avoid-set computation.
StateSet at_question(const ProductImc& product, const StateSet& targets,
                     const StateSet& universe);

/// States of `universe` with a path to `targets` through edges that are "on"
/// in at least one induced MC (targets included).
StateSet at_permanent(const ProductImc& product, const StateSet& targets,
                      const StateSet& universe);

/// A set that is a BSCC of at least one induced MC. `permanent` marks sets
/// that are BSCCs of every induced MC.
struct Bscc {
  StateSet states;
  bool accepting = false;
  bool permanent = false;
};

/// Potential and permanent BSCC search over the product.
std::vector<Bscc> find_bsccs(const ProductImc& product);

struct ComponentSets {
  std::vector<Bscc> bsccs;
  StateSet wc_potential, wc_permanent;
  StateSet lc_potential, lc_permanent;
  /// owners[q]: indices into `bsccs` of the potential BSCCs terminating the
  /// potential components q belongs to.
  std::vector<std::vector<std::uint32_t>> owners;
  /// per_bscc_component[b]: the largest component grown from bsccs[b].
  std::vector<StateSet> per_bscc_component;

  StateSet wc_largest() const;
  StateSet lc_largest() const;
};

/// Largest and permanent winning/losing component computation per BSCC.
ComponentSets find_components(const ProductImc& product, std::vector<Bscc> bsccs);

StateSet set_union(const StateSet& a, const StateSet& b);
StateSet set_difference(const StateSet& a, const StateSet& b);
bool set_contains(const StateSet& s, std::uint32_t q);

}  // namespace imcv
