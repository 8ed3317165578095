#pragma once

#include "imcv/dra.hpp"
#include "imcv/interval_matrix.hpp"

namespace imcv {

/// Synchronized product of an IMC and a DRA. State <Q_j, s> carries the
/// Rabin-pair memberships of s; the transition to <Q_l, s'> copies the IMC
/// bounds when s' = delta(s, L(Q_l)) and is structurally zero otherwise.
struct ProductImc {
  std::size_t n_imc_states = 0;
  std::size_t n_dra_states = 0;
  std::size_t n_pairs = 0;
  IntervalMatrix trans;
  std::vector<std::uint32_t> e_mask;     // per product state, bit i: state in E_i
  std::vector<std::uint32_t> f_mask;     // per product state, bit i: state in F_i
  std::vector<std::uint32_t> imc_state;  // origin Q_j per product state
  std::vector<std::uint32_t> dra_state;  // origin s per product state
  std::vector<std::uint32_t> initial;    // product index of <Q_j, s0> per IMC state

  std::size_t n_states() const { return trans.size(); }
};

/// Full m*k product per the synchronized-product construction.
/// Throws ModelError if some IMC proposition is not an AP of the DRA.
ProductImc build_product(const Imc& imc, const Dra& dra);

/// Restriction to states reachable from the initial set through edges that
/// can carry positive probability in some induced MC. Initial states are
/// always retained.
ProductImc prune_unreachable(const ProductImc& product);

/// True when the entry (q, c) can be positive in at least one induced MC:
/// hi > 0 and (lo > 0 or the rest of the row's lower bounds leave slack).
bool edge_usable(const ProductImc& product, std::size_t q, std::size_t c);

}  // namespace imcv
