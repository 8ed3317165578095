#include "imcv/product.hpp"

#include <deque>

#include "imcv/errors.hpp"

namespace imcv {

ProductImc build_product(const Imc& imc, const Dra& dra) {
  const std::size_t m = imc.n_states();
  const std::size_t k = dra.n_states();
  if (dra.pairs.size() > 32) throw ModelError("product: more than 32 Rabin pairs");

  // Letter read when entering each IMC state.
  std::vector<std::uint32_t> letter(m);
  for (std::size_t j = 0; j < m; ++j) letter[j] = dra.valuation_of(imc.props[j]);

  std::vector<std::uint32_t> e_of_s(k, 0), f_of_s(k, 0);
  for (std::size_t i = 0; i < dra.pairs.size(); ++i) {
    for (auto s : dra.pairs[i].e_states) e_of_s[s] |= 1u << i;
    for (auto s : dra.pairs[i].f_states) f_of_s[s] |= 1u << i;
  }

  ProductImc p;
  p.n_imc_states = m;
  p.n_dra_states = k;
  p.n_pairs = dra.pairs.size();
  p.trans = IntervalMatrix(m * k);
  p.e_mask.resize(m * k);
  p.f_mask.resize(m * k);
  p.imc_state.resize(m * k);
  p.dra_state.resize(m * k);
  auto index = [k](std::size_t j, std::size_t s) { return j * k + s; };

  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t s = 0; s < k; ++s) {
      std::size_t q = index(j, s);
      p.imc_state[q] = static_cast<std::uint32_t>(j);
      p.dra_state[q] = static_cast<std::uint32_t>(s);
      p.e_mask[q] = e_of_s[s];
      p.f_mask[q] = f_of_s[s];
      for (const auto& e : imc.trans.row(j)) {
        std::uint32_t s_next = dra.step(static_cast<std::uint32_t>(s), letter[e.col]);
        p.trans.set(q, index(e.col, s_next), e.lo, e.hi);
      }
    }

  p.initial.resize(m);
  for (std::size_t j = 0; j < m; ++j)
    p.initial[j] = static_cast<std::uint32_t>(index(j, dra.initial));
  return p;
}

bool edge_usable(const ProductImc& product, std::size_t q, std::size_t c) {
  auto [lo, hi] = product.trans.at(q, c);
  if (hi <= 0.0) return false;
  if (lo > 0.0) return true;
  return product.trans.row_lo_sum(q) - lo < 1.0;
}

ProductImc prune_unreachable(const ProductImc& product) {
  const std::size_t n = product.n_states();
  std::vector<char> keep(n, 0);
  std::deque<std::uint32_t> queue;
  for (auto q : product.initial)
    if (!keep[q]) {
      keep[q] = 1;
      queue.push_back(q);
    }
  while (!queue.empty()) {
    std::uint32_t q = queue.front();
    queue.pop_front();
    double lo_sum = product.trans.row_lo_sum(q);
    for (const auto& e : product.trans.row(q)) {
      bool usable = e.lo > 0.0 || lo_sum - e.lo < 1.0;
      if (usable && !keep[e.col]) {
        keep[e.col] = 1;
        queue.push_back(e.col);
      }
    }
  }

  std::vector<std::uint32_t> remap(n, UINT32_MAX);
  std::size_t n_new = 0;
  for (std::size_t q = 0; q < n; ++q)
    if (keep[q]) remap[q] = static_cast<std::uint32_t>(n_new++);

  ProductImc out;
  out.n_imc_states = product.n_imc_states;
  out.n_dra_states = product.n_dra_states;
  out.n_pairs = product.n_pairs;
  out.trans = IntervalMatrix(n_new);
  out.e_mask.resize(n_new);
  out.f_mask.resize(n_new);
  out.imc_state.resize(n_new);
  out.dra_state.resize(n_new);
  for (std::size_t q = 0; q < n; ++q) {
    if (!keep[q]) continue;
    std::size_t qn = remap[q];
    out.e_mask[qn] = product.e_mask[q];
    out.f_mask[qn] = product.f_mask[q];
    out.imc_state[qn] = product.imc_state[q];
    out.dra_state[qn] = product.dra_state[q];
    for (const auto& e : product.trans.row(q)) {
      // Successors of kept states are kept whenever the edge is usable;
      // unusable entries are dropped with their row context intact.
      if (remap[e.col] != UINT32_MAX)
        out.trans.set(qn, remap[e.col], e.lo, e.hi);
    }
  }
  out.initial.resize(product.initial.size());
  for (std::size_t j = 0; j < product.initial.size(); ++j)
    out.initial[j] = remap[product.initial[j]];
  return out;
}

}  // namespace imcv
