#include "imcv/components.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "imcv/errors.hpp"

namespace imcv {

namespace {
constexpr double kFeasTol = 1e-9;

struct Ctx {
  const ProductImc& p;
  std::vector<double> lo_sum;
  std::vector<std::vector<std::uint32_t>> usable_adj;
  // Predecessor lists over all hi > 0 entries: (pred, lo, hi).
  std::vector<std::vector<std::tuple<std::uint32_t, double, double>>> preds;

  explicit Ctx(const ProductImc& product) : p(product) {
    const std::size_t n = p.n_states();
    lo_sum.resize(n);
    usable_adj.resize(n);
    preds.resize(n);
    for (std::size_t q = 0; q < n; ++q) lo_sum[q] = p.trans.row_lo_sum(q);
    for (std::size_t q = 0; q < n; ++q)
      for (const auto& e : p.trans.row(q)) {
        preds[e.col].emplace_back(static_cast<std::uint32_t>(q), e.lo, e.hi);
        if (e.lo > 0.0 || lo_sum[q] - e.lo < 1.0)
          usable_adj[q].push_back(e.col);
      }
  }

  bool usable(std::uint32_t q, double lo, double hi) const {
    return hi > 0.0 && (lo > 0.0 || lo_sum[q] - lo < 1.0);
  }
};

std::vector<char> mask_of(const StateSet& s, std::size_t n) {
  std::vector<char> m(n, 0);
  for (auto q : s) m[q] = 1;
  return m;
}

StateSet set_of(const std::vector<char>& mask) {
  StateSet out;
  for (std::size_t q = 0; q < mask.size(); ++q)
    if (mask[q]) out.push_back(static_cast<std::uint32_t>(q));
  return out;
}

/// Avoid-set greatest fixpoint: returns the mask of states in `universe`
/// from which every induced MC has a path to `targets`.
std::vector<char> at_question_mask(const Ctx& ctx, const std::vector<char>& target_mask,
                                   const std::vector<char>& universe_mask) {
  const std::size_t n = ctx.p.n_states();
  std::vector<char> avoid(n, 0);
  for (std::size_t q = 0; q < n; ++q) avoid[q] = universe_mask[q] && !target_mask[q];

  std::vector<double> hi_in(n, 0.0);
  std::vector<int> lo_out(n, 0);
  std::deque<std::uint32_t> queue;
  std::vector<char> queued(n, 0);
  for (std::size_t q = 0; q < n; ++q) {
    if (!avoid[q]) continue;
    for (const auto& e : ctx.p.trans.row(q)) {
      if (avoid[e.col])
        hi_in[q] += e.hi;
      else if (e.lo > 0.0)
        ++lo_out[q];
    }
    if (lo_out[q] > 0 || hi_in[q] < 1.0 - kFeasTol) {
      queue.push_back(static_cast<std::uint32_t>(q));
      queued[q] = 1;
    }
  }
  while (!queue.empty()) {
    std::uint32_t q = queue.front();
    queue.pop_front();
    queued[q] = 0;
    if (!avoid[q]) continue;
    if (lo_out[q] == 0 && hi_in[q] >= 1.0 - kFeasTol) continue;
    avoid[q] = 0;
    for (const auto& [pred, lo, hi] : ctx.preds[q]) {
      if (!avoid[pred]) continue;
      hi_in[pred] -= hi;
      if (lo > 0.0) ++lo_out[pred];
      if ((lo_out[pred] > 0 || hi_in[pred] < 1.0 - kFeasTol) && !queued[pred]) {
        queue.push_back(pred);
        queued[pred] = 1;
      }
    }
  }

  std::vector<char> result(n, 0);
  for (std::size_t q = 0; q < n; ++q) result[q] = universe_mask[q] && !avoid[q];
  return result;
}

/// Backward reachability to `bad` over usable edges with intermediates in
/// `within`; returns mask over states of `within` that can reach `bad`.
std::vector<char> can_reach_mask(const Ctx& ctx, const std::vector<char>& bad_mask,
                                 const std::vector<char>& within_mask) {
  const std::size_t n = ctx.p.n_states();
  std::vector<char> hit(n, 0);
  std::deque<std::uint32_t> queue;
  for (std::size_t q = 0; q < n; ++q)
    if (bad_mask[q]) {
      hit[q] = 1;
      queue.push_back(static_cast<std::uint32_t>(q));
    }
  while (!queue.empty()) {
    std::uint32_t q = queue.front();
    queue.pop_front();
    for (const auto& [pred, lo, hi] : ctx.preds[q]) {
      if (hit[pred] || !within_mask[pred]) continue;
      if (ctx.usable(pred, lo, hi)) {
        hit[pred] = 1;
        queue.push_back(pred);
      }
    }
  }
  return hit;
}

std::vector<StateSet> tarjan_masked(const std::vector<std::vector<std::uint32_t>>& adj,
                                    const std::vector<char>& allowed) {
  const std::size_t n = adj.size();
  std::vector<std::uint32_t> index(n, UINT32_MAX), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<StateSet> sccs;
  std::uint32_t counter = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t next_edge;
  };
  std::vector<Frame> call;

  for (std::size_t root = 0; root < n; ++root) {
    if (!allowed[root] || index[root] != UINT32_MAX) continue;
    call.push_back({static_cast<std::uint32_t>(root), 0});
    while (!call.empty()) {
      Frame& f = call.back();
      std::uint32_t v = f.v;
      if (f.next_edge == 0) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (f.next_edge < adj[v].size()) {
        std::uint32_t w = adj[v][f.next_edge++];
        if (!allowed[w]) continue;
        if (index[w] == UINT32_MAX) {
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        StateSet scc;
        while (true) {
          std::uint32_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          scc.push_back(w);
          if (w == v) break;
        }
        std::sort(scc.begin(), scc.end());
        sccs.push_back(std::move(scc));
      }
      call.pop_back();
      if (!call.empty()) {
        Frame& parent = call.back();
        low[parent.v] = std::min(low[parent.v], low[v]);
      }
    }
  }
  return sccs;
}

}  // namespace

StateSet set_union(const StateSet& a, const StateSet& b) {
  StateSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

StateSet set_difference(const StateSet& a, const StateSet& b) {
  StateSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool set_contains(const StateSet& s, std::uint32_t q) {
  return std::binary_search(s.begin(), s.end(), q);
}

Digraph optimistic_graph(const ProductImc& product) {
  Ctx ctx(product);
  Digraph g;
  g.adj = std::move(ctx.usable_adj);
  return g;
}

std::vector<StateSet> tarjan_scc(const Digraph& g) {
  std::vector<char> allowed(g.n(), 1);
  return tarjan_masked(g.adj, allowed);
}

bool can_confine(const ProductImc& product, std::uint32_t q,
                 const std::vector<char>& inside) {
  double hi_in = 0.0;
  for (const auto& e : product.trans.row(q)) {
    if (inside[e.col])
      hi_in += e.hi;
    else if (e.lo > 0.0)
      return false;
  }
  return hi_in >= 1.0 - kFeasTol;
}

StateSet at_question(const ProductImc& product, const StateSet& targets,
                     const StateSet& universe) {
  Ctx ctx(product);
  auto mask =
      at_question_mask(ctx, mask_of(targets, product.n_states()),
                       mask_of(universe, product.n_states()));
  return set_of(mask);
}

StateSet at_permanent(const ProductImc& product, const StateSet& targets,
                      const StateSet& universe) {
  Ctx ctx(product);
  auto target_mask = mask_of(targets, product.n_states());
  auto within = mask_of(universe, product.n_states());
  auto hit = can_reach_mask(ctx, target_mask, within);
  std::vector<char> result(product.n_states(), 0);
  for (std::size_t q = 0; q < product.n_states(); ++q)
    result[q] = within[q] && hit[q];
  return set_of(result);
}

namespace {

/// Confinement fixpoint within S: the largest subset where every state can
/// keep its mass inside. Equivalent to iterated leaky-state removal.
StateSet confinement_core(const Ctx& ctx, const StateSet& s) {
  const std::size_t n = ctx.p.n_states();
  std::vector<char> target(n, 0);  // empty targets: fixpoint of confinement
  std::vector<char> universe = mask_of(s, n);
  auto always_leaves = at_question_mask(ctx, target, universe);
  std::vector<char> core(n, 0);
  for (auto q : s) core[q] = universe[q] && !always_leaves[q];
  return set_of(core);
}

bool set_can_escape(const Ctx& ctx, const StateSet& s) {
  auto inside = mask_of(s, ctx.p.n_states());
  for (auto q : s)
    for (const auto& e : ctx.p.trans.row(q))
      if (!inside[e.col] && ctx.usable(q, e.lo, e.hi)) return true;
  return false;
}

struct StatusMasks {
  std::uint32_t or_e = 0;
  std::uint32_t or_f = 0;
};

StatusMasks status_masks(const ProductImc& p, const StateSet& s) {
  StatusMasks m;
  for (auto q : s) {
    m.or_e |= p.e_mask[q];
    m.or_f |= p.f_mask[q];
  }
  return m;
}

}  // namespace

std::vector<Bscc> find_bsccs(const ProductImc& product) {
  Ctx ctx(product);
  const std::size_t n = product.n_states();

  std::deque<StateSet> worklist;
  for (auto& scc : tarjan_masked(ctx.usable_adj, std::vector<char>(n, 1)))
    worklist.push_back(std::move(scc));
  std::set<StateSet> seen;

  struct Candidate {
    StateSet states;
    bool accepting;
    bool can_escape;
  };
  std::vector<Candidate> candidates;

  auto push_sccs_of = [&](const StateSet& universe) {
    if (universe.empty()) return;
    auto allowed = mask_of(universe, n);
    for (auto& scc : tarjan_masked(ctx.usable_adj, allowed)) worklist.push_back(std::move(scc));
  };

  while (!worklist.empty()) {
    StateSet s = std::move(worklist.front());
    worklist.pop_front();
    if (s.empty() || !seen.insert(s).second) continue;

    StateSet core = confinement_core(ctx, s);
    if (core.size() != s.size()) {
      // Leaky states removed; re-SCC the residue and retry.
      push_sccs_of(core);
      continue;
    }

    auto masks = status_masks(product, s);
    std::uint32_t active = masks.or_f & ~masks.or_e;
    bool accepting = active != 0;
    candidates.push_back({s, accepting, set_can_escape(ctx, s)});

    auto universe_mask = mask_of(s, n);
    if (accepting) {
      // States that make S accepting; removing what must reach them can
      // expose non-accepting sub-BSCCs.
      StateSet cause;
      for (auto q : s)
        if (product.f_mask[q] & active) cause.push_back(q);
      auto always = at_question_mask(ctx, mask_of(cause, n), universe_mask);
      StateSet sub;
      for (auto q : s)
        if (!always[q]) sub.push_back(q);
      push_sccs_of(sub);
    } else {
      for (std::size_t i = 0; i < product.n_pairs; ++i) {
        if (!(masks.or_f >> i & 1u)) continue;
        // Accepting sub-BSCCs for pair i hide behind its E-states.
        StateSet cause_e, cause_f;
        for (auto q : s) {
          if (product.e_mask[q] >> i & 1u) cause_e.push_back(q);
          if (product.f_mask[q] >> i & 1u) cause_f.push_back(q);
        }
        auto always_e = at_question_mask(ctx, mask_of(cause_e, n), universe_mask);
        StateSet sub_e;
        for (auto q : s)
          if (!always_e[q]) sub_e.push_back(q);
        push_sccs_of(sub_e);
        // Non-accepting sub-BSCCs that avoid pair i altogether sit behind
        // its F-states.
        auto always_f = at_question_mask(ctx, mask_of(cause_f, n), universe_mask);
        StateSet sub_f;
        for (auto q : s)
          if (!always_f[q]) sub_f.push_back(q);
        push_sccs_of(sub_f);
      }
    }
  }

  // Permanence: no escape in any induced MC and no overlapping candidate of
  // the opposite acceptance status. Non-escaping candidates are pairwise
  // disjoint from all others, so the overlap test only sees potential ones.
  std::vector<Bscc> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    bool permanent = !c.can_escape;
    if (permanent) {
      for (std::size_t j = 0; j < candidates.size() && permanent; ++j) {
        if (j == i || candidates[j].accepting == c.accepting) continue;
        StateSet inter;
        std::set_intersection(c.states.begin(), c.states.end(),
                              candidates[j].states.begin(), candidates[j].states.end(),
                              std::back_inserter(inter));
        if (!inter.empty()) permanent = false;
      }
    }
    out.push_back({c.states, c.accepting, permanent});
  }
  return out;
}

StateSet ComponentSets::wc_largest() const { return set_union(wc_potential, wc_permanent); }
StateSet ComponentSets::lc_largest() const { return set_union(lc_potential, lc_permanent); }

namespace {

/// Largest-component peeling against a target set: iteratively drop states
/// that unavoidably reach the region with no usable path to the target.
std::vector<char> largest_peel(const Ctx& ctx, const std::vector<char>& target,
                               std::vector<char> v_cur) {
  const std::size_t n = ctx.p.n_states();
  while (true) {
    std::vector<char> t_in_v(n, 0);
    for (std::size_t q = 0; q < n; ++q) t_in_v[q] = target[q] && v_cur[q];
    auto reach = can_reach_mask(ctx, t_in_v, v_cur);
    std::vector<char> tr(n, 0);
    bool any_tr = false;
    for (std::size_t q = 0; q < n; ++q) {
      tr[q] = v_cur[q] && !reach[q];
      any_tr = any_tr || tr[q];
    }
    if (!any_tr) break;
    auto c = at_question_mask(ctx, tr, v_cur);  // states that must reach tr
    std::size_t removed = 0;
    for (std::size_t q = 0; q < n; ++q)
      if (c[q]) {
        v_cur[q] = 0;
        ++removed;
      }
    if (removed == 0) break;
  }
  return v_cur;
}

/// Permanent peeling: additionally drop states that can reach the removed
/// region or the no-path region in at least one induced MC.
std::vector<char> permanent_peel(const Ctx& ctx, const std::vector<char>& target,
                                 std::vector<char> v2) {
  const std::size_t n = ctx.p.n_states();
  while (true) {
    std::vector<char> t_in_v(n, 0);
    for (std::size_t q = 0; q < n; ++q) t_in_v[q] = target[q] && v2[q];
    auto reach = can_reach_mask(ctx, t_in_v, v2);
    std::vector<char> bad(n, 0);
    for (std::size_t q = 0; q < n; ++q) bad[q] = !v2[q] || !reach[q];
    auto hit = can_reach_mask(ctx, bad, v2);
    std::size_t removed = 0;
    for (std::size_t q = 0; q < n; ++q)
      if (v2[q] && hit[q]) {
        v2[q] = 0;
        ++removed;
      }
    if (removed == 0) break;
  }
  return v2;
}

}  // namespace

ComponentSets find_components(const ProductImc& product, std::vector<Bscc> bsccs) {
  Ctx ctx(product);
  const std::size_t n = product.n_states();

  ComponentSets cs;
  cs.bsccs = std::move(bsccs);
  cs.owners.resize(n);

  // Per-BSCC components: ownership for the refinement scoring and the
  // component-internal witness rows.
  for (std::size_t b = 0; b < cs.bsccs.size(); ++b) {
    std::vector<char> target(n, 0);
    for (auto q : cs.bsccs[b].states) target[q] = 1;
    StateSet w = set_of(largest_peel(ctx, target, std::vector<char>(n, 1)));
    if (!cs.bsccs[b].permanent)
      for (auto q : w) cs.owners[q].push_back(static_cast<std::uint32_t>(b));
    cs.per_bscc_component.push_back(std::move(w));
  }

  // Largest components per status, peeled against the union of same-status
  // BSCCs. A state forced to split its mass across several same-status BSCCs
  // is winning (losing) even though it reaches no single BSCC with
  // probability 1, so per-BSCC peeling alone under-approximates.
  for (bool accepting : {true, false}) {
    std::vector<char> all_target(n, 0), perm_target(n, 0);
    std::vector<char> v0(n, 1);
    bool any = false, any_perm = false;
    for (const auto& b : cs.bsccs) {
      if (b.accepting != accepting) continue;
      any = true;
      for (auto q : b.states) all_target[q] = 1;
      if (b.permanent) {
        any_perm = true;
        for (auto q : b.states) perm_target[q] = 1;
      }
    }
    StateSet largest, permanent;
    if (any) largest = set_of(largest_peel(ctx, all_target, v0));
    if (any_perm) {
      // Potential BSCCs of the opposite status are traps for the permanent
      // part: remove their states up front; the peel treats them as bad.
      std::vector<char> v2(n, 0);
      for (auto q : largest) v2[q] = 1;
      for (const auto& other : cs.bsccs) {
        if (other.permanent || other.accepting == accepting) continue;
        for (auto q : other.states) v2[q] = 0;
      }
      permanent = set_of(permanent_peel(ctx, perm_target, v2));
    }
    if (accepting) {
      cs.wc_permanent = permanent;
      cs.wc_potential = set_difference(largest, permanent);
    } else {
      cs.lc_permanent = permanent;
      cs.lc_potential = set_difference(largest, permanent);
    }
  }

  StateSet perm_overlap;
  std::set_intersection(cs.wc_permanent.begin(), cs.wc_permanent.end(),
                        cs.lc_permanent.begin(), cs.lc_permanent.end(),
                        std::back_inserter(perm_overlap));
  if (!perm_overlap.empty())
    throw NumericalError("component analysis: permanent winning and losing sets overlap");
  return cs;
}

}  // namespace imcv
