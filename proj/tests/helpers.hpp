#pragma once

// Shared test utilities: fixture lookup, deterministic RNG, direct product
// construction, a random lattice-product generator, and an
// enumeration-based analysis of induced MCs that is independent of the
// component-analysis and reach-solver implementations.

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <random>
#include <string>

#include "imcv/components.hpp"
#include "imcv/oracles.hpp"
#include "imcv/verify.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
  const char* env = std::getenv("IMCV_FIXTURES");
  return std::string(env ? env : "tests/fixtures") + "/" + name;
}

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  double uniform() { return imcv::oracles::to_unit_interval(g()); }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int uniform_int(int a, int b) {  // inclusive
    int v = a + static_cast<int>(uniform() * (b - a + 1));
    return std::min(v, b);
  }
};

struct DirectEntry {
  std::uint32_t row, col;
  double lo, hi;
};

/// Product IMC built directly from entries and pair-membership masks
/// (n_dra_states = 1; every state is initial for its own index).
inline imcv::ProductImc make_direct_product(std::size_t n,
                                            const std::vector<DirectEntry>& entries,
                                            const std::vector<std::uint32_t>& e_mask,
                                            const std::vector<std::uint32_t>& f_mask,
                                            std::size_t n_pairs) {
  imcv::ProductImc p;
  p.n_imc_states = n;
  p.n_dra_states = 1;
  p.n_pairs = n_pairs;
  p.trans = imcv::IntervalMatrix(n);
  for (const auto& e : entries) p.trans.set(e.row, e.col, e.lo, e.hi);
  p.e_mask = e_mask;
  p.f_mask = f_mask;
  p.imc_state.resize(n);
  p.dra_state.assign(n, 0);
  p.initial.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    p.imc_state[q] = static_cast<std::uint32_t>(q);
    p.initial[q] = static_cast<std::uint32_t>(q);
  }
  p.trans.validate_feasibility();
  return p;
}

struct RandomInstance {
  imcv::Imc imc;
  imcv::Dra dra;
  imcv::ProductImc product;  // unpruned
};

/// Random IMC (lattice bounds in quarters) + random small DRA over AP {A}.
/// Interval rows are limited to two successors and a small count so the
/// induced-MC enumeration stays exact and bounded.
inline RandomInstance random_lattice_instance(std::uint64_t seed, int max_imc_states = 5,
                                              int max_dra_states = 3,
                                              int max_interval_rows = 3) {
  Rng rng(seed);
  const int m = rng.uniform_int(2, max_imc_states);
  const int k = rng.uniform_int(1, max_dra_states);

  imcv::Imc imc;
  imc.trans = imcv::IntervalMatrix(m);
  for (int j = 0; j < m; ++j)
    imc.props.push_back(rng.uniform() < 0.5 ? imcv::PropSet{}
                                            : imcv::PropSet{"A"});

  int interval_rows = 0;
  for (int j = 0; j < m; ++j) {
    bool interval_row = interval_rows < max_interval_rows && rng.uniform() < 0.7;
    if (interval_row) {
      ++interval_rows;
      // Two (sometimes three) successors with lattice interval bounds,
      // feasible by construction.
      int parts = m >= 3 && rng.uniform() < 0.3 ? 3 : 2;
      std::vector<int> cols;
      while (static_cast<int>(cols.size()) < parts) {
        int c = rng.uniform_int(0, m - 1);
        bool dup = false;
        for (int x : cols) dup = dup || x == c;
        if (!dup) cols.push_back(c);
      }
      while (true) {
        std::vector<int> lo(parts), hi(parts);
        int lo_sum = 0, hi_sum = 0;
        bool open = false;
        for (int i = 0; i < parts; ++i) {
          lo[i] = rng.uniform_int(0, 4);
          hi[i] = rng.uniform_int(lo[i], 4);
          lo_sum += lo[i];
          hi_sum += hi[i];
          open = open || lo[i] < hi[i];
        }
        if (hi_sum == 0 || lo_sum > 4 || hi_sum < 4 || !open) continue;
        for (int i = 0; i < parts; ++i)
          if (hi[i] > 0) imc.trans.set(j, cols[i], lo[i] / 4.0, hi[i] / 4.0);
        break;
      }
    } else {
      // Point row: a lattice distribution over up to three successors.
      int parts = rng.uniform_int(1, std::min(3, m));
      std::vector<int> mass(parts, 0);
      for (int q = 0; q < 4; ++q) ++mass[rng.uniform_int(0, parts - 1)];
      std::vector<int> cols;
      while (static_cast<int>(cols.size()) < parts) {
        int c = rng.uniform_int(0, m - 1);
        bool dup = false;
        for (int x : cols) dup = dup || x == c;
        if (!dup) cols.push_back(c);
      }
      for (int i = 0; i < parts; ++i)
        if (mass[i] > 0) imc.trans.set(j, cols[i], mass[i] / 4.0, mass[i] / 4.0);
    }
  }
  imc.trans.validate_feasibility();

  imcv::Dra dra;
  dra.ap_names = {"A"};
  dra.initial = 0;
  for (int s = 0; s < k; ++s) {
    std::vector<imcv::DraEdge> edges;
    edges.push_back({imcv::Guard::parse("!0"),
                     static_cast<std::uint32_t>(rng.uniform_int(0, k - 1))});
    edges.push_back({imcv::Guard::parse("0"),
                     static_cast<std::uint32_t>(rng.uniform_int(0, k - 1))});
    dra.edges.push_back(std::move(edges));
  }
  int n_pairs = rng.uniform_int(1, 2);
  for (int i = 0; i < n_pairs; ++i) {
    imcv::RabinPair pair;
    for (int s = 0; s < k; ++s) {
      double u = rng.uniform();
      if (u < 0.25) pair.e_states.push_back(s);
      else if (u < 0.6) pair.f_states.push_back(s);
    }
    dra.pairs.push_back(std::move(pair));
  }
  imcv::finalize_dra(dra);

  RandomInstance inst;
  inst.product = imcv::build_product(imc, dra);
  inst.imc = std::move(imc);
  inst.dra = std::move(dra);
  return inst;
}

/// SCCs by Kosaraju's two-pass DFS (independent of the library's Tarjan).
inline std::vector<std::vector<std::uint32_t>> kosaraju_sccs(
    const std::vector<std::vector<std::uint32_t>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::vector<std::uint32_t>> radj(n);
  for (std::size_t v = 0; v < n; ++v)
    for (auto w : adj[v]) radj[w].push_back(static_cast<std::uint32_t>(v));

  std::vector<char> seen(n, 0);
  std::vector<std::uint32_t> order;
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{static_cast<std::uint32_t>(root), 0}};
    seen[root] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < adj[v].size()) {
        std::uint32_t w = adj[v][i++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<std::vector<std::uint32_t>> sccs;
  std::vector<char> assigned(n, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (assigned[*it]) continue;
    std::vector<std::uint32_t> scc;
    std::deque<std::uint32_t> queue{*it};
    assigned[*it] = 1;
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      scc.push_back(v);
      for (auto w : radj[v])
        if (!assigned[w]) {
          assigned[w] = 1;
          queue.push_back(w);
        }
    }
    std::sort(scc.begin(), scc.end());
    sccs.push_back(std::move(scc));
  }
  return sccs;
}

struct McAnalysis {
  std::vector<char> in_ua, in_un;      // membership in accepting/non-acc BSCCs
  std::vector<char> winning, losing;   // prob-1 reach of U^A / U^N
};

inline McAnalysis analyze_mc(const imcv::ProductImc& p, const imcv::InducedMc& mc) {
  const std::size_t n = p.n_states();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::size_t q = 0; q < n; ++q)
    for (const auto& [c, t] : mc.rows[q])
      if (t > 0.0) adj[q].push_back(c);

  McAnalysis a;
  a.in_ua.assign(n, 0);
  a.in_un.assign(n, 0);
  for (const auto& scc : kosaraju_sccs(adj)) {
    std::vector<char> inside(n, 0);
    for (auto q : scc) inside[q] = 1;
    bool bottom = true;
    for (auto q : scc)
      for (auto w : adj[q]) bottom = bottom && inside[w];
    if (!bottom) continue;
    std::uint32_t or_e = 0, or_f = 0;
    for (auto q : scc) {
      or_e |= p.e_mask[q];
      or_f |= p.f_mask[q];
    }
    bool accepting = (or_f & ~or_e) != 0;
    for (auto q : scc) (accepting ? a.in_ua : a.in_un)[q] = 1;
  }

  imcv::StateSet ua, un;
  for (std::size_t q = 0; q < n; ++q) {
    if (a.in_ua[q]) ua.push_back(static_cast<std::uint32_t>(q));
    if (a.in_un[q]) un.push_back(static_cast<std::uint32_t>(q));
  }
  a.winning.assign(n, 0);
  a.losing.assign(n, 0);
  if (!ua.empty()) {
    auto r = imcv::oracles::mc_exact_reach(mc, ua);
    for (std::size_t q = 0; q < n; ++q) a.winning[q] = r[q] > 1.0 - 1e-9;
  }
  if (!un.empty()) {
    auto r = imcv::oracles::mc_exact_reach(mc, un);
    for (std::size_t q = 0; q < n; ++q) a.losing[q] = r[q] > 1.0 - 1e-9;
  }
  return a;
}

struct OracleSets {
  imcv::StateSet ua_largest, un_largest;   // in an acc/non-acc BSCC of some MC
  imcv::StateSet wc_largest, lc_largest;   // winning/losing in some MC
  imcv::StateSet wc_always, lc_always;     // winning/losing in every MC
  std::vector<double> sat_min, sat_max;    // per IMC state, from <Q_j, s0>
};

inline OracleSets oracle_sets(const imcv::ProductImc& p,
                              const std::vector<imcv::InducedMc>& mcs) {
  const std::size_t n = p.n_states();
  std::vector<char> ua(n, 0), un(n, 0), wsome(n, 0), lsome(n, 0), wall(n, 1), lall(n, 1);
  OracleSets out;
  out.sat_min.assign(p.n_imc_states, 1.0);
  out.sat_max.assign(p.n_imc_states, 0.0);
  for (const auto& mc : mcs) {
    McAnalysis a = analyze_mc(p, mc);
    imcv::StateSet ua_states;
    for (std::size_t q = 0; q < n; ++q) {
      ua[q] |= a.in_ua[q];
      un[q] |= a.in_un[q];
      wsome[q] |= a.winning[q];
      lsome[q] |= a.losing[q];
      wall[q] &= a.winning[q];
      lall[q] &= a.losing[q];
      if (a.in_ua[q]) ua_states.push_back(static_cast<std::uint32_t>(q));
    }
    std::vector<double> sat(n, 0.0);
    if (!ua_states.empty()) sat = imcv::oracles::mc_exact_reach(mc, ua_states);
    for (std::size_t j = 0; j < p.n_imc_states; ++j) {
      double v = sat[p.initial[j]];
      out.sat_min[j] = std::min(out.sat_min[j], v);
      out.sat_max[j] = std::max(out.sat_max[j], v);
    }
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (ua[q]) out.ua_largest.push_back(static_cast<std::uint32_t>(q));
    if (un[q]) out.un_largest.push_back(static_cast<std::uint32_t>(q));
    if (wsome[q]) out.wc_largest.push_back(static_cast<std::uint32_t>(q));
    if (lsome[q]) out.lc_largest.push_back(static_cast<std::uint32_t>(q));
    if (wall[q]) out.wc_always.push_back(static_cast<std::uint32_t>(q));
    if (lall[q]) out.lc_always.push_back(static_cast<std::uint32_t>(q));
  }
  return out;
}

/// Three-state fixture: {0,1} can be an accepting BSCC while
/// {2} is a separate non-accepting one, or everything collapses into a single
/// non-accepting BSCC.
inline imcv::ProductImc switchable_bscc_fixture() {
  return make_direct_product(
      3,
      {{0, 1, 1.0, 1.0},
       {1, 0, 0.5, 1.0},
       {1, 2, 0.0, 0.5},
       {2, 2, 0.5, 1.0},
       {2, 0, 0.0, 0.5}},
      {0, 0, 1}, {0, 1, 0}, 1);
}

}  // namespace testutil
