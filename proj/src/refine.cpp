#include "imcv/refine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "imcv/errors.hpp"

namespace imcv {

namespace {

bool has_ambiguous_exit(const ProductImc& product, std::uint32_t q) {
  for (const auto& e : product.trans.row(q))
    if (e.lo == 0.0 && e.hi > 0.0) return true;
  return false;
}

}  // namespace

ScoreVector score_states(const ProductImc& product, const InducedMc& m_u,
                         const std::vector<double>& values_u,
                         const std::vector<double>& values_l,
                         const ComponentSets& components,
                         const std::vector<std::uint32_t>& undecided_cells,
                         double p_stop) {
  const std::size_t n = product.n_states();
  ScoreVector scores(product.n_imc_states, 0.0);

  std::vector<char> in_potential(n, 0), in_permanent(n, 0);
  for (auto q : components.wc_potential) in_potential[q] = 1;
  for (auto q : components.lc_potential) in_potential[q] = 1;
  for (auto q : components.wc_permanent) in_permanent[q] = 1;
  for (auto q : components.lc_permanent) in_permanent[q] = 1;

  auto gap = [&](std::uint32_t q) {
    // p_max - p_min at q: reach-accepting probabilities in the best and
    // worst case product MCs.
    return std::max(0.0, values_u[q] - (1.0 - values_l[q]));
  };

  struct Frame {
    std::uint32_t state;
    double prob;
    std::size_t next_edge;
  };

  std::vector<char> on_path(n, 0);
  for (auto cell : undecided_cells) {
    std::vector<Frame> stack;
    std::uint32_t q0 = product.initial[cell];

    // Arrival handling decides scoring and whether the path continues.
    auto arrive = [&](std::uint32_t q, double prob) -> bool {
      if (in_potential[q] && !components.owners[q].empty()) {
        double g = gap(q);
        for (auto b : components.owners[q])
          for (auto x : components.bsccs[b].states)
            if (has_ambiguous_exit(product, x))
              scores[product.imc_state[x]] += prob * g;
        return false;  // backtrack
      }
      if (in_permanent[q]) return false;
      // Ordinary states, including potential-component members that reach no
      // single potential BSCC with probability 1 (mass forced to split):
      // score the state itself and keep exploring.
      scores[product.imc_state[q]] += prob * gap(q);
      return true;  // explore successors
    };

    if (arrive(q0, 1.0)) {
      stack.push_back({q0, 1.0, 0});
      on_path[q0] = 1;
    }
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& row = m_u.rows[f.state];
      bool pushed = false;
      while (f.next_edge < row.size()) {
        auto [succ, t] = row[f.next_edge++];
        if (t <= 0.0 || on_path[succ]) continue;
        double prob = f.prob * t;
        if (prob < p_stop) continue;
        if (arrive(succ, prob)) {
          stack.push_back({succ, prob, 0});
          on_path[succ] = 1;
          pushed = true;
          break;
        }
      }
      if (pushed) continue;
      on_path[f.state] = 0;
      stack.pop_back();
    }
  }
  return scores;
}

SplitResult select_and_split(const Partition& partition, const ScoreVector& scores,
                             double theta) {
  if (scores.size() != partition.size())
    throw ModelError("select_and_split: one score per cell required");
  SplitResult out;
  out.partition.domain = partition.domain;

  double max_score = 0.0;
  for (double s : scores) max_score = std::max(max_score, s);

  const std::size_t m = partition.size();
  out.partition.cells = partition.cells;
  out.partition.cell_props = partition.cell_props;
  out.parent_of.resize(m);
  for (std::size_t j = 0; j < m; ++j) out.parent_of[j] = static_cast<std::uint32_t>(j);
  if (max_score <= 0.0) return out;

  for (std::size_t j = 0; j < m; ++j) {
    if (scores[j] < theta * max_score) continue;
    const Rect& cell = partition.cells[j];
    auto [a, b] = split_rect(cell);
    if (a.volume() <= 0.0 || b.volume() <= 0.0) {
      out.warnings.push_back("cell " + std::to_string(j) +
                             " too small to split at machine precision; skipped");
      continue;
    }
    out.partition.cells[j] = a;
    out.partition.cells.push_back(b);
    out.partition.cell_props.push_back(partition.cell_props[j]);
    out.parent_of.push_back(static_cast<std::uint32_t>(j));
    out.changed.push_back(static_cast<std::uint32_t>(j));
    out.changed.push_back(static_cast<std::uint32_t>(out.partition.cells.size() - 1));
  }
  return out;
}

const char* to_string(RefineStatus s) {
  switch (s) {
    case RefineStatus::converged: return "converged";
    case RefineStatus::max_rounds: return "max_rounds";
    case RefineStatus::max_cells: return "max_cells";
    default: return "stalled";
  }
}

RefineResult refine_loop(const SystemModel& model, Partition partition, const Dra& dra,
                         Cmp cmp, double p_sat, const RefinementConfig& cfg,
                         double tol, std::size_t max_iters, unsigned threads,
                         std::ostream* progress) {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();

  RefineResult out;
  Imc imc = build_imc(model, partition, threads);
  // Sticky decided-history per cell lineage: once any ancestor was decided,
  // no descendant may be decided the other way (point sets in D never flip).
  enum class Hist : std::uint8_t { none, yes, no };
  std::vector<Hist> history(partition.size(), Hist::none);

  for (std::size_t round = 0;; ++round) {
    VerificationResult vr = verify(imc, dra, cmp, p_sat, tol, max_iters);

    for (std::size_t j = 0; j < partition.size(); ++j) {
      StateClass now = vr.classes[j];
      if ((history[j] == Hist::yes && now == StateClass::no) ||
          (history[j] == Hist::no && now == StateClass::yes))
        throw NumericalError(
            "refinement soundness violation: a decided region flipped between "
            "yes and no");
      if (now == StateClass::yes) history[j] = Hist::yes;
      if (now == StateClass::no) history[j] = Hist::no;
    }

    RefineRound rec;
    rec.round = round;
    rec.cells = partition.cells;
    rec.cell_props = partition.cell_props;
    rec.p_min = vr.p_min;
    rec.p_max = vr.p_max;
    rec.classes = vr.classes;
    rec.v_uncertain = uncertain_volume(partition, vr.classes);
    rec.elapsed_s = std::chrono::duration<double>(clock::now() - t0).count();
    if (progress)
      (*progress) << "round=" << round << " cells=" << partition.size()
                  << " v_uncertain=" << rec.v_uncertain
                  << " elapsed_s=" << rec.elapsed_s << "\n";
    out.rounds.push_back(rec);

    if (rec.v_uncertain <= cfg.v_stop) {
      out.status = RefineStatus::converged;
      break;
    }
    if (round >= cfg.max_rounds) {
      out.status = RefineStatus::max_rounds;
      break;
    }
    if (partition.size() >= cfg.max_cells) {
      out.status = RefineStatus::max_cells;
      break;
    }

    std::vector<std::uint32_t> undecided;
    for (std::size_t j = 0; j < partition.size(); ++j)
      if (vr.classes[j] == StateClass::undecided)
        undecided.push_back(static_cast<std::uint32_t>(j));

    ScoreVector scores = score_states(vr.product, vr.extremal.upper.mc,
                                      vr.extremal.upper.values.v,
                                      vr.extremal.lower.values.v, vr.components,
                                      undecided, cfg.p_stop);
    SplitResult split = select_and_split(partition, scores, cfg.theta);
    if (split.changed.empty()) {
      out.status = RefineStatus::stalled;
      break;
    }
    imc = update_imc(imc, model, split.partition, split.changed, threads);
    std::vector<Hist> next_history(split.partition.size());
    for (std::size_t j = 0; j < split.partition.size(); ++j)
      next_history[j] = history[split.parent_of[j]];
    history = std::move(next_history);
    partition = std::move(split.partition);
  }
  out.final_partition = std::move(partition);
  return out;
}

}  // namespace imcv
