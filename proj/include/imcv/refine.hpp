#pragma once

#include <iosfwd>

#include "imcv/abstraction.hpp"
#include "imcv/verify.hpp"

namespace imcv {

struct RefinementConfig {
  double v_stop = 0.0;       // target fractional volume of undecided cells
  double p_stop = 1e-4;      // path-probability exploration cutoff
  double theta = 0.1;        // split cells scoring at least theta * max score
  std::size_t max_rounds = 50;
  std::size_t max_cells = 100000;
};

/// Per-IMC-state refinement score.
using ScoreVector = std::vector<double>;

/// Path-exploration scoring over the best-case product MC: for every
/// undecided cell, depth-first exploration from <Q_l, s0> in m_u, pruned at
/// p_stop and on path loops; potential-component hits score the ambiguous
/// states of the owning potential BSCCs, permanent-component hits backtrack,
/// other states accumulate the path-weighted satisfaction gap and continue.
ScoreVector score_states(const ProductImc& product, const InducedMc& m_u,
                         const std::vector<double>& values_u,
                         const std::vector<double>& values_l,
                         const ComponentSets& components,
                         const std::vector<std::uint32_t>& undecided_cells,
                         double p_stop);

struct SplitResult {
  Partition partition;
  std::vector<std::uint32_t> changed;    // replaced and appended cell indices
  std::vector<std::uint32_t> parent_of;  // new cell index -> old cell index
  std::vector<std::string> warnings;
};

/// Split every cell scoring at least theta * max score along its largest
/// dimension; children inherit the parent's propositions. All-zero scores
/// split nothing; cells too small to split at machine precision are skipped
/// with a warning.
SplitResult select_and_split(const Partition& partition, const ScoreVector& scores,
                             double theta);

enum class RefineStatus { converged, max_rounds, max_cells, stalled };

const char* to_string(RefineStatus s);

struct RefineRound {
  std::size_t round = 0;
  std::vector<Rect> cells;
  std::vector<PropSet> cell_props;
  std::vector<double> p_min, p_max;
  std::vector<StateClass> classes;
  double v_uncertain = 0.0;
  double elapsed_s = 0.0;
};

struct RefineResult {
  std::vector<RefineRound> rounds;
  Partition final_partition;
  RefineStatus status = RefineStatus::converged;
};

/// Abstraction / verification / scoring / splitting loop. Terminates when the
/// uncertain volume drops to v_stop or a budget is exhausted (reported as a
/// status, not an error). Classifications are checked for yes/no consistency
/// against the previous round every round. Per-round machine-readable
/// progress lines go to `progress` when given.
RefineResult refine_loop(const SystemModel& model, Partition partition, const Dra& dra,
                         Cmp cmp, double p_sat, const RefinementConfig& cfg,
                         double tol = 1e-9, std::size_t max_iters = 100000,
                         unsigned threads = 0, std::ostream* progress = nullptr);

}  // namespace imcv
