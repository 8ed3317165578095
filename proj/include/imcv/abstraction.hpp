#pragma once

#include <cstdint>

#include "imcv/interval_matrix.hpp"
#include "imcv/system_model.hpp"

namespace imcv {

/// Per-dimension data for one source/target cell pair: the reach interval
/// [r_lo, r_hi] of the decomposition image, the unconstrained best shift
/// (target midpoint minus mode; +-inf for cells clipped at the domain
/// boundary), and the chosen extremal shifts.
struct ShiftBounds {
  double r_lo;
  double r_hi;
  double s_center;
  double s_max_shift;
  double s_min_shift;
};

/// One-step reach set over-approximation [g(a,b), g(b,a)] of F over `rect`.
/// Throws ModelError if the decomposition is inconsistent (g(a,b) > g(b,a)).
Rect reach_overapprox(const SystemModel& model, const Rect& rect);

/// Shifts in [r_lo, r_hi] maximizing / minimizing the mass of a symmetric
/// unimodal density over a fixed interval whose unconstrained optimum is
/// s_center: the maximizer clamps s_center into the range; the minimizer is
/// the endpoint farthest from s_center (r_lo on ties).
std::pair<double, double> optimal_shifts(double s_center, double r_lo, double r_hi);

/// F(b - s) - F(a - s) for disturbance component `dim`, with the lower term
/// replaced by 0 under clip_lo and the upper term by 1 under clip_hi
/// (absorbing out-of-domain mass at a clipped cell face).
double shifted_mass(const DisturbanceSpec& dist, std::size_t dim, double a,
                    double b, double s, bool clip_lo, bool clip_hi);

/// Guaranteed transition probability bounds from rect_j to rect_l under the
/// model, as a product of per-dimension extremal masses.
std::pair<double, double> transition_bounds(const SystemModel& model,
                                            const Rect& rect_j, const Rect& rect_l);

/// Per-dimension shift data used by transition_bounds (exposed for tests).
std::vector<ShiftBounds> shift_bounds(const SystemModel& model, const Rect& reach,
                                      const Rect& rect_l);

/// IMC abstraction over all cell pairs of the partition. Rows are validated
/// against interval feasibility; violations are hard errors.
Imc build_imc(const SystemModel& model, const Partition& partition,
              unsigned threads = 0);

/// Recompute exactly the rows of changed cells and the columns into them;
/// every other entry is copied bit-for-bit from `imc`. `changed_cells` lists
/// replaced and added cell indices of the new partition; `imc` rows must
/// correspond to the unchanged indices.
Imc update_imc(const Imc& imc, const SystemModel& model, const Partition& partition,
               const std::vector<std::uint32_t>& changed_cells, unsigned threads = 0);

}  // namespace imcv
