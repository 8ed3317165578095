#include "imcv/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "imcv/errors.hpp"

namespace imcv {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Run fn(j) for j in [0, n) on `threads` threads in deterministic chunks.
void parallel_rows(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = std::min<std::size_t>(threads, n);
  if (threads <= 1) {
    for (std::size_t j = 0; j < n; ++j) fn(j);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] {
      for (std::size_t j = lo; j < hi; ++j) fn(j);
    });
  }
  for (auto& th : pool) th.join();
}
}  // namespace

Rect reach_overapprox(const SystemModel& model, const Rect& rect) {
  Vec lo = model.decomposition(rect.lower, rect.upper);
  Vec hi = model.decomposition(rect.upper, rect.lower);
  for (std::size_t i = 0; i < model.dim; ++i)
    if (lo[i] > hi[i])
      throw ModelError("reach_overapprox: decomposition inconsistent, g(a,b) > g(b,a)");
  return Rect{std::move(lo), std::move(hi)};
}

std::pair<double, double> optimal_shifts(double s_center, double r_lo, double r_hi) {
  double s_max = std::clamp(s_center, r_lo, r_hi);
  // Farthest endpoint; ties resolve to r_lo.
  double s_min = (s_center < (r_lo + r_hi) / 2.0) ? r_hi : r_lo;
  return {s_max, s_min};
}

double shifted_mass(const DisturbanceSpec& dist, std::size_t dim, double a,
                    double b, double s, bool clip_lo, bool clip_hi) {
  const Disturbance1D& w = dist[dim];
  double upper = clip_hi ? 1.0 : w.cdf(b - s);
  double lower = clip_lo ? 0.0 : w.cdf(a - s);
  return std::max(0.0, upper - lower);
}

std::vector<ShiftBounds> shift_bounds(const SystemModel& model, const Rect& reach,
                                      const Rect& rect_l) {
  std::vector<ShiftBounds> out(model.dim);
  for (std::size_t i = 0; i < model.dim; ++i) {
    ShiftBounds sb;
    sb.r_lo = reach.lower[i];
    sb.r_hi = reach.upper[i];
    bool clip_lo = model.boundary_clipping && rect_l.lower[i] == model.domain.lower[i];
    bool clip_hi = model.boundary_clipping && rect_l.upper[i] == model.domain.upper[i];
    // A cell face on the domain boundary absorbs all mass beyond it, so the
    // integration interval extends to +-inf on that side and the optimal
    // shift follows the infinite midpoint.
    if (clip_lo && clip_hi)
      sb.s_center = (rect_l.lower[i] + rect_l.upper[i]) / 2.0 - model.disturbance[i].mode();
    else if (clip_lo)
      sb.s_center = -kInf;
    else if (clip_hi)
      sb.s_center = kInf;
    else
      sb.s_center = (rect_l.lower[i] + rect_l.upper[i]) / 2.0 - model.disturbance[i].mode();
    auto [s_max, s_min] = optimal_shifts(sb.s_center, sb.r_lo, sb.r_hi);
    sb.s_max_shift = s_max;
    sb.s_min_shift = s_min;
    out[i] = sb;
  }
  return out;
}

std::pair<double, double> transition_bounds(const SystemModel& model,
                                            const Rect& rect_j, const Rect& rect_l) {
  Rect reach = reach_overapprox(model, rect_j);
  auto shifts = shift_bounds(model, reach, rect_l);
  double lo = 1.0, hi = 1.0;
  for (std::size_t i = 0; i < model.dim; ++i) {
    bool clip_lo = model.boundary_clipping && rect_l.lower[i] == model.domain.lower[i];
    bool clip_hi = model.boundary_clipping && rect_l.upper[i] == model.domain.upper[i];
    hi *= shifted_mass(model.disturbance, i, rect_l.lower[i], rect_l.upper[i],
                       shifts[i].s_max_shift, clip_lo, clip_hi);
    lo *= shifted_mass(model.disturbance, i, rect_l.lower[i], rect_l.upper[i],
                       shifts[i].s_min_shift, clip_lo, clip_hi);
    if (hi == 0.0) return {0.0, 0.0};
  }
  return {std::min(lo, hi), hi};
}

namespace {

void fill_row(const SystemModel& model, const Partition& partition, std::size_t j,
              IntervalMatrix& m) {
  Rect reach = reach_overapprox(model, partition.cells[j]);
  for (std::size_t l = 0; l < partition.size(); ++l) {
    const Rect& target = partition.cells[l];
    auto shifts = shift_bounds(model, reach, target);
    double lo = 1.0, hi = 1.0;
    for (std::size_t i = 0; i < model.dim && hi > 0.0; ++i) {
      bool clip_lo = model.boundary_clipping && target.lower[i] == model.domain.lower[i];
      bool clip_hi = model.boundary_clipping && target.upper[i] == model.domain.upper[i];
      hi *= shifted_mass(model.disturbance, i, target.lower[i], target.upper[i],
                         shifts[i].s_max_shift, clip_lo, clip_hi);
      lo *= shifted_mass(model.disturbance, i, target.lower[i], target.upper[i],
                         shifts[i].s_min_shift, clip_lo, clip_hi);
    }
    if (hi > 0.0) m.set(j, l, std::min(lo, hi), hi);
  }
}

}  // namespace

Imc build_imc(const SystemModel& model, const Partition& partition, unsigned threads) {
  if (!(partition.domain == model.domain))
    throw ModelError("build_imc: partition domain differs from model domain");
  Imc imc;
  imc.trans = IntervalMatrix(partition.size());
  imc.props = partition.cell_props;
  parallel_rows(partition.size(), resolve_threads(threads),
                [&](std::size_t j) { fill_row(model, partition, j, imc.trans); });
  imc.trans.validate_feasibility();
  return imc;
}

Imc update_imc(const Imc& imc, const SystemModel& model, const Partition& partition,
               const std::vector<std::uint32_t>& changed_cells, unsigned threads) {
  if (!(partition.domain == model.domain))
    throw ModelError("update_imc: partition domain differs from model domain");
  const std::size_t n = partition.size();
  std::vector<char> changed(n, 0);
  for (auto c : changed_cells) {
    if (c >= n) throw ModelError("update_imc: changed cell index out of range");
    changed[c] = 1;
  }

  Imc out;
  out.trans = IntervalMatrix(n);
  out.props = partition.cell_props;
  for (std::size_t j = 0; j < n; ++j)
    if (!changed[j] && j >= imc.n_states())
      throw ModelError("update_imc: unchanged cell has no row in the input IMC");
  parallel_rows(n, resolve_threads(threads), [&](std::size_t j) {
    if (changed[j]) {
      fill_row(model, partition, j, out.trans);
      return;
    }
    // Unchanged source cell: keep entries into unchanged targets bit-for-bit,
    // recompute only the columns into changed cells.
    Rect reach = reach_overapprox(model, partition.cells[j]);
    for (const auto& e : imc.trans.row(j))
      if (e.col < n && !changed[e.col]) out.trans.set(j, e.col, e.lo, e.hi);
    for (std::size_t l = 0; l < n; ++l) {
      if (!changed[l]) continue;
      const Rect& target = partition.cells[l];
      auto shifts = shift_bounds(model, reach, target);
      double lo = 1.0, hi = 1.0;
      for (std::size_t i = 0; i < model.dim && hi > 0.0; ++i) {
        bool clip_lo = model.boundary_clipping && target.lower[i] == model.domain.lower[i];
        bool clip_hi = model.boundary_clipping && target.upper[i] == model.domain.upper[i];
        hi *= shifted_mass(model.disturbance, i, target.lower[i], target.upper[i],
                           shifts[i].s_max_shift, clip_lo, clip_hi);
        lo *= shifted_mass(model.disturbance, i, target.lower[i], target.upper[i],
                           shifts[i].s_min_shift, clip_lo, clip_hi);
      }
      if (hi > 0.0) out.trans.set(j, l, std::min(lo, hi), hi);
    }
  });
  out.trans.validate_feasibility();
  return out;
}

}  // namespace imcv
