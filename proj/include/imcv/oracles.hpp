#pragma once

#include <cstdint>

#include "imcv/reach.hpp"
#include "imcv/system_model.hpp"

namespace imcv::oracles {

/// All vertices of one row's interval polytope (greedy allocations under all
/// successor orderings, deduplicated). Dense over the row's entries.
std::vector<std::vector<double>> row_vertices(std::span<const IntervalEntry> row);

/// One interior representative per achievable row support (supports that can
/// carry a feasible allocation); together with the vertices this makes the
/// enumerated family complete for BSCC and component questions.
std::vector<std::vector<double>> row_support_representatives(
    std::span<const IntervalEntry> row);

/// Induced MCs whose rows are polytope vertices (plus support representatives
/// when requested). Throws ModelError when the combination count would exceed
/// max_mcs.
std::vector<InducedMc> enumerate_vertex_mcs(const ProductImc& product,
                                            std::size_t max_mcs = std::size_t{1} << 20,
                                            bool include_representatives = false);

/// Exact probabilities of eventually reaching `target`: 1 on the target, 0
/// where no path exists, linear solve on the transient block. Throws
/// NumericalError if the system is singular.
std::vector<double> mc_exact_reach(const InducedMc& mc, const StateSet& target);

/// Trajectory of x' = clamp(F(x) + w, D) from x0 with per-dimension
/// inverse-CDF sampling; returns horizon+1 points including x0.
std::vector<Vec> simulate(const SystemModel& model, const Vec& x0,
                          std::size_t horizon, std::uint64_t seed);

/// Adaptive quadrature of f_dim(x - s) over [a, b], absolute tolerance 1e-10.
double quadrature_mass(const DisturbanceSpec& dist, std::size_t dim, double a,
                       double b, double s);

/// Deterministic uniform draw on [0,1) from a raw 64-bit generator output.
double to_unit_interval(std::uint64_t bits);

}  // namespace imcv::oracles
