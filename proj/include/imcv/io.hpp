#pragma once

#include <string>

#include "imcv/config.hpp"

namespace imcv {

/// Shortest decimal with 17 significant digits (lossless double round-trip).
std::string format17(double x);

/// Write-temp-then-rename; the target never holds partial content.
void atomic_write(const std::string& path, const std::string& content);

/// IMC interchange file: domain, per-state cell geometry + propositions,
/// sparse (row, col, lo, hi) entry list, 17-significant-digit decimals.
std::string imc_to_json(const Imc& imc, const Partition& partition);
std::pair<Imc, Partition> imc_from_json(const std::string& text);
void write_imc_file(const std::string& path, const Imc& imc, const Partition& partition);
std::pair<Imc, Partition> read_imc_file(const std::string& path);

/// Results table: cell_id, per-dimension lo/hi, p_min, p_max, class.
std::string results_csv(const std::vector<Rect>& cells, const std::vector<double>& p_min,
                        const std::vector<double>& p_max,
                        const std::vector<StateClass>& classes);

/// Classified-partition plot: yes green, no red, undecided yellow.
std::string partition_svg(const Rect& domain, const std::vector<Rect>& cells,
                          const std::vector<StateClass>& classes);

std::string trajectories_csv(const std::vector<std::vector<Vec>>& trajectories);

std::string refine_summary_csv(const RefineResult& result);

// CLI entry points. Return process exit codes: 0 success, 2 config error,
// 3 convergence error, 4 budget exhausted.
int cmd_abstract(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_refine(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg, const Vec& x0, std::size_t horizon,
                 std::size_t n_traj);

}  // namespace imcv
