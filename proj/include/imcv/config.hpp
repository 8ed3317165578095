#pragma once

#include <cstdint>
#include <string>

#include "imcv/refine.hpp"
#include "imcv/system_model.hpp"
#include "imcv/verify.hpp"

namespace imcv {

/// Run configuration (JSON). Either a model block (family, parameters,
/// domain, disturbance) with labels and an initial-partition grid, or a
/// prebuilt IMC interchange file via "imc_input".
struct RunConfig {
  bool has_model = false;
  SystemModel model;
  std::vector<LabeledRegion> labels;
  std::vector<int> grid;
  std::string imc_input;

  std::string dra_path;
  Cmp comparison = Cmp::ge;
  double p_sat = 0.0;

  RefinementConfig refinement;

  double tol = 1e-9;
  std::size_t max_iters = 100000;
  std::uint64_t seed = 0;

  std::string out_dir = "out";
  bool plot = true;
  unsigned threads = 0;
};

/// Parse and validate a config file; relative paths inside the file resolve
/// against its directory. Throws ConfigError.
RunConfig load_config(const std::string& path);

}  // namespace imcv
