#include "imcv/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "imcv/errors.hpp"
#include "imcv/hoa.hpp"
#include "imcv/oracles.hpp"

namespace imcv {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write file: " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

namespace {

std::string vec_json(const Vec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format17(v[i]);
  }
  return s + "]";
}

std::string props_json(const PropSet& props) {
  std::string s = "[";
  for (std::size_t i = 0; i < props.size(); ++i) {
    if (i) s += ", ";
    s += "\"" + props[i] + "\"";
  }
  return s + "]";
}

}  // namespace

std::string imc_to_json(const Imc& imc, const Partition& partition) {
  if (imc.n_states() != partition.size())
    throw ModelError("imc_to_json: state count differs from cell count");
  std::ostringstream out;
  out << "{\n";
  out << "  \"domain\": {\"lower\": " << vec_json(partition.domain.lower)
      << ", \"upper\": " << vec_json(partition.domain.upper) << "},\n";
  out << "  \"states\": [\n";
  for (std::size_t j = 0; j < partition.size(); ++j) {
    out << "    {\"lower\": " << vec_json(partition.cells[j].lower)
        << ", \"upper\": " << vec_json(partition.cells[j].upper)
        << ", \"props\": " << props_json(imc.props[j]) << "}"
        << (j + 1 < partition.size() ? "," : "") << "\n";
  }
  out << "  ],\n";
  out << "  \"entries\": [\n";
  bool first = true;
  for (std::size_t j = 0; j < imc.n_states(); ++j)
    for (const auto& e : imc.trans.row(j)) {
      if (!first) out << ",\n";
      first = false;
      out << "    [" << j << ", " << e.col << ", " << format17(e.lo) << ", "
          << format17(e.hi) << "]";
    }
  out << "\n  ]\n}\n";
  return out.str();
}

std::pair<Imc, Partition> imc_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("imc file parse error: ") + e.what());
  }
  try {
    Partition p;
    Vec dlo, dhi;
    for (const auto& x : j.at("domain").at("lower")) dlo.push_back(x.get<double>());
    for (const auto& x : j.at("domain").at("upper")) dhi.push_back(x.get<double>());
    p.domain = make_rect(dlo, dhi);
    Imc imc;
    for (const auto& st : j.at("states")) {
      Vec lo, hi;
      for (const auto& x : st.at("lower")) lo.push_back(x.get<double>());
      for (const auto& x : st.at("upper")) hi.push_back(x.get<double>());
      p.cells.push_back(make_rect(lo, hi));
      std::vector<std::string> props;
      for (const auto& q : st.at("props")) props.push_back(q.get<std::string>());
      p.cell_props.push_back(make_props(std::move(props)));
    }
    imc.props = p.cell_props;
    imc.trans = IntervalMatrix(p.cells.size());
    for (const auto& e : j.at("entries"))
      imc.trans.set(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(),
                    e.at(2).get<double>(), e.at(3).get<double>());
    imc.trans.validate_feasibility();
    return {std::move(imc), std::move(p)};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("imc file error: ") + e.what());
  }
}

void write_imc_file(const std::string& path, const Imc& imc, const Partition& partition) {
  atomic_write(path, imc_to_json(imc, partition));
}

std::pair<Imc, Partition> read_imc_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open imc file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return imc_from_json(buf.str());
}

std::string results_csv(const std::vector<Rect>& cells, const std::vector<double>& p_min,
                        const std::vector<double>& p_max,
                        const std::vector<StateClass>& classes) {
  std::ostringstream out;
  std::size_t dim = cells.empty() ? 0 : cells[0].dim();
  out << "cell_id";
  for (std::size_t i = 0; i < dim; ++i) out << ",lo" << i << ",hi" << i;
  out << ",p_min,p_max,class\n";
  for (std::size_t j = 0; j < cells.size(); ++j) {
    out << j;
    for (std::size_t i = 0; i < dim; ++i)
      out << "," << format17(cells[j].lower[i]) << "," << format17(cells[j].upper[i]);
    out << "," << format17(p_min[j]) << "," << format17(p_max[j]) << ","
        << to_string(classes[j]) << "\n";
  }
  return out.str();
}

std::string partition_svg(const Rect& domain, const std::vector<Rect>& cells,
                          const std::vector<StateClass>& classes) {
  if (domain.dim() != 2)
    throw ModelError("partition_svg: plots require a 2-dimensional domain");
  const double w = 800.0;
  const double h = w * domain.width(1) / domain.width(0);
  auto sx = [&](double x) { return (x - domain.lower[0]) / domain.width(0) * w; };
  auto sy = [&](double y) { return (domain.upper[1] - y) / domain.width(1) * h; };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
      << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const char* fill = classes[j] == StateClass::yes   ? "#4caf50"
                       : classes[j] == StateClass::no  ? "#ef5350"
                                                       : "#ffeb3b";
    out << "<rect x=\"" << sx(cells[j].lower[0]) << "\" y=\"" << sy(cells[j].upper[1])
        << "\" width=\"" << sx(cells[j].upper[0]) - sx(cells[j].lower[0])
        << "\" height=\"" << sy(cells[j].lower[1]) - sy(cells[j].upper[1])
        << "\" fill=\"" << fill << "\" stroke=\"#333\" stroke-width=\"0.4\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string trajectories_csv(const std::vector<std::vector<Vec>>& trajectories) {
  std::ostringstream out;
  std::size_t dim = trajectories.empty() || trajectories[0].empty()
                        ? 0
                        : trajectories[0][0].size();
  out << "traj_id,step";
  for (std::size_t i = 0; i < dim; ++i) out << ",x" << i;
  out << "\n";
  for (std::size_t t = 0; t < trajectories.size(); ++t)
    for (std::size_t k = 0; k < trajectories[t].size(); ++k) {
      out << t << "," << k;
      for (std::size_t i = 0; i < dim; ++i)
        out << "," << format17(trajectories[t][k][i]);
      out << "\n";
    }
  return out.str();
}

std::string refine_summary_csv(const RefineResult& result) {
  std::ostringstream out;
  out << "round,cells,v_uncertain,elapsed_s,status\n";
  for (const auto& r : result.rounds) {
    bool last = r.round + 1 == result.rounds.size();
    out << r.round << "," << r.cells.size() << "," << format17(r.v_uncertain) << ","
        << format17(r.elapsed_s) << "," << (last ? to_string(result.status) : "running")
        << "\n";
  }
  return out.str();
}

namespace {

/// Model-or-file front half shared by the commands.
struct Inputs {
  Imc imc;
  Partition partition;
};

Inputs assemble_imc(const RunConfig& cfg) {
  if (!cfg.imc_input.empty()) {
    auto [imc, partition] = read_imc_file(cfg.imc_input);
    return {std::move(imc), std::move(partition)};
  }
  if (!cfg.has_model) throw ConfigError("config has neither a model nor imc_input");
  Partition p = align_partition_to_labels(cfg.model.domain, cfg.labels, cfg.grid);
  Imc imc = build_imc(cfg.model, p, cfg.threads);
  return {std::move(imc), std::move(p)};
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

}  // namespace

int cmd_abstract(const RunConfig& cfg) {
  try {
    Inputs in = assemble_imc(cfg);
    write_imc_file(out_path(cfg, "imc.json"), in.imc, in.partition);
    std::cout << "wrote " << out_path(cfg, "imc.json") << " (" << in.imc.n_states()
              << " states)\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_verify(const RunConfig& cfg) {
  try {
    Inputs in = assemble_imc(cfg);
    Dra dra = load_dra(cfg.dra_path);
    VerificationResult r =
        verify(in.imc, dra, cfg.comparison, cfg.p_sat, cfg.tol, cfg.max_iters);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    atomic_write(out_path(cfg, "results.csv"),
                 results_csv(in.partition.cells, r.p_min, r.p_max, r.classes));
    if (cfg.plot && in.partition.domain.dim() == 2)
      atomic_write(out_path(cfg, "results.svg"),
                   partition_svg(in.partition.domain, in.partition.cells, r.classes));
    double v = uncertain_volume(in.partition, r.classes);
    std::cout << "cells=" << in.partition.size() << " v_uncertain=" << v << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << " (residual " << e.residual
              << ")\n";
    return 3;
  }
}

int cmd_refine(const RunConfig& cfg) {
  try {
    if (!cfg.has_model)
      throw ConfigError("refine needs a model block (abstractions are rebuilt per round)");
    Partition p = align_partition_to_labels(cfg.model.domain, cfg.labels, cfg.grid);
    Dra dra = load_dra(cfg.dra_path);
    RefineResult r =
        refine_loop(cfg.model, std::move(p), dra, cfg.comparison, cfg.p_sat,
                    cfg.refinement, cfg.tol, cfg.max_iters, cfg.threads, &std::cout);
    for (const auto& round : r.rounds) {
      std::string tag = "round_" + std::to_string(round.round);
      atomic_write(out_path(cfg, tag + ".csv"),
                   results_csv(round.cells, round.p_min, round.p_max, round.classes));
      if (cfg.plot && cfg.model.domain.dim() == 2)
        atomic_write(out_path(cfg, tag + ".svg"),
                     partition_svg(cfg.model.domain, round.cells, round.classes));
    }
    atomic_write(out_path(cfg, "summary.csv"), refine_summary_csv(r));
    std::cout << "status=" << to_string(r.status)
              << " rounds=" << r.rounds.size()
              << " cells=" << r.final_partition.size() << "\n";
    return r.status == RefineStatus::converged ? 0 : 4;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << " (residual " << e.residual
              << ")\n";
    return 3;
  }
}

int cmd_simulate(const RunConfig& cfg, const Vec& x0, std::size_t horizon,
                 std::size_t n_traj) {
  try {
    if (!cfg.has_model) throw ConfigError("simulate needs a model block");
    std::vector<std::vector<Vec>> trajs;
    for (std::size_t t = 0; t < n_traj; ++t)
      trajs.push_back(oracles::simulate(cfg.model, x0, horizon, cfg.seed + t));
    atomic_write(out_path(cfg, "trajectories.csv"), trajectories_csv(trajs));
    std::cout << "wrote " << out_path(cfg, "trajectories.csv") << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ModelError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace imcv
