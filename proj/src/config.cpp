#include "imcv/config.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "imcv/errors.hpp"

namespace imcv {

namespace {

using nlohmann::json;

Vec to_vec(const json& j) {
  Vec v;
  for (const auto& x : j) v.push_back(x.get<double>());
  return v;
}

Rect rect_of(const json& j) {
  return make_rect(to_vec(j.at("lower")), to_vec(j.at("upper")));
}

DisturbanceSpec disturbance_of(const json& j) {
  DisturbanceSpec out;
  for (const auto& d : j) {
    std::string kind = d.at("kind").get<std::string>();
    if (kind == "truncated-gaussian") {
      auto support = d.at("support");
      out.push_back(Disturbance1D::truncated_gaussian(
          d.at("mean").get<double>(), d.at("variance").get<double>(),
          support.at(0).get<double>(), support.at(1).get<double>()));
    } else if (kind == "triangular") {
      out.push_back(Disturbance1D::triangular(d.at("mode").get<double>(),
                                              d.at("half_width").get<double>()));
    } else {
      throw ConfigError("unknown disturbance kind: '" + kind + "'");
    }
  }
  return out;
}

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_absolute()) return p;
  return (base / path).string();
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  std::filesystem::path base = std::filesystem::path(path).parent_path();

  RunConfig cfg;
  try {
    if (j.contains("imc_input")) {
      cfg.imc_input = resolve(base, j.at("imc_input").get<std::string>());
      if (!std::filesystem::exists(cfg.imc_input))
        throw ConfigError("imc_input file does not exist: " + cfg.imc_input);
    }
    if (j.contains("model")) {
      const auto& m = j.at("model");
      Rect domain = rect_of(m.at("domain"));
      DisturbanceSpec w = disturbance_of(m.at("disturbance"));
      bool clip = m.value("boundary_clipping", true);
      std::string family = m.at("family").get<std::string>();
      const auto& prm = m.at("parameters");
      if (family == "bistable-switch") {
        cfg.model = make_bistable_switch(prm.at("a").get<double>(),
                                         prm.at("b").get<double>(),
                                         prm.at("dt").get<double>(), domain, w, clip);
      } else if (family == "linear") {
        std::vector<Vec> a;
        for (const auto& row : prm.at("A")) a.push_back(to_vec(row));
        cfg.model = make_linear_model(a, domain, w, clip);
      } else {
        throw ConfigError("unknown model family: '" + family + "'");
      }
      cfg.has_model = true;

      if (j.contains("labels"))
        for (const auto& r : j.at("labels")) {
          std::vector<std::string> names;
          for (const auto& p : r.at("props")) names.push_back(p.get<std::string>());
          cfg.labels.push_back({rect_of(r.at("rect")), make_props(std::move(names))});
        }
      for (int g : j.at("partition").at("grid").get<std::vector<int>>())
        cfg.grid.push_back(g);
      if (cfg.grid.size() != cfg.model.dim)
        throw ConfigError("partition grid dimension does not match the model");
    }
    if (!cfg.has_model && cfg.imc_input.empty())
      throw ConfigError("config needs either a model block or imc_input");

    const auto& spec = j.at("spec");
    cfg.dra_path = resolve(base, spec.at("dra").get<std::string>());
    if (!std::filesystem::exists(cfg.dra_path))
      throw ConfigError("dra file does not exist: " + cfg.dra_path);
    cfg.comparison = parse_cmp(spec.at("comparison").get<std::string>());
    cfg.p_sat = spec.at("p_sat").get<double>();
    if (cfg.p_sat < 0.0 || cfg.p_sat > 1.0)
      throw ConfigError("p_sat must lie in [0, 1]");

    if (j.contains("refinement")) {
      const auto& r = j.at("refinement");
      cfg.refinement.v_stop = r.value("v_stop", cfg.refinement.v_stop);
      cfg.refinement.p_stop = r.value("p_stop", cfg.refinement.p_stop);
      cfg.refinement.theta = r.value("theta", cfg.refinement.theta);
      cfg.refinement.max_rounds = r.value("max_rounds", cfg.refinement.max_rounds);
      cfg.refinement.max_cells = r.value("max_cells", cfg.refinement.max_cells);
      if (cfg.refinement.v_stop < 0.0 || cfg.refinement.v_stop > 1.0)
        throw ConfigError("v_stop must lie in [0, 1]");
      if (cfg.refinement.p_stop <= 0.0 || cfg.refinement.p_stop >= 1.0)
        throw ConfigError("p_stop must lie in (0, 1)");
      if (cfg.refinement.theta <= 0.0 || cfg.refinement.theta > 1.0)
        throw ConfigError("theta must lie in (0, 1]");
    }
    if (j.contains("numerics")) {
      const auto& n = j.at("numerics");
      cfg.tol = n.value("tol", cfg.tol);
      cfg.max_iters = n.value("max_iters", cfg.max_iters);
      cfg.seed = n.value("seed", cfg.seed);
    }
    if (j.contains("output")) {
      const auto& o = j.at("output");
      if (o.contains("dir")) cfg.out_dir = resolve(base, o.at("dir").get<std::string>());
      cfg.plot = o.value("plot", cfg.plot);
    }
    cfg.threads = j.value("threads", 0u);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
  return cfg;
}

}  // namespace imcv
