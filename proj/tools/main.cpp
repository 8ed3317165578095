#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "imcv/errors.hpp"
#include "imcv/io.hpp"

namespace {

imcv::Vec parse_point(const std::string& text) {
  imcv::Vec out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IMC abstraction, omega-regular verification and refinement "
               "for mixed monotone stochastic systems"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool seed_set = false, out_set = false, threads_set = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration (JSON)")->required();
    cmd->add_option("--out-dir", out_dir, "output directory")->each([&](const std::string&) {
      out_set = true;
    });
    cmd->add_option("--seed", seed, "RNG seed override")->each([&](const std::string&) {
      seed_set = true;
    });
    cmd->add_option("--threads", threads, "worker threads (0 = all cores)")
        ->each([&](const std::string&) { threads_set = true; });
  };

  auto* abstract_cmd = app.add_subcommand("abstract", "build the IMC abstraction");
  add_common(abstract_cmd);
  auto* verify_cmd = app.add_subcommand("verify", "single verification pass");
  add_common(verify_cmd);
  auto* refine_cmd = app.add_subcommand("refine", "verification-guided refinement loop");
  add_common(refine_cmd);
  auto* sim_cmd = app.add_subcommand("simulate", "sample trajectories of the model");
  add_common(sim_cmd);
  std::string x0_text = "0,0";
  std::size_t horizon = 100, n_traj = 1;
  sim_cmd->add_option("--x0", x0_text, "initial state, comma separated");
  sim_cmd->add_option("--horizon", horizon, "number of steps");
  sim_cmd->add_option("--n-traj", n_traj, "number of trajectories");

  CLI11_PARSE(app, argc, argv);

  try {
    imcv::RunConfig cfg = imcv::load_config(config_path);
    if (out_set) cfg.out_dir = out_dir;
    if (seed_set) cfg.seed = seed;
    if (threads_set) cfg.threads = threads;

    if (abstract_cmd->parsed()) return imcv::cmd_abstract(cfg);
    if (verify_cmd->parsed()) return imcv::cmd_verify(cfg);
    if (refine_cmd->parsed()) return imcv::cmd_refine(cfg);
    if (sim_cmd->parsed())
      return imcv::cmd_simulate(cfg, parse_point(x0_text), horizon, n_traj);
  } catch (const imcv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const imcv::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
