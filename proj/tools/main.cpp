#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aoicache/config_file.hpp"
#include "aoicache/mdp.hpp"
#include "aoicache/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  std::string stage1;
  std::string stage2;
  int horizon = -1;
  std::vector<double> v_values;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "scenario config file");
  cmd->add_option("--seed", args.seeds, "seed, repeatable");
  cmd->add_option("--out", args.out_dir, "output directory for CSV files");
  cmd->add_option("--stage1", args.stage1, "caching policy: proposed|aoi-greedy|random");
  cmd->add_option("--stage2", args.stage2, "service policy: dpp|latency-only|cost-only");
  cmd->add_option("--horizon", args.horizon, "slots to simulate");
  cmd->add_option("--v", args.v_values, "service cost weight, repeatable for sweeps");
}

aoicache::RunSpec build_spec(const CommonArgs& args) {
  aoicache::RunSpec spec;
  if (!args.config_path.empty()) {
    spec.config = aoicache::parse_config_file(args.config_path);
  }
  if (!args.stage1.empty()) {
    // Reuse the config parser's vocabulary for the override.
    spec.config = aoicache::parse_config_text(
        aoicache::config_to_text(spec.config) + "\n[scenario]\nstage1 = " + args.stage1 + "\n",
        "--stage1");
  }
  if (!args.stage2.empty()) {
    spec.config = aoicache::parse_config_text(
        aoicache::config_to_text(spec.config) + "\n[scenario]\nstage2 = " + args.stage2 + "\n",
        "--stage2");
  }
  if (args.horizon >= 0) spec.config.horizon = args.horizon;
  spec.seeds = args.seeds;
  if (spec.seeds.empty()) spec.seeds.push_back(spec.config.seed);
  spec.out_dir = args.out_dir;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AoI-aware content caching and delivery simulator"};
  app.require_subcommand(1);

  CommonArgs run_args, compare_args, sweep_args;
  CLI::App* run_cmd = app.add_subcommand("run", "run one scenario and write CSV metrics");
  add_common(run_cmd, run_args);
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run every caching policy on the same seeds");
  add_common(compare_cmd, compare_args);
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep-v", "replay one request trace under several service cost weights");
  add_common(sweep_cmd, sweep_args);

  std::string mdp_out;
  int mdp_regions = 2;
  int mdp_cap = 3;
  double mdp_arrival = 0.3;
  CLI::App* export_cmd = app.add_subcommand(
      "export-mdp", "write a small explicit caching MDP as JSON for cross-checking");
  export_cmd->add_option("--out", mdp_out, "output file")->required();
  export_cmd->add_option("--regions", mdp_regions, "regions in the instance");
  export_cmd->add_option("--aoi-cap", mdp_cap, "age discretization cap");
  export_cmd->add_option("--arrival", mdp_arrival, "fresh content probability per region");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      aoicache::RunSpec spec = build_spec(run_args);
      if (!run_args.v_values.empty()) {
        spec.config.v_preset = aoicache::VPreset::Custom;
        spec.config.dpp.cost_weight = run_args.v_values.front();
      }
      return aoicache::cmd_run(spec, std::cout);
    }
    if (*compare_cmd) {
      return aoicache::cmd_compare(build_spec(compare_args), std::cout);
    }
    if (*sweep_cmd) {
      aoicache::RunSpec spec = build_spec(sweep_args);
      return aoicache::cmd_sweep(spec, sweep_args.v_values, std::cout);
    }
    if (*export_cmd) {
      aoicache::MicroInstance micro;
      micro.aoi_max.assign(mdp_regions, mdp_cap);
      micro.aoi_cap = mdp_cap;
      micro.popularity.assign(mdp_regions, 1.0 / mdp_regions);
      micro.arrival_prob = mdp_arrival;
      aoicache::save_mdp(aoicache::build_micro_mdp(micro, 200000), mdp_out);
      std::cout << "wrote " << mdp_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
